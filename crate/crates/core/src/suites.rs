//! Invariant suites run by `lucaswalk verify`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::oracle::DigitOracle;
use crate::sequences::{self, Sequence, SequenceParams};
use crate::stepper::{self, WalkConfig};
use crate::walker;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Growth,
    Differential,
    Rigidity,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "growth" => Ok(Suite::Growth),
            "differential" => Ok(Suite::Differential),
            "rigidity" => Ok(Suite::Rigidity),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidConfig(format!(
                "unknown suite {other:?}; expected identities, growth, differential, rigidity or all"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Identities => "identities",
            Suite::Growth => "growth",
            Suite::Differential => "differential",
            Suite::Rigidity => "rigidity",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub checks: u64,
    pub counterexample: Option<String>,
}

struct Tally {
    suite: &'static str,
    checks: u64,
    counterexample: Option<String>,
}

impl Tally {
    fn new(suite: &'static str) -> Self {
        Tally { suite, checks: 0, counterexample: None }
    }

    /// Records one check; keeps the first failure. Returns false once failed.
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(what());
        }
        self.counterexample.is_none()
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            suite: self.suite.to_string(),
            passed: self.counterexample.is_none(),
            checks: self.checks,
            counterexample: self.counterexample,
        }
    }
}

/// Product bound for `1 ≤ k ≤ m`, the Fibonacci jump identity for
/// `2 ≤ k ≤ m`, and the Lucas addition formula for `0 ≤ k ≤ m`, all with
/// `m ≤ max_m` and `k ≤ max_k`.
pub fn identities(max_m: u64, max_k: u64, grid: &[SequenceParams]) -> Result<SuiteResult> {
    let mut tally = Tally::new("identities");
    let fib = Sequence::fibonacci();
    for m in 1..=max_m {
        for k in 1..=m.min(max_k) {
            let ok = sequences::product_comparability_check(m, k)?;
            if !tally.check(ok, || format!("product bound fails at m={m}, k={k}")) {
                return Ok(tally.finish());
            }
        }
    }
    for m in 2..=max_m {
        for k in 2..=m.min(max_k) {
            // F_{m+k} = (F_{k+2} − F_{k−2})·F_m + (−1)^{k+1}·F_{m−k}
            let coeff = BigInt::from(fib.term(k + 2)?) - BigInt::from(fib.term(k - 2)?);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let rhs = coeff * BigInt::from(fib.term(m)?) + BigInt::from(fib.term(m - k)?) * sign;
            let ok = BigInt::from(fib.term(m + k)?) == rhs;
            if !tally.check(ok, || format!("Fibonacci jump identity fails at m={m}, k={k}")) {
                return Ok(tally.finish());
            }
        }
    }
    for params in grid {
        let seq = Sequence::new(*params);
        for m in 0..=max_m {
            for k in 0..=m.min(max_k) {
                let ok = seq.addition_formula(m, k)? == seq.term(m + k)?;
                if !tally.check(ok, || format!("addition formula fails for ({params}) at m={m}, k={k}")) {
                    return Ok(tally.finish());
                }
            }
        }
    }
    Ok(tally.finish())
}

/// `φ^{m−2} ≤ F_m ≤ φ^{m−1}` for `1 ≤ m ≤ max_m`.
pub fn growth(max_m: u64) -> Result<SuiteResult> {
    let mut tally = Tally::new("growth");
    for m in 1..=max_m {
        let ok = sequences::verify_growth_bounds(m)?;
        if !tally.check(ok, || format!("growth bound fails at m={m}")) {
            break;
        }
    }
    Ok(tally.finish())
}

/// Index range covered by the differential comparison for `cfg`.
pub fn differential_range(cfg: &WalkConfig) -> Result<u64> {
    let a = bounds::n_star(cfg)? + bounds::jump_bound_exact(cfg)? + 50;
    let b = bounds::certificate_threshold(cfg)? + walker::DEFAULT_SCAN_MARGIN;
    Ok(a.max(b))
}

/// Interval enumeration against the digit-string oracle, step by step and
/// for the longest walk length.
pub fn differential(cfgs: &[WalkConfig]) -> Result<SuiteResult> {
    let mut tally = Tally::new("differential");
    for cfg in cfgs {
        let max_m = differential_range(cfg)?;
        let oracle = DigitOracle::new(cfg, max_m)?;
        let mismatches: Vec<u64> = (0..=max_m)
            .into_par_iter()
            .map(|m| stepper::enumerate_steps_from(cfg, m).map(|fast| (m, fast == oracle.steps_from(m))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter_map(|(m, same)| (!same).then_some(m))
            .collect();
        tally.checks += max_m;
        if !tally.check(mismatches.is_empty(), || {
            format!("b={} N={} params={}: witness sets differ at m={:?}", cfg.base, cfg.digits, cfg.params, mismatches)
        }) {
            break;
        }
        let (fast_len, walk) = walker::longest_walk(cfg)?;
        let slow_len = oracle.longest_walk_length(max_m);
        let ok = fast_len == slow_len && walk.validate(cfg);
        if !tally.check(ok, || {
            format!("b={} N={} params={}: longest walk {fast_len} vs oracle {slow_len}", cfg.base, cfg.digits, cfg.params)
        }) {
            break;
        }
    }
    Ok(tally.finish())
}

/// For every `m ∈ [m_star, m_star + 50]` the rigidity prediction equals the
/// enumeration, and when `Q = −1` each witness has odd `k`, `V_k = b^t` and
/// `r = U_{m−k}`.
pub fn rigidity(cfgs: &[WalkConfig]) -> Result<SuiteResult> {
    let mut tally = Tally::new("rigidity");
    'cfgs: for cfg in cfgs {
        let seq = cfg.sequence();
        let ms = bounds::m_star(cfg)?;
        for m in ms..=ms + 50 {
            let fast = stepper::enumerate_steps_from(cfg, m)?;
            let predicted = stepper::predicted_large_m_steps(cfg, m)?;
            let tag = || format!("b={} N={} params={} m={m}", cfg.base, cfg.digits, cfg.params);
            if !tally.check(fast == predicted, || format!("{}: prediction differs", tag())) {
                break 'cfgs;
            }
            if cfg.params.q() == -1 {
                for w in &fast {
                    let ok = w.k % 2 == 1
                        && seq.companion_term(w.k)? == cfg.power(w.t)
                        && w.r == seq.term(m - w.k)?;
                    if !tally.check(ok, || format!("{}: witness {w:?} breaks rigidity", tag())) {
                        break 'cfgs;
                    }
                }
            }
        }
    }
    Ok(tally.finish())
}

/// Options for [`run`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_m: u64,
    pub max_k: u64,
    pub params_grid: Vec<SequenceParams>,
    pub cfgs: Vec<WalkConfig>,
}

pub fn default_params_grid() -> Vec<SequenceParams> {
    vec![SequenceParams::FIBONACCI, SequenceParams::PELL, SequenceParams::new(3, 1).expect("valid")]
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        out.push(identities(opts.max_m, opts.max_k, &opts.params_grid)?);
    }
    if matches!(suite, Suite::Growth | Suite::All) {
        out.push(growth(opts.max_m)?);
    }
    if matches!(suite, Suite::Differential | Suite::All) {
        out.push(differential(&opts.cfgs)?);
    }
    if matches!(suite, Suite::Rigidity | Suite::All) {
        out.push(rigidity(&opts.cfgs)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_inputs() {
        assert!(identities(40, 40, &default_params_grid()).unwrap().passed);
        assert!(growth(100).unwrap().passed);
        let cfgs = vec![WalkConfig::fibonacci(4, 1).unwrap(), WalkConfig::fibonacci(10, 2).unwrap()];
        let d = differential(&cfgs).unwrap();
        assert!(d.passed, "{d:?}");
        assert!(rigidity(&cfgs).unwrap().passed);
    }

    #[test]
    fn suite_names_parse() {
        for s in ["identities", "growth", "differential", "rigidity", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
