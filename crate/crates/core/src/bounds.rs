//! Thresholds and walk-length bounds.
//!
//! All index thresholds are computed exactly. Quantities defined through
//! `log_φ` are found by comparing powers of the dominant root against
//! integers (see [`crate::quadratic`]). Closed-form values are evaluated in
//! fixed point for reporting only and never feed back into exact logic.

use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{self, FixedDecimal, REPORT_DIGITS};
use crate::sequences::Sequence;
use crate::stepper::WalkConfig;
use crate::walker;

/// `max{n ≥ 0 : U_n ≤ b^N − 1}`.
///
/// `U_n` is nondecreasing from index 0, so the scan stops at the first value
/// past the bound; with the repeated Fibonacci value the larger index wins.
pub fn n_star(cfg: &WalkConfig) -> Result<u64> {
    let seq = cfg.sequence();
    let cap = cfg.budget() - 1u32;
    let (p, q) = (cfg.params.p(), cfg.params.q());
    let (mut cur, mut next) = (BigUint::from(0u32), BigUint::from(1u32));
    let mut n = 0u64;
    while next <= cap {
        n += 1;
        if n >= seq.max_index() {
            return Err(Error::IndexLimit { index: n + 1, limit: seq.max_index() });
        }
        // U_{n+1} = P·U_n − Q·U_{n−1}
        let after = if q == -1 { &next * p as u64 + &cur } else { &next * p as u64 - &cur };
        cur = std::mem::replace(&mut next, after);
    }
    Ok(n)
}

/// Smallest `j ≥ 0` with `ρ^j ≥ x`, i.e. `⌈log_ρ x⌉` for `x ≥ 1`.
fn root_log_ceil(seq: &Sequence, x: &BigUint) -> Result<u64> {
    let mut j = 0u64;
    while seq.cmp_root_power(j as i64, x)? == Ordering::Less {
        j += 1;
    }
    Ok(j)
}

fn require_fibonacci(cfg: &WalkConfig, what: &str) -> Result<()> {
    if cfg.params.is_fibonacci() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} is defined for Fibonacci parameters only, got {}", cfg.params)))
    }
}

/// `K = ⌈1 + log_φ(2b^N)⌉`.
pub fn k_paper(cfg: &WalkConfig) -> Result<u64> {
    require_fibonacci(cfg, "K_paper")?;
    let twice = cfg.budget() * 2u32;
    Ok(1 + root_log_ceil(&cfg.sequence(), &twice)?)
}

/// `max{k ≥ 1 : F_{k+1} < 2b^N}`; valid for every source index `m ≥ 1`.
pub fn jump_bound_fibonacci_form(cfg: &WalkConfig) -> Result<u64> {
    require_fibonacci(cfg, "the Fibonacci jump bound")?;
    let seq = cfg.sequence();
    let twice = cfg.budget() * 2u32;
    let mut k = 1u64;
    while seq.term(k + 2)? < twice {
        k += 1;
    }
    Ok(k)
}

/// `max{k ≥ 1 : V_k ≤ 2b^N}`, or 0 when even `V_1` exceeds it.
///
/// For `m ≥ k ≥ 1` the addition formula gives `U_{m+k} ≥ U_m·(V_k − 1)`,
/// while a step has `U_{m+k} < b^N·(U_m + 1) ≤ 2b^N·U_m`.
pub fn jump_bound_companion_form(cfg: &WalkConfig) -> Result<u64> {
    let seq = cfg.sequence();
    let twice = cfg.budget() * 2u32;
    let mut k = 0u64;
    while seq.companion_term(k + 1)? <= twice {
        k += 1;
    }
    Ok(k)
}

/// Largest jump a step from a large enough index can make.
pub fn jump_bound_exact(cfg: &WalkConfig) -> Result<u64> {
    if cfg.params.is_fibonacci() {
        jump_bound_fibonacci_form(cfg)
    } else {
        jump_bound_companion_form(cfg)
    }
}

/// First violated rigidity precondition at index `m`, if any.
///
/// The conditions are: `U_{m−2} > b^N`; `U` strictly increasing from
/// `m − 1` on; `U_m − U_{m−1} > b^N` when `Q = 1`; `V_m > 2b^N + 1`, which
/// rules out steps with `k ≥ m`. Each is monotone in `m`.
pub fn rigidity_violation(cfg: &WalkConfig, m: u64) -> Result<Option<&'static str>> {
    if m < 2 {
        return Ok(Some("m >= 2"));
    }
    let seq = cfg.sequence();
    let budget = cfg.budget();
    if seq.term(m - 2)? <= budget {
        return Ok(Some("U_{m-2} > b^N"));
    }
    if m - 1 < cfg.params.monotone_from() {
        return Ok(Some("U strictly increasing from m-1"));
    }
    if cfg.params.q() == 1 && seq.term(m)? - seq.term(m - 1)? <= budget {
        return Ok(Some("U_m - U_{m-1} > b^N"));
    }
    if seq.companion_term(m)? <= budget * 2u32 + 1u32 {
        return Ok(Some("V_m > 2b^N + 1"));
    }
    Ok(None)
}

/// Smallest index from which the rigidity structure is forced.
///
/// Fibonacci: `⌈log_φ(2b^N)⌉ + 4`. Otherwise the first `m` passing
/// [`rigidity_violation`].
pub fn m_star(cfg: &WalkConfig) -> Result<u64> {
    let seq = cfg.sequence();
    if cfg.params.is_fibonacci() {
        let twice = cfg.budget() * 2u32;
        return Ok(root_log_ceil(&seq, &twice)? + 4);
    }
    let mut m = 2;
    while rigidity_violation(cfg, m)?.is_some() {
        m += 1;
        if m > seq.max_index() {
            return Err(Error::IndexLimit { index: m, limit: seq.max_index() });
        }
    }
    Ok(m)
}

/// `max(m_star, n_star + K_exact + 1)`: no step leaves any index at or above it.
pub fn certificate_threshold(cfg: &WalkConfig) -> Result<u64> {
    Ok(m_star(cfg)?.max(n_star(cfg)? + jump_bound_exact(cfg)? + 1))
}

/// `2N·log_φ b + log_φ 2 + 4` at [`REPORT_DIGITS`] decimal places.
pub fn closed_form(cfg: &WalkConfig) -> Result<FixedDecimal> {
    require_fibonacci(cfg, "the closed-form bound")?;
    Ok(precision::fibonacci_closed_form(cfg.base, cfg.digits, REPORT_DIGITS))
}

/// Decides `bound ≤ 2N·log_φ b + log_φ 2 + 4` exactly, as
/// `φ^{bound−4} ≤ 2·b^{2N}`.
pub fn within_closed_form_exact(cfg: &WalkConfig, bound: u64) -> Result<bool> {
    require_fibonacci(cfg, "the closed-form bound")?;
    let rhs = cfg.budget().pow(2) * 2u32;
    let j = bound as i64 - 4;
    Ok(cfg.sequence().cmp_root_power(j, &rhs)? != Ordering::Greater)
}

/// Every bound quantity for one configuration, plus the measured longest walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub cfg: WalkConfig,
    pub n_star: u64,
    /// `⌈1 + log_φ(2b^N)⌉`; Fibonacci only.
    pub k_paper: Option<u64>,
    pub k_exact: u64,
    pub m_star: u64,
    /// Index at and above which no step exists.
    pub threshold: u64,
    /// `n_star + k_paper` for Fibonacci; `threshold` otherwise (every step
    /// raises the index, and none leaves an index `≥ threshold`).
    pub theorem_bound: u64,
    pub theorem_bound_rule: String,
    /// `2N·log_φ b + log_φ 2 + 4`, decimal string; Fibonacci only.
    pub closed_form: Option<String>,
    /// `2·log_φ b`, decimal string; Fibonacci only.
    pub closed_form_slope: Option<String>,
    pub closed_form_method: String,
    /// Longest walk, in steps.
    pub l_max: u64,
    /// Longest walk, in visited values.
    pub l_max_nodes: u64,
    pub satisfied: bool,
}

impl BoundReport {
    pub fn closed_form_value(&self) -> Option<FixedDecimal> {
        self.closed_form.as_deref().and_then(FixedDecimal::parse)
    }

    pub fn closed_form_slope_value(&self) -> Option<FixedDecimal> {
        self.closed_form_slope.as_deref().and_then(FixedDecimal::parse)
    }
}

pub fn bound_report(cfg: &WalkConfig) -> Result<BoundReport> {
    let n_star = n_star(cfg)?;
    let k_exact = jump_bound_exact(cfg)?;
    let m_star = m_star(cfg)?;
    let threshold = m_star.max(n_star + k_exact + 1);
    let fib = cfg.params.is_fibonacci();
    let k_paper = if fib { Some(k_paper(cfg)?) } else { None };
    let (theorem_bound, rule) = match k_paper {
        Some(k) => (n_star + k, "n_star + k_paper"),
        None => (threshold, "threshold"),
    };
    let (closed_form, closed_form_slope) = if fib {
        let cf = closed_form(cfg)?;
        let slope = precision::fibonacci_slope(cfg.base, REPORT_DIGITS);
        (Some(cf.to_string()), Some(slope.to_string()))
    } else {
        (None, None)
    };
    let (l_max, _) = walker::longest_walk(cfg)?;
    Ok(BoundReport {
        cfg: *cfg,
        n_star,
        k_paper,
        k_exact,
        m_star,
        threshold,
        theorem_bound,
        theorem_bound_rule: rule.to_string(),
        closed_form,
        closed_form_slope,
        closed_form_method: precision::EVALUATION_METHOD.to_string(),
        l_max,
        l_max_nodes: l_max + 1,
        satisfied: l_max <= theorem_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::SequenceParams;

    fn fib(b: u64, n: u32) -> WalkConfig {
        WalkConfig::fibonacci(b, n).unwrap()
    }

    fn lucas(p: i64, q: i64, b: u64, n: u32) -> WalkConfig {
        WalkConfig::new(SequenceParams::new(p, q).unwrap(), b, n).unwrap()
    }

    #[test]
    fn n_star_examples() {
        assert_eq!(n_star(&fib(10, 1)).unwrap(), 6);
        assert_eq!(n_star(&fib(2, 1)).unwrap(), 2);
        assert_eq!(n_star(&fib(10, 2)).unwrap(), 11);
        // Pell: 0, 1, 2, 5, 12, 29 with b^N - 1 = 13
        assert_eq!(n_star(&lucas(2, -1, 14, 1)).unwrap(), 4);
    }

    #[test]
    fn k_paper_examples() {
        assert_eq!(k_paper(&fib(10, 1)).unwrap(), 8);
        assert_eq!(k_paper(&fib(4, 1)).unwrap(), 6);
        assert_eq!(k_paper(&fib(2, 1)).unwrap(), 4);
        assert!(matches!(k_paper(&lucas(2, -1, 10, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn jump_bound_examples() {
        assert_eq!(jump_bound_exact(&fib(10, 1)).unwrap(), 6);
        assert_eq!(jump_bound_companion_form(&fib(10, 1)).unwrap(), 6);
        assert_eq!(jump_bound_exact(&fib(4, 1)).unwrap(), 4);
        assert_eq!(jump_bound_companion_form(&fib(4, 1)).unwrap(), 4);
        assert_eq!(jump_bound_exact(&lucas(2, -1, 14, 1)).unwrap(), 3);
    }

    #[test]
    fn companion_form_never_exceeds_fibonacci_form() {
        for b in 2..=40 {
            for n in 1..=5 {
                let cfg = fib(b, n);
                assert!(jump_bound_companion_form(&cfg).unwrap() <= jump_bound_fibonacci_form(&cfg).unwrap());
            }
        }
    }

    #[test]
    fn m_star_examples() {
        assert_eq!(m_star(&fib(10, 1)).unwrap(), 11);
        assert_eq!(m_star(&fib(2, 1)).unwrap(), 7);
        assert_eq!(m_star(&lucas(3, 1, 8, 1)).unwrap(), 6);
    }

    #[test]
    fn fibonacci_m_star_satisfies_general_conditions() {
        for b in 2..=16 {
            for n in 1..=4 {
                let cfg = fib(b, n);
                let ms = m_star(&cfg).unwrap();
                assert_eq!(rigidity_violation(&cfg, ms).unwrap(), None, "b={b} N={n}");
                assert!(jump_bound_exact(&cfg).unwrap() < ms);
            }
        }
    }

    #[test]
    fn threshold_chain() {
        for b in 2..=16 {
            for n in 1..=4 {
                let cfg = fib(b, n);
                let ns = n_star(&cfg).unwrap();
                assert!(ns >= 2);
                assert!(ns + k_paper(&cfg).unwrap() + 1 >= m_star(&cfg).unwrap());
                let tb = ns + k_paper(&cfg).unwrap();
                assert!(within_closed_form_exact(&cfg, tb).unwrap());
                assert_ne!(closed_form(&cfg).unwrap().cmp_integer_plus(tb as i64, 6), Ordering::Less);
            }
        }
    }

    #[test]
    fn closed_form_exact_test_is_sharp() {
        // closed form at b = 10, N = 1 is 15.01..., so 15 fits and 16 does not
        let cfg = fib(10, 1);
        assert!(within_closed_form_exact(&cfg, 15).unwrap());
        assert!(!within_closed_form_exact(&cfg, 16).unwrap());
    }

    #[test]
    fn report_examples() {
        let r = bound_report(&fib(10, 1)).unwrap();
        assert_eq!((r.n_star, r.k_paper, r.theorem_bound, r.l_max), (6, Some(8), 14, 2));
        assert!(r.satisfied);
        assert!(r.closed_form.as_deref().unwrap().starts_with("15.0103"));
        let r = bound_report(&fib(2, 1)).unwrap();
        assert_eq!(r.theorem_bound, 6);
        let r = bound_report(&lucas(2, -1, 14, 1)).unwrap();
        assert_eq!(r.k_paper, None);
        assert_eq!(r.theorem_bound, r.threshold);
        assert!(r.satisfied);
    }
}
