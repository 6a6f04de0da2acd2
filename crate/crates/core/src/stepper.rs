//! Single digit-appending steps between sequence members.
//!
//! A step from index `m` lands on index `m + k` (with `k ≥ 1`) when
//! `U_{m+k} = b^t·U_m + r` for some `1 ≤ t ≤ N` and `0 ≤ r < b^t`. Leading
//! zeros in the appended block are allowed, so `r` ranges over all of
//! `[0, b^t)`. The degenerate `0 → 0` append is not a step.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::bigstr;
use crate::bounds;
use crate::error::{Error, Result};
use crate::sequences::{Sequence, SequenceParams, DEFAULT_MAX_INDEX};

/// Sequence, base and digit budget of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub params: SequenceParams,
    pub base: u64,
    pub digits: u32,
    #[serde(default = "default_max_index")]
    pub max_index: u64,
}

fn default_max_index() -> u64 {
    DEFAULT_MAX_INDEX
}

impl WalkConfig {
    pub fn new(params: SequenceParams, base: u64, digits: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidConfig(format!("base must satisfy b >= 2, got {base}")));
        }
        if digits < 1 {
            return Err(Error::InvalidConfig("digit budget must satisfy N >= 1".into()));
        }
        Ok(WalkConfig { params, base, digits, max_index: DEFAULT_MAX_INDEX })
    }

    pub fn fibonacci(base: u64, digits: u32) -> Result<Self> {
        Self::new(SequenceParams::FIBONACCI, base, digits)
    }

    pub fn with_max_index(mut self, max_index: u64) -> Self {
        self.max_index = max_index;
        self
    }

    pub fn sequence(&self) -> Sequence {
        Sequence::new(self.params).with_max_index(self.max_index)
    }

    /// `b^t`.
    pub fn power(&self, t: u32) -> BigUint {
        Pow::pow(BigUint::from(self.base), t)
    }

    /// `b^N`.
    pub fn budget(&self) -> BigUint {
        self.power(self.digits)
    }
}

/// One step `U_m → U_{m+k} = b^t·U_m + r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StepWitness {
    pub m: u64,
    pub k: u64,
    pub t: u32,
    #[serde(with = "bigstr")]
    pub r: BigUint,
}

impl StepWitness {
    pub fn target(&self) -> u64 {
        self.m + self.k
    }
}

/// A jump `k` with `V_k = b^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigiditySolution {
    pub k: u64,
    pub t: u32,
}

/// All steps leaving index `m`, sorted by `(t, k)`.
///
/// For each `t` the members of `[b^t·U_m, b^t·U_m + b^t − 1]` are located
/// by index search; both indices of a repeated value are reported.
pub fn enumerate_steps_from(cfg: &WalkConfig, m: u64) -> Result<Vec<StepWitness>> {
    let seq = cfg.sequence();
    let um = seq.term(m)?;
    let mut out = Vec::new();
    let mut bt = BigUint::one();
    for t in 1..=cfg.digits {
        bt *= cfg.base;
        let lo = &bt * &um;
        let hi = &lo + &bt - 1u32;
        for n in seq.indices_in_range(&lo, &hi)? {
            if n <= m {
                continue;
            }
            let un = seq.term(n)?;
            if un == um {
                continue;
            }
            out.push(StepWitness { m, k: n - m, t, r: un - &lo });
        }
    }
    Ok(out)
}

/// Checks every witness invariant exactly.
pub fn validate_step(cfg: &WalkConfig, w: &StepWitness) -> bool {
    if w.k < 1 || w.t < 1 || w.t > cfg.digits {
        return false;
    }
    let bt = cfg.power(w.t);
    if w.r >= bt {
        return false;
    }
    let Some(target) = w.m.checked_add(w.k) else {
        return false;
    };
    let seq = cfg.sequence();
    let (Ok(um), Ok(un)) = (seq.term(w.m), seq.term(target)) else {
        return false;
    };
    un != um && un == bt * um + &w.r
}

/// Every `(k, t)` with `1 ≤ t ≤ N`, `1 ≤ k ≤ K_exact` and `V_k = b^t`.
///
/// When `Q = −1` only odd `k` survive, since the remainder of a large-index
/// step is `−Q^k·U_{m−k}` and must be nonnegative.
pub fn rigidity_solutions(cfg: &WalkConfig) -> Result<Vec<RigiditySolution>> {
    let seq = cfg.sequence();
    let kmax = bounds::jump_bound_exact(cfg)?;
    let mut powers: Vec<BigUint> = Vec::with_capacity(cfg.digits as usize);
    let mut bt = BigUint::one();
    for _ in 0..cfg.digits {
        bt *= cfg.base;
        powers.push(bt.clone());
    }
    let mut out = Vec::new();
    for k in 1..=kmax {
        if cfg.params.q() == -1 && k % 2 == 0 {
            continue;
        }
        let vk = seq.companion_term(k)?;
        if let Some(pos) = powers.iter().position(|p| *p == vk) {
            out.push(RigiditySolution { k, t: pos as u32 + 1 });
        }
    }
    Ok(out)
}

/// Steps from `m` predicted by the rigidity structure, without checking
/// that `m` lies in the regime where the prediction is exact.
///
/// Each solution `(k, t)` with `k < m` yields `(m, k, t, U_{m−k})` when
/// `U_{m−k} < b^t`. For `Q = 1` the forced remainder is negative, so the
/// result is empty.
pub fn rigidity_prediction(cfg: &WalkConfig, m: u64) -> Result<Vec<StepWitness>> {
    if cfg.params.q() == 1 {
        return Ok(Vec::new());
    }
    let seq = cfg.sequence();
    let mut out = Vec::new();
    for sol in rigidity_solutions(cfg)? {
        if sol.k >= m {
            continue;
        }
        let r = seq.term(m - sol.k)?;
        if r < cfg.power(sol.t) {
            out.push(StepWitness { m, k: sol.k, t: sol.t, r });
        }
    }
    out.sort_by_key(|w| (w.t, w.k));
    Ok(out)
}

/// [`rigidity_prediction`] restricted to `m ≥ m_star`, where it must agree
/// with [`enumerate_steps_from`].
pub fn predicted_large_m_steps(cfg: &WalkConfig, m: u64) -> Result<Vec<StepWitness>> {
    let threshold = bounds::m_star(cfg)?;
    if m < threshold {
        return Err(Error::Domain(format!(
            "rigidity prediction needs m >= m_star = {threshold}, got m = {m}"
        )));
    }
    rigidity_prediction(cfg, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib(b: u64, n: u32) -> WalkConfig {
        WalkConfig::fibonacci(b, n).unwrap()
    }

    fn w(m: u64, k: u64, t: u32, r: u32) -> StepWitness {
        StepWitness { m, k, t, r: BigUint::from(r) }
    }

    #[test]
    fn config_validation() {
        assert!(WalkConfig::fibonacci(1, 1).is_err());
        assert!(WalkConfig::fibonacci(2, 0).is_err());
        assert!(WalkConfig::fibonacci(2, 1).is_ok());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_steps_from(&fib(10, 1), 2).unwrap(), vec![w(2, 5, 1, 3)]);
        assert_eq!(enumerate_steps_from(&fib(4, 1), 3).unwrap(), vec![w(3, 3, 1, 0)]);
        assert!(enumerate_steps_from(&fib(10, 1), 7).unwrap().is_empty());
        assert_eq!(enumerate_steps_from(&fib(2, 2), 7).unwrap(), vec![w(7, 3, 2, 3)]);
    }

    #[test]
    fn zero_start_reaches_both_ones_but_not_itself() {
        let steps = enumerate_steps_from(&fib(10, 1), 0).unwrap();
        // 0 → 1 (both indices), 2, 3, 5, 8
        let targets: Vec<u64> = steps.iter().map(|s| s.target()).collect();
        assert_eq!(targets, vec![1, 2, 3, 4, 5, 6]);
        assert!(steps.iter().all(|s| s.k >= 1));
    }

    #[test]
    fn boundary_k1_witness_in_base_two() {
        let steps = enumerate_steps_from(&fib(2, 1), 2).unwrap();
        assert!(steps.contains(&w(2, 1, 1, 0)));
        for m in 3..60 {
            for s in enumerate_steps_from(&fib(2, 1), m).unwrap() {
                assert!(s.k != 1);
            }
        }
    }

    #[test]
    fn validate_examples() {
        let cfg = fib(4, 1);
        assert!(validate_step(&cfg, &w(4, 3, 1, 1)));
        assert!(!validate_step(&cfg, &w(4, 3, 1, 2)));
        assert!(!validate_step(&cfg, &w(4, 3, 1, 4)));
        assert!(!validate_step(&cfg, &w(4, 3, 2, 1)));
        assert!(!validate_step(&cfg, &w(0, 0, 1, 0)));
    }

    #[test]
    fn zero_to_zero_is_not_a_step() {
        let cfg = fib(10, 1);
        // F_0 = 0 and appending "0" gives 0 again; no index k >= 1 has value 0
        assert!(!enumerate_steps_from(&cfg, 0).unwrap().iter().any(|s| s.r == BigUint::from(0u32)));
    }

    #[test]
    fn rigidity_examples() {
        let sol = |k, t| RigiditySolution { k, t };
        assert_eq!(rigidity_solutions(&fib(4, 1)).unwrap(), vec![sol(3, 1)]);
        assert!(rigidity_solutions(&fib(10, 4)).unwrap().is_empty());
        assert_eq!(rigidity_solutions(&fib(2, 2)).unwrap(), vec![sol(3, 2)]);
        let pell = WalkConfig::new(SequenceParams::PELL, 14, 1).unwrap();
        assert_eq!(rigidity_solutions(&pell).unwrap(), vec![sol(3, 1)]);
    }

    #[test]
    fn prediction_examples() {
        let cfg = fib(4, 1);
        assert_eq!(rigidity_prediction(&cfg, 7).unwrap(), vec![w(7, 3, 1, 3)]);
        assert!(rigidity_prediction(&cfg, 8).unwrap().is_empty());
        // m = 7 sits below m_star = 9 for this configuration
        assert!(matches!(predicted_large_m_steps(&cfg, 7), Err(Error::Domain(_))));
        assert!(predicted_large_m_steps(&cfg, 9).unwrap().is_empty());

        let q1 = WalkConfig::new(SequenceParams::new(3, 1).unwrap(), 8, 1).unwrap();
        let ms = bounds::m_star(&q1).unwrap();
        assert!(predicted_large_m_steps(&q1, ms).unwrap().is_empty());
    }

    #[test]
    fn witness_serializes_remainder_as_string() {
        let json = serde_json::to_string(&w(7, 3, 2, 3)).unwrap();
        assert_eq!(json, r#"{"m":7,"k":3,"t":2,"r":"3"}"#);
        let back: StepWitness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w(7, 3, 2, 3));
    }
}
