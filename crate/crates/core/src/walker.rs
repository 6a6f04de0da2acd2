//! Whole walks: the step graph, longest walks, simulation and termination
//! certificates.
//!
//! Every step raises the index by at least one, so the step graph over
//! indices is a DAG and longest walks follow from one backward DP pass.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigstr;
use crate::bounds;
use crate::error::{Error, Result};
use crate::stepper::{self, RigiditySolution, StepWitness, WalkConfig};

/// Scan margin past the certificate threshold used when none is given.
pub const DEFAULT_SCAN_MARGIN: u64 = 50;

/// Conclusion code carried by every successful certificate.
pub const TERMINATES: &str = "TERMINATES";

/// A start index and the chain of steps taken from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub start: u64,
    pub steps: Vec<StepWitness>,
}

impl WalkRecord {
    pub fn empty(start: u64) -> Self {
        WalkRecord { start, steps: Vec::new() }
    }

    /// Number of steps.
    pub fn len(&self) -> u64 {
        self.steps.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Visited indices, start included.
    pub fn indices(&self) -> Vec<u64> {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.target())).collect()
    }

    /// Visited values, start included.
    pub fn values(&self, cfg: &WalkConfig) -> Result<Vec<BigUint>> {
        let seq = cfg.sequence();
        self.indices().into_iter().map(|n| seq.term(n)).collect()
    }

    /// True if consecutive steps chain and each one validates.
    pub fn validate(&self, cfg: &WalkConfig) -> bool {
        let mut at = self.start;
        for s in &self.steps {
            if s.m != at || !stepper::validate_step(cfg, s) {
                return false;
            }
            at = s.target();
        }
        true
    }
}

/// Outgoing witnesses per source index over `0..=limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepGraph {
    pub limit: u64,
    pub edges: BTreeMap<u64, Vec<StepWitness>>,
}

impl StepGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(Vec::len).sum()
    }

    pub fn has_edge(&self, from: u64, to: u64) -> bool {
        self.edges.get(&from).is_some_and(|ws| ws.iter().any(|w| w.target() == to))
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &StepWitness> {
        self.edges.values().flatten()
    }
}

/// Enumerates steps from every index in `0..=threshold + scan_margin`.
pub fn build_step_graph(cfg: &WalkConfig, scan_margin: u64) -> Result<StepGraph> {
    let limit = bounds::certificate_threshold(cfg)? + scan_margin;
    let per_index: Vec<(u64, Vec<StepWitness>)> = (0..=limit)
        .into_par_iter()
        .map(|m| stepper::enumerate_steps_from(cfg, m).map(|ws| (m, ws)))
        .collect::<Result<_>>()?;
    let edges = per_index.into_iter().filter(|(_, ws)| !ws.is_empty()).collect();
    Ok(StepGraph { limit, edges })
}

/// Longest walk in a step graph.
///
/// Ties go to the smallest start index, then to the lexicographically
/// smallest sequence of jumps (and smallest `t` for equal jumps).
pub fn longest_walk_in(graph: &StepGraph) -> WalkRecord {
    // best[m] = (length, chosen witness)
    let mut best: BTreeMap<u64, (u64, Option<&StepWitness>)> = BTreeMap::new();
    for (&m, ws) in graph.edges.iter().rev() {
        let mut choice: Option<(u64, &StepWitness)> = None;
        for w in ws {
            let len = 1 + best.get(&w.target()).map_or(0, |b| b.0);
            let better = match choice {
                None => true,
                Some((l, c)) => len > l || (len == l && (w.k, w.t) < (c.k, c.t)),
            };
            if better {
                choice = Some((len, w));
            }
        }
        if let Some((len, w)) = choice {
            best.insert(m, (len, Some(w)));
        }
    }
    let Some(max_len) = best.values().map(|b| b.0).max() else {
        return WalkRecord::empty(0);
    };
    let start = best.iter().find(|(_, b)| b.0 == max_len).map(|(&m, _)| m).unwrap_or(0);
    let mut steps = Vec::new();
    let mut at = start;
    while let Some((_, Some(w))) = best.get(&at) {
        steps.push((*w).clone());
        at = w.target();
    }
    WalkRecord { start, steps }
}

/// Maximum step count over all starts, with a deterministic witness walk.
pub fn longest_walk(cfg: &WalkConfig) -> Result<(u64, WalkRecord)> {
    let graph = build_step_graph(cfg, DEFAULT_SCAN_MARGIN)?;
    let walk = longest_walk_in(&graph);
    Ok((walk.len(), walk))
}

/// Result of applying appended blocks to a start index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SimulationOutcome {
    Completed {
        walk: WalkRecord,
    },
    Failed {
        /// Steps applied before the failing block.
        walk: WalkRecord,
        /// Position of the failing block.
        block: usize,
        /// Value the failing block produced.
        #[serde(with = "bigstr")]
        value: BigUint,
    },
}

impl SimulationOutcome {
    pub fn walk(&self) -> &WalkRecord {
        match self {
            SimulationOutcome::Completed { walk } | SimulationOutcome::Failed { walk, .. } => walk,
        }
    }
}

/// Appends each `(t, r)` block in turn, starting from index `start`.
///
/// The landing index of each step is the smallest member index above the
/// current one. A block outside `1 ≤ t ≤ N`, `0 ≤ r < b^t` is a domain error;
/// landing on a non-member is a `Failed` outcome.
pub fn simulate_walk(cfg: &WalkConfig, start: u64, blocks: &[(u32, BigUint)]) -> Result<SimulationOutcome> {
    for (i, (t, r)) in blocks.iter().enumerate() {
        if *t < 1 || *t > cfg.digits {
            return Err(Error::Domain(format!("block {i}: t = {t} outside 1..={}", cfg.digits)));
        }
        if *r >= cfg.power(*t) {
            return Err(Error::Domain(format!("block {i}: r = {r} is not below b^t = {}", cfg.power(*t))));
        }
    }
    let seq = cfg.sequence();
    let mut walk = WalkRecord::empty(start);
    let mut at = start;
    let mut value = seq.term(start)?;
    for (i, (t, r)) in blocks.iter().enumerate() {
        let next = cfg.power(*t) * &value + r;
        let landing = seq
            .indices_in_range(&next, &next)?
            .into_iter()
            .find(|&n| n > at);
        match landing {
            Some(n) if next != value => {
                walk.steps.push(StepWitness { m: at, k: n - at, t: *t, r: r.clone() });
                at = n;
                value = next;
            }
            _ => return Ok(SimulationOutcome::Failed { walk, block: i, value: next }),
        }
    }
    Ok(SimulationOutcome::Completed { walk })
}

/// Exactly checkable evidence that no step leaves any index `≥ threshold`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminationCertificate {
    pub cfg: WalkConfig,
    pub threshold: u64,
    pub k_exact: u64,
    pub m_star: u64,
    pub rigidity_solutions: Vec<RigiditySolution>,
    pub n_star: u64,
    pub scan_margin: u64,
    pub conclusion: String,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Certification(msg.into())
}

impl TerminationCertificate {
    /// Re-verifies every claim from the fields alone.
    ///
    /// 1. `threshold = max(m_star, n_star + k_exact + 1)` and `n_star` is the
    ///    largest index with `U_n ≤ b^N − 1`.
    /// 2. The rigidity preconditions hold at `m_star` (they are monotone, so
    ///    they hold for every larger index) and no jump can reach `m_star`.
    /// 3. The listed rigidity solutions are exactly the `(k, t)` with
    ///    `V_k = b^t`, `k ≤ k_exact`, odd `k` when `Q = −1`.
    /// 4. For `m ≥ threshold` each solution forces `r = U_{m−k}` with
    ///    `m − k ≥ n_star + 1`, hence `r ≥ b^N > b^t − 1`; for `Q = 1` it
    ///    forces `r < 0`.
    /// 5. Direct enumeration from every index in
    ///    `[threshold, threshold + scan_margin]` is empty.
    pub fn check(&self) -> Result<()> {
        let cfg = &self.cfg;
        let seq = cfg.sequence();
        let budget = cfg.budget();

        if self.conclusion != TERMINATES {
            return Err(fail(format!("unexpected conclusion {:?}", self.conclusion)));
        }
        if self.scan_margin < 1 {
            return Err(fail("scan margin must be at least 1"));
        }
        if self.threshold != self.m_star.max(self.n_star + self.k_exact + 1) {
            return Err(fail("threshold != max(m_star, n_star + k_exact + 1)"));
        }
        if seq.term(self.n_star)? > &budget - 1u32 {
            return Err(fail("U_{n_star} <= b^N - 1"));
        }
        if seq.term(self.n_star + 1)? < budget {
            return Err(fail("U_{n_star + 1} >= b^N"));
        }
        if self.k_exact != bounds::jump_bound_exact(cfg)? {
            return Err(fail("k_exact does not match the jump bound"));
        }
        if let Some(cond) = bounds::rigidity_violation(cfg, self.m_star)? {
            return Err(fail(format!("rigidity precondition {cond} fails at m_star = {}", self.m_star)));
        }
        if self.k_exact >= self.m_star {
            return Err(fail("k_exact < m_star"));
        }

        let expected = stepper::rigidity_solutions(cfg)?;
        if expected != self.rigidity_solutions {
            return Err(fail("rigidity solution list is not exactly {V_k = b^t}"));
        }
        for sol in &self.rigidity_solutions {
            if seq.companion_term(sol.k)? != cfg.power(sol.t) {
                return Err(fail(format!("V_{} != b^{}", sol.k, sol.t)));
            }
            if cfg.params.q() == -1 && sol.k % 2 == 0 {
                return Err(fail(format!("even jump {} retained for Q = -1", sol.k)));
            }
            if sol.k > self.k_exact || self.threshold - sol.k < self.n_star + 1 {
                return Err(fail(format!("jump {} does not force r >= b^N at the threshold", sol.k)));
            }
        }

        for m in self.threshold..=self.threshold + self.scan_margin {
            let steps = stepper::enumerate_steps_from(cfg, m)?;
            if let Some(w) = steps.first() {
                return Err(fail(format!("step {w:?} found above the threshold")));
            }
        }
        Ok(())
    }
}

/// Builds and checks a termination certificate.
pub fn certify_termination(cfg: &WalkConfig, scan_margin: u64) -> Result<TerminationCertificate> {
    if scan_margin < 1 {
        return Err(Error::Domain("scan margin must be at least 1".into()));
    }
    let n_star = bounds::n_star(cfg)?;
    let k_exact = bounds::jump_bound_exact(cfg)?;
    let m_star = bounds::m_star(cfg)?;
    let cert = TerminationCertificate {
        cfg: *cfg,
        threshold: m_star.max(n_star + k_exact + 1),
        k_exact,
        m_star,
        rigidity_solutions: stepper::rigidity_solutions(cfg)?,
        n_star,
        scan_margin,
        conclusion: TERMINATES.to_string(),
    };
    cert.check()?;
    Ok(cert)
}
