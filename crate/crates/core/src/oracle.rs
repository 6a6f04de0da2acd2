//! Brute-force digit-string oracle for differential testing.
//!
//! Steps are found by literally writing `U_m` in base `b`, appending every
//! block of `t ≤ N` digits (leading zeros included), reading the result back
//! and looking it up in a table built by the plain recurrence. Nothing here
//! goes through [`crate::sequences::Sequence`] or the interval search of the
//! stepper, so agreement between the two is meaningful.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::stepper::{StepWitness, WalkConfig};

/// Largest base the oracle handles (limit of radix conversion).
pub const MAX_ORACLE_BASE: u64 = 256;

/// Largest `b^N` the oracle will enumerate blocks for.
pub const MAX_ORACLE_BLOCKS: u64 = 1 << 24;

pub struct DigitOracle {
    radix: u32,
    digits: u32,
    table: Vec<BigUint>,
    lookup: HashMap<BigUint, Vec<u64>>,
}

impl DigitOracle {
    /// Prepares an oracle able to answer for every source index `≤ max_m`.
    pub fn new(cfg: &WalkConfig, max_m: u64) -> Result<Self> {
        if cfg.base > MAX_ORACLE_BASE {
            return Err(Error::Domain(format!("digit oracle supports bases up to {MAX_ORACLE_BASE}")));
        }
        if cfg.budget() > BigUint::from(MAX_ORACLE_BLOCKS) {
            return Err(Error::Domain(format!("digit oracle enumerates at most {MAX_ORACLE_BLOCKS} blocks per length")));
        }
        let p = BigUint::from(cfg.params.p() as u64);
        let neg_q = cfg.params.q() == -1;
        let mut table = vec![BigUint::from(0u32), BigUint::from(1u32)];
        while (table.len() as u64) <= max_m {
            table.push(next_term(&table, &p, neg_q));
        }
        // every appended value is below b^N·(U_max_m + 1)
        let mut ceiling = table[max_m as usize].clone() + 1u32;
        for _ in 0..cfg.digits {
            ceiling *= cfg.base;
        }
        while *table.last().unwrap() < ceiling {
            table.push(next_term(&table, &p, neg_q));
        }
        let mut lookup: HashMap<BigUint, Vec<u64>> = HashMap::new();
        for (n, v) in table.iter().enumerate() {
            lookup.entry(v.clone()).or_default().push(n as u64);
        }
        Ok(DigitOracle { radix: cfg.base as u32, digits: cfg.digits, table, lookup })
    }

    /// All steps leaving index `m`, sorted by `(t, k)`.
    pub fn steps_from(&self, m: u64) -> Vec<StepWitness> {
        let radix = self.radix;
        let source = &self.table[m as usize];
        let prefix = source.to_radix_be(radix);
        let mut out = Vec::new();
        for t in 1..=self.digits {
            let mut block = vec![0u8; t as usize];
            loop {
                let mut digits = prefix.clone();
                digits.extend_from_slice(&block);
                let value = BigUint::from_radix_be(&digits, radix).expect("digits are in range");
                if value != *source {
                    if let Some(indices) = self.lookup.get(&value) {
                        let r = BigUint::from_radix_be(&block, radix).expect("digits are in range");
                        for &n in indices.iter().filter(|&&n| n > m) {
                            out.push(StepWitness { m, k: n - m, t, r: r.clone() });
                        }
                    }
                }
                if !increment(&mut block, radix) {
                    break;
                }
            }
        }
        out.sort_by_key(|w| (w.t, w.k));
        out
    }

    /// Longest walk length over starts `0..=max_m`, treating targets past
    /// `max_m` as dead ends.
    pub fn longest_walk_length(&self, max_m: u64) -> u64 {
        let mut best: HashMap<u64, u64> = HashMap::new();
        let mut overall = 0;
        for m in (0..=max_m).rev() {
            let len = self
                .steps_from(m)
                .iter()
                .map(|w| 1 + best.get(&w.target()).copied().unwrap_or(0))
                .max()
                .unwrap_or(0);
            best.insert(m, len);
            overall = overall.max(len);
        }
        overall
    }
}

fn next_term(table: &[BigUint], p: &BigUint, neg_q: bool) -> BigUint {
    let n = table.len();
    if neg_q {
        p * &table[n - 1] + &table[n - 2]
    } else {
        p * &table[n - 1] - &table[n - 2]
    }
}

/// Odometer increment in the given radix; false on wrap-around.
fn increment(block: &mut [u8], radix: u32) -> bool {
    for d in block.iter_mut().rev() {
        if u32::from(*d) + 1 < radix {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_matches_hand_checked_steps() {
        let cfg = WalkConfig::fibonacci(10, 1).unwrap();
        let o = DigitOracle::new(&cfg, 20).unwrap();
        let s = o.steps_from(2);
        assert_eq!(s, vec![StepWitness { m: 2, k: 5, t: 1, r: 3u32.into() }]);
        assert!(o.steps_from(7).is_empty());
        assert_eq!(o.longest_walk_length(20), 2);
    }

    #[test]
    fn odometer_covers_every_block() {
        let mut block = vec![0u8; 2];
        let mut count = 1;
        while increment(&mut block, 3) {
            count += 1;
        }
        assert_eq!(count, 9);
        assert_eq!(block, vec![0, 0]);
    }
}
