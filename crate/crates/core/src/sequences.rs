//! Lucas sequences of the first and second kind.
//!
//! For integer parameters `(P, Q)` the sequences are
//!
//! ```text
//! U_0 = 0, U_1 = 1, U_{n+1} = P·U_n − Q·U_{n−1}
//! V_0 = 2, V_1 = P, V_{n+1} = P·V_n − Q·V_{n−1}
//! ```
//!
//! Fibonacci numbers are `U_n(1, −1)` and the classical Lucas numbers are
//! `V_n(1, −1)`. Only parameters with `|Q| = 1`, a positive non-square
//! discriminant and a positive nondecreasing `U_n` are accepted, so every
//! value handled here is a nonnegative integer.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadratic::HalfSurd;

/// Default ceiling on any index-valued input.
pub const DEFAULT_MAX_INDEX: u64 = 1_000_000;

/// The pair `(P, Q)` of a Lucas sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SequenceParams {
    p: i64,
    q: i64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    p: i64,
    q: i64,
}

impl TryFrom<RawParams> for SequenceParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        SequenceParams::new(raw.p, raw.q)
    }
}

impl From<SequenceParams> for RawParams {
    fn from(p: SequenceParams) -> Self {
        RawParams { p: p.p, q: p.q }
    }
}

impl SequenceParams {
    pub const FIBONACCI: SequenceParams = SequenceParams { p: 1, q: -1 };
    pub const PELL: SequenceParams = SequenceParams { p: 2, q: -1 };

    pub fn new(p: i64, q: i64) -> Result<Self> {
        let invalid = |reason| Err(Error::InvalidParams { p, q, reason });
        if q != 1 && q != -1 {
            return invalid("|Q| must equal 1");
        }
        // |P| is bounded so P² − 4Q cannot overflow.
        if p.unsigned_abs() > 1 << 30 {
            return invalid("|P| too large");
        }
        let disc = p * p - 4 * q;
        if disc <= 0 {
            return invalid("discriminant P^2 - 4Q must be positive");
        }
        if q == -1 && p < 1 {
            return invalid("positivity requires P >= 1 when Q = -1");
        }
        if q == 1 && p < 3 {
            return invalid("positivity requires P >= 3 when Q = 1");
        }
        let root = (disc as u64).isqrt();
        if root * root == disc as u64 {
            return invalid("discriminant P^2 - 4Q must not be a perfect square");
        }
        Ok(SequenceParams { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `D = P² − 4Q`.
    pub fn discriminant(&self) -> i64 {
        self.p * self.p - 4 * self.q
    }

    pub fn is_fibonacci(&self) -> bool {
        *self == Self::FIBONACCI
    }

    /// `Q^k`, always ±1.
    pub fn q_pow(&self, k: u64) -> i64 {
        if self.q == -1 && k % 2 == 1 {
            -1
        } else {
            1
        }
    }

    /// Smallest index from which `U_n` is strictly increasing.
    ///
    /// Only the Fibonacci pair has a repeated value (`F_1 = F_2`); every other
    /// admissible pair is strictly increasing from index 0. All admissible
    /// sequences are nondecreasing from index 0.
    pub fn monotone_from(&self) -> u64 {
        if self.p == 1 {
            2
        } else {
            0
        }
    }
}

impl Default for SequenceParams {
    fn default() -> Self {
        Self::FIBONACCI
    }
}

impl fmt::Display for SequenceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

impl FromStr for SequenceParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("cannot parse params {s:?}, expected \"P,Q\""));
        let (p, q) = s.split_once(',').ok_or_else(bad)?;
        let p = p.trim().parse::<i64>().map_err(|_| bad())?;
        let q = q.trim().parse::<i64>().map_err(|_| bad())?;
        SequenceParams::new(p, q)
    }
}

/// A Lucas sequence together with the index ceiling applied to its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sequence {
    params: SequenceParams,
    max_index: u64,
}

impl Sequence {
    pub fn new(params: SequenceParams) -> Self {
        Sequence { params, max_index: DEFAULT_MAX_INDEX }
    }

    pub fn fibonacci() -> Self {
        Self::new(SequenceParams::FIBONACCI)
    }

    pub fn with_max_index(mut self, max_index: u64) -> Self {
        self.max_index = max_index;
        self
    }

    pub fn params(&self) -> SequenceParams {
        self.params
    }

    pub fn max_index(&self) -> u64 {
        self.max_index
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n > self.max_index {
            Err(Error::IndexLimit { index: n, limit: self.max_index })
        } else {
            Ok(())
        }
    }

    /// `(U_n, V_n)` by fast doubling.
    pub fn term_pair(&self, n: u64) -> Result<(BigUint, BigUint)> {
        self.check_index(n)?;
        let (u, v) = fast_doubling(self.params, n);
        Ok((to_unsigned(u), to_unsigned(v)))
    }

    /// `U_n`.
    pub fn term(&self, n: u64) -> Result<BigUint> {
        self.term_pair(n).map(|(u, _)| u)
    }

    /// `V_n`.
    pub fn companion_term(&self, n: u64) -> Result<BigUint> {
        self.term_pair(n).map(|(_, v)| v)
    }

    /// `U_m·V_k − Q^k·U_{m−k}` for `m ≥ k`. Equals `U_{m+k}`.
    pub fn addition_formula(&self, m: u64, k: u64) -> Result<BigUint> {
        if m < k {
            return Err(Error::Domain(format!("addition formula needs m >= k, got m={m}, k={k}")));
        }
        self.check_index(m)?;
        let um = BigInt::from(self.term(m)?);
        let vk = BigInt::from(self.companion_term(k)?);
        let tail = BigInt::from(self.term(m - k)?) * self.params.q_pow(k);
        Ok(to_unsigned(um * vk - tail))
    }

    /// Smallest `n` with `U_n = v`, or `None` when `v` is not a member
    /// (or would sit past the index ceiling).
    pub fn index_of_value(&self, v: &BigUint) -> Option<u64> {
        let n = self.lower_bound(v).ok()??;
        match self.term(n) {
            Ok(u) if &u == v => Some(n),
            _ => None,
        }
    }

    /// Smallest `n` with `U_n ≥ v`, or `None` if no such index lies within
    /// the ceiling.
    pub fn lower_bound(&self, v: &BigUint) -> Result<Option<u64>> {
        let head = self.params.monotone_from().min(self.max_index + 1);
        for n in 0..head {
            if &self.term(n)? >= v {
                return Ok(Some(n));
            }
        }
        // strictly increasing tail: exponential then binary search
        let mut lo = head;
        let mut step = 1u64;
        let mut hi = loop {
            let probe = lo.saturating_add(step).min(self.max_index);
            if &self.term(probe)? >= v {
                break probe;
            }
            if probe == self.max_index {
                return Ok(None);
            }
            lo = probe + 1;
            step = step.saturating_mul(2);
        };
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if &self.term(mid)? >= v {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(Some(hi))
    }

    /// Every index `n` with `lo ≤ U_n ≤ hi`, in increasing order.
    pub fn indices_in_range(&self, lo: &BigUint, hi: &BigUint) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        if lo > hi {
            return Ok(out);
        }
        let head = self.params.monotone_from();
        for n in 0..head.min(self.max_index + 1) {
            let u = self.term(n)?;
            if &u >= lo && &u <= hi {
                out.push(n);
            }
        }
        let Some(start) = self.lower_bound(lo)? else {
            return Ok(out);
        };
        let mut n = start.max(head);
        if n > self.max_index {
            return Ok(out);
        }
        let (mut cur, mut next) = (self.term(n)?, self.term(n + 1)?);
        let p = BigInt::from(self.params.p);
        let q = BigInt::from(self.params.q);
        while &cur <= hi && n <= self.max_index {
            if &cur >= lo {
                out.push(n);
            }
            let after = to_unsigned(&p * BigInt::from(next.clone()) - &q * BigInt::from(cur));
            cur = std::mem::replace(&mut next, after);
            n += 1;
        }
        Ok(out)
    }

    /// `ρ^j` as an exact half-surd, where `ρ` is the dominant root.
    ///
    /// Negative exponents use `ρ^{−n} = Q^n·(V_n − U_n√D)/2`.
    pub fn root_power(&self, j: i64) -> Result<HalfSurd> {
        let n = j.unsigned_abs();
        self.check_index(n)?;
        let (u, v) = fast_doubling(self.params, n);
        let d = BigInt::from(self.params.discriminant());
        if j >= 0 {
            Ok(HalfSurd { a: v, b: u, d })
        } else {
            let s = self.params.q_pow(n);
            Ok(HalfSurd { a: v * s, b: -u * s, d })
        }
    }

    /// Compares `ρ^j` against the integer `c`.
    pub fn cmp_root_power(&self, j: i64, c: &BigUint) -> Result<Ordering> {
        Ok(self.root_power(j)?.cmp_int(&BigInt::from(c.clone())))
    }
}

fn fast_doubling(params: SequenceParams, n: u64) -> (BigInt, BigInt) {
    let p = BigInt::from(params.p);
    let d = BigInt::from(params.discriminant());
    let q = params.q;
    // (U_i, V_i, Q^i)
    let mut u = BigInt::zero();
    let mut v = BigInt::from(2);
    let mut qi: i64 = 1;
    if n == 0 {
        return (u, v);
    }
    for bit in (0..64 - n.leading_zeros()).rev() {
        let u2 = &u * &v;
        let v2 = &v * &v - 2 * qi;
        u = u2;
        v = v2;
        qi = 1;
        if (n >> bit) & 1 == 1 {
            let u1 = (&p * &u + &v) >> 1;
            let v1 = (&d * &u + &p * &v) >> 1;
            u = u1;
            v = v1;
            qi *= q;
        }
    }
    (u, v)
}

fn to_unsigned(x: BigInt) -> BigUint {
    debug_assert!(!x.is_negative(), "sequence value went negative");
    match x.into_parts() {
        (Sign::Minus, _) => BigUint::zero(),
        (_, mag) => mag,
    }
}

/// Checks `φ^{n−2} ≤ F_n ≤ φ^{n−1}` exactly.
pub fn verify_growth_bounds(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Domain("growth bounds hold for n >= 1 only".into()));
    }
    let fib = Sequence::fibonacci();
    let f = fib.term(n)?;
    let j = n as i64;
    let lower = fib.cmp_root_power(j - 2, &f)? != Ordering::Greater;
    let upper = fib.cmp_root_power(j - 1, &f)? != Ordering::Less;
    Ok(lower && upper)
}

/// Checks `F_{k+1}·F_m ≤ F_{m+k} ≤ F_{k+2}·F_m` exactly.
pub fn product_comparability_check(m: u64, k: u64) -> Result<bool> {
    if m == 0 || k == 0 {
        return Err(Error::Domain(format!("product bound needs m, k >= 1, got m={m}, k={k}")));
    }
    let fib = Sequence::fibonacci();
    let fm = fib.term(m)?;
    let mid = fib.term(m + k)?;
    let low = fib.term(k + 1)? * &fm;
    let high = fib.term(k + 2)? * &fm;
    Ok(low <= mid && mid <= high)
}
