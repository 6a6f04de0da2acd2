//! Exact sign tests for numbers of the form `x + y·√d`.
//!
//! Powers of the dominant root `ρ = (P + √D)/2` of `x² − Px + Q` are
//! `ρ^j = (V_j + U_j·√D)/2`, so comparing a power of `ρ` against an integer
//! reduces to the sign of a quadratic surd with integer coefficients. The
//! sign is decided by squaring, never by rounding.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Sign of `x + y·√d` for a positive non-square `d`.
pub fn surd_sign(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
    debug_assert!(d.is_positive());
    let sx = x.sign_cmp();
    let sy = y.sign_cmp();
    match (sx, sy) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (a, b) if a == b => a,
        _ => {
            // opposite signs: compare magnitudes x² and y²·d
            let xx = x * x;
            let yyd = y * y * d;
            if x.is_positive() {
                xx.cmp(&yyd)
            } else {
                yyd.cmp(&xx)
            }
        }
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

/// A power `ρ^j` held as `(a + b·√d)/2` with integer `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSurd {
    pub a: BigInt,
    pub b: BigInt,
    pub d: BigInt,
}

impl HalfSurd {
    /// Compares `(a + b√d)/2` against the integer `c`.
    pub fn cmp_int(&self, c: &BigInt) -> Ordering {
        let x = &self.a - c * 2;
        surd_sign(&x, &self.b, &self.d)
    }
}
