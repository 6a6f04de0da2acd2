//! Fixed-point decimal evaluation of logarithms in base φ.
//!
//! Used only for reporting closed-form bound values. Everything is integer
//! arithmetic on values scaled by a power of ten; series are summed with
//! guard digits and the result is truncated to the requested precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Pow, Signed, Zero};

/// Decimal digits carried by reported closed-form values.
pub const REPORT_DIGITS: u32 = 64;

const GUARD_DIGITS: u32 = 24;

/// Human-readable statement of how closed forms are evaluated.
pub const EVALUATION_METHOD: &str = "fixed-point decimal, 64 digits (24 guard digits); \
ln x = 2 atanh((x-1)/(x+1)), ln phi = atanh(1/sqrt 5); truncation error below 1e-60";

/// A decimal value `scaled / 10^digits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedDecimal {
    scaled: BigInt,
    digits: u32,
}

fn pow10(d: u32) -> BigInt {
    Pow::pow(BigInt::from(10u32), d)
}

impl FixedDecimal {
    pub fn from_integer(v: i64, digits: u32) -> Self {
        FixedDecimal { scaled: BigInt::from(v) * pow10(digits), digits }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn scaled(&self) -> &BigInt {
        &self.scaled
    }

    /// Drops digits below `10^{-digits}`, rounding toward negative infinity.
    pub fn truncate(&self, digits: u32) -> Self {
        if digits >= self.digits {
            return FixedDecimal {
                scaled: &self.scaled * pow10(digits - self.digits),
                digits,
            };
        }
        let div = pow10(self.digits - digits);
        let mut q = &self.scaled / &div;
        if self.scaled.is_negative() && !(&self.scaled % &div).is_zero() {
            q -= 1;
        }
        FixedDecimal { scaled: q, digits }
    }

    /// Compares against `integer + 10^{-slack_digits}`.
    pub fn cmp_integer_plus(&self, integer: i64, slack_digits: u32) -> Ordering {
        let rhs = BigInt::from(integer) * pow10(self.digits)
            + if slack_digits <= self.digits { pow10(self.digits - slack_digits) } else { BigInt::zero() };
        self.scaled.cmp(&rhs)
    }

    /// Absolute difference from `other`, at the finer of the two scales.
    pub fn abs_diff(&self, other: &FixedDecimal) -> FixedDecimal {
        let d = self.digits.max(other.digits);
        let a = self.truncate(d).scaled;
        let b = other.truncate(d).scaled;
        FixedDecimal { scaled: (a - b).abs(), digits: d }
    }

    /// Ceiling as an integer.
    pub fn ceil(&self) -> BigInt {
        let div = pow10(self.digits);
        let q = &self.scaled / &div;
        if self.scaled.is_positive() && !(&self.scaled % &div).is_zero() {
            q + 1
        } else {
            q
        }
    }

    /// Renders with exactly `places` fractional digits (truncated).
    pub fn to_string_places(&self, places: u32) -> String {
        let t = self.truncate(places);
        let neg = t.scaled.is_negative();
        let mag = t.scaled.abs().to_string();
        let places = places as usize;
        let padded = if mag.len() <= places { format!("{}{}", "0".repeat(places + 1 - mag.len()), mag) } else { mag };
        let (int, frac) = padded.split_at(padded.len() - places);
        let sign = if neg { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Parses a plain decimal string such as `"15.0103"`.
    pub fn parse(s: &str) -> Option<Self> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() || !int.bytes().chain(frac.bytes()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let mag = BigUint::parse_bytes(format!("{int}{frac}").as_bytes(), 10)?;
        let sign = if neg { Sign::Minus } else { Sign::Plus };
        Some(FixedDecimal { scaled: BigInt::from_biguint(sign, mag), digits: frac.len() as u32 })
    }
}

impl fmt::Display for FixedDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_places(self.digits))
    }
}

/// `atanh(p/q)·10^w` for `0 ≤ p < q`.
fn atanh_ratio(p: &BigInt, q: &BigInt, w: u32) -> BigInt {
    let scale = pow10(w);
    let mut term = &scale * p / q;
    let p2 = p * p;
    let q2 = q * q;
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !term.is_zero() {
        sum += &term / (2 * n + 1);
        term = term * &p2 / &q2;
        n += 1;
    }
    sum
}

/// `ln x · 10^w` for an integer `x ≥ 1`.
fn ln_int(x: &BigInt, w: u32) -> BigInt {
    atanh_ratio(&(x - 1), &(x + 1), w) * 2
}

/// `ln φ · 10^w`, via `ln φ = atanh(1/√5) = (1/√5)·Σ 1/((2n+1)·5^n)`.
fn ln_phi(w: u32) -> BigInt {
    let scale = pow10(w);
    let mut term = scale.clone();
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !term.is_zero() {
        sum += &term / (2 * n + 1);
        term /= 5;
        n += 1;
    }
    let sqrt5 = (BigInt::from(5) * &scale * &scale).sqrt();
    sum * scale / sqrt5
}

/// `log_φ x` for an integer `x ≥ 1`, to `digits` decimal places.
pub fn log_phi(x: u64, digits: u32) -> FixedDecimal {
    let w = digits + GUARD_DIGITS;
    let num = ln_int(&BigInt::from(x), w);
    let den = ln_phi(w);
    FixedDecimal { scaled: num * pow10(w) / den, digits: w }.truncate(digits)
}

/// `2N·log_φ b + log_φ 2 + 4`.
pub fn fibonacci_closed_form(base: u64, digits_n: u32, digits: u32) -> FixedDecimal {
    let w = digits + GUARD_DIGITS;
    let lb = log_phi(base, w);
    let l2 = log_phi(2, w);
    let scaled = lb.scaled * (2 * u64::from(digits_n)) + l2.scaled + BigInt::from(4) * pow10(w);
    FixedDecimal { scaled, digits: w }.truncate(digits)
}

/// `2·log_φ b`, the per-digit slope of the closed form.
pub fn fibonacci_slope(base: u64, digits: u32) -> FixedDecimal {
    let w = digits + GUARD_DIGITS;
    let lb = log_phi(base, w);
    FixedDecimal { scaled: lb.scaled * 2, digits: w }.truncate(digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_logarithms() {
        // log_φ 10 = 4.784971966781665..., 2·log_φ 10 = 9.569943933563331942...
        let s = fibonacci_slope(10, 30);
        assert_eq!(s.to_string_places(18), "9.569943933563331942");
        // log_φ 1 = 0
        assert_eq!(log_phi(1, 20).to_string_places(20), "0.00000000000000000000");
        // log_φ 2 = 1.440420090412556479...
        assert_eq!(log_phi(2, 18).to_string_places(18), "1.440420090412556479");
    }

    #[test]
    fn closed_form_for_base_ten() {
        let cf = fibonacci_closed_form(10, 1, REPORT_DIGITS);
        assert_eq!(cf.to_string_places(12), "15.010364023975");
        assert_eq!(cf.ceil(), BigInt::from(16));
        assert_eq!(cf.cmp_integer_plus(14, 6), Ordering::Greater);
    }

    #[test]
    fn parse_and_display() {
        let d = FixedDecimal::parse("15.0103").unwrap();
        assert_eq!(d.to_string(), "15.0103");
        assert_eq!(FixedDecimal::parse("-0.5").unwrap().to_string(), "-0.5");
        assert!(FixedDecimal::parse("1e5").is_none());
        assert_eq!(FixedDecimal::from_integer(3, 2).to_string(), "3.00");
    }
}
