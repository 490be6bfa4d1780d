//! Exact rational helpers.
//!
//! Every density and expansion-ratio comparison in the crate goes through
//! [`Rational`]. Logarithms only appear as *bounds*: [`log2_lower`] returns a
//! rational that is provably at most the true base-2 logarithm, so a
//! threshold built from it is a provable upper bound of the real-valued one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Fixed-point grid used for logarithm lower bounds (2^-32).
const LOG_GRID_BITS: u32 = 32;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_usize(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or a bare integer.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Formats as `"p/q"` in lowest terms (denominator always printed).
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(v: f64) -> Rational {
    Rational::from_float(v).expect("finite float")
}

/// `a/b < c/d` for non-negative integers given as `u128`, without division.
pub fn lt_cross(a: u128, b: u128, c: &Rational) -> bool {
    // a/b < p/q  <=>  a*q < p*b   (b, q > 0)
    let lhs = BigInt::from(a) * c.denom();
    let rhs = c.numer() * BigInt::from(b);
    lhs < rhs
}

/// Rational lower bound on `log2(x)`, exact when `x` is a power of two.
///
/// Requires `x >= 1`.
pub fn log2_lower(x: &Rational) -> Rational {
    assert!(*x >= Rational::one(), "log2_lower requires x >= 1");
    if x.is_integer() {
        let n = x.numer();
        if n.bits() > 0 && (n - BigInt::one()).bits() < n.bits() {
            // n is 2^k
            return int((n.bits() - 1) as i64);
        }
    }
    let approx = to_f64(x).log2();
    let margin = (-30f64).exp2();
    let scale = (LOG_GRID_BITS as f64).exp2();
    let grid = ((approx - margin) * scale).floor();
    let lower = Rational::new(BigInt::from(grid as i64), BigInt::from(1u64 << LOG_GRID_BITS));
    if lower.is_negative() {
        Rational::zero()
    } else {
        lower
    }
}

pub fn log2_lower_usize(x: usize) -> Rational {
    log2_lower(&from_usize(x))
}

/// `floor(log2(x))` for `x >= 1`.
pub fn floor_log2(x: u64) -> u32 {
    63 - x.leading_zeros()
}

/// `floor(log2(log2(x)))` for `x >= 2`; `None` when `x < 2`.
///
/// Uses `floor(log2(y)) = floor(log2(floor(y)))` for `y >= 1`.
pub fn floor_log2_log2(x: u64) -> Option<u32> {
    if x < 2 {
        return None;
    }
    Some(floor_log2(floor_log2(x) as u64))
}

pub fn ceil_f64(v: f64) -> usize {
    v.ceil().max(0.0) as usize
}

pub fn floor_f64(v: f64) -> usize {
    v.floor().max(0.0) as usize
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_pq {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse(" 7 ").unwrap(), int(7));
        assert_eq!(format(&ratio(6, 4)), "3/2");
        assert_eq!(format(&int(2)), "2/1");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn log2_exact_on_powers_of_two() {
        assert_eq!(log2_lower_usize(1 << 16), int(16));
        assert_eq!(log2_lower(&int(16)), int(4));
        assert_eq!(log2_lower_usize(1), int(0));
    }

    #[test]
    fn log2_lower_is_below_truth() {
        for x in [3usize, 5, 7, 12, 100, 1000, 4097, 123_456_789] {
            let lo = log2_lower_usize(x);
            let truth = (x as f64).log2();
            let lo_f = to_f64(&lo);
            assert!(lo_f <= truth, "{x}: {lo_f} > {truth}");
            assert!(truth - lo_f < 1e-8, "{x}: bound too loose");
        }
    }

    #[test]
    fn floor_loglog() {
        assert_eq!(floor_log2_log2(2), Some(0));
        assert_eq!(floor_log2_log2(3), Some(0));
        assert_eq!(floor_log2_log2(4), Some(1));
        assert_eq!(floor_log2_log2(15), Some(1));
        assert_eq!(floor_log2_log2(16), Some(2));
        assert_eq!(floor_log2_log2(65535), Some(3));
        assert_eq!(floor_log2_log2(65536), Some(4));
        assert_eq!(floor_log2_log2(1), None);
    }

    #[test]
    fn cross_compare() {
        assert!(lt_cross(1, 3, &ratio(1, 2)));
        assert!(!lt_cross(1, 2, &ratio(1, 2)));
        assert!(!lt_cross(0, 5, &int(0)));
    }
}
