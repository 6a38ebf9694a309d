//! Arbitrary-precision rationals and the handful of helpers the rest of the
//! crate leans on.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{domain, Result};

/// Exact rational scalar, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_biguint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

/// Parses `a/b`, `-a/b` or a bare integer. Whitespace around the value is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(domain("empty rational literal"));
    }
    let valid = t
        .chars()
        .enumerate()
        .all(|(i, c)| c.is_ascii_digit() || c == '/' || ((c == '-' || c == '+') && i == 0));
    if !valid || t.matches('/').count() > 1 {
        return Err(domain(format!("malformed rational `{t}`")));
    }
    if let Some((_, den)) = t.split_once('/') {
        if den.trim_start_matches('0').is_empty() {
            return Err(domain(format!("zero denominator in `{t}`")));
        }
    }
    Rational::from_str(t).map_err(|_| domain(format!("malformed rational `{t}`")))
}

/// Canonical `numerator/denominator` rendering; integers keep the `/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Lossy conversion used only at output boundaries and for float sampling.
pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to scaling when either part overflows f64 on its own.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Largest integer `r` with `r^2 <= x`, for `x >= 0`.
pub fn floor_sqrt(x: &Rational) -> BigInt {
    assert!(!x.is_negative(), "floor_sqrt of a negative rational");
    x.floor().to_integer().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-2/6", "7", "+5/10", "0"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&parse_rational("-2/6").unwrap()), "-1/3");
        assert_eq!(format_rational(&int(7)), "7/1");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "a/b", "1.5", "1/2/3", "--1", "1/-2"] {
            assert!(parse_rational(s).is_err(), "{s} should be rejected");
        }
    }

    #[test]
    fn floor_sqrt_matches_definition() {
        assert_eq!(floor_sqrt(&rat(81, 1)), BigInt::from(9));
        assert_eq!(floor_sqrt(&rat(80, 1)), BigInt::from(8));
        assert_eq!(floor_sqrt(&rat(99, 10)), BigInt::from(3));
        assert_eq!(floor_sqrt(&rat(1, 2)), BigInt::from(0));
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let big = Rational::new(BigInt::from(10).pow(400) + 1u32, BigInt::from(10).pow(400) * 4);
        assert!((to_f64(&big) - 0.25).abs() < 1e-12);
    }
}
