//! Elements `a + b√d` of a real quadratic field with rational `a`, `b`, `d`.
//!
//! The radicand is normalised to an integer with square factors removed by
//! trial division up to [`SQUARE_FACTOR_BOUND`]. An element with `b = 0` is a
//! plain rational and combines with elements of any field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{domain, Result};

pub const SQUARE_FACTOR_BOUND: u64 = 10_000;

#[derive(Debug, Clone)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    d: Rational,
}

impl QuadraticNumber {
    /// `a + b√d` for `d >= 0`.
    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Self> {
        if d.is_negative() {
            return Err(domain("negative radicand"));
        }
        // √(p/q) = √(pq) / q
        let q = d.denom().clone();
        let mut radicand = d.numer() * &q;
        let mut scale = Rational::new(BigInt::one(), q);
        let mut f = BigInt::from(2u32);
        while f <= BigInt::from(SQUARE_FACTOR_BOUND) && &f * &f <= radicand {
            let sq = &f * &f;
            while (&radicand % &sq).is_zero() {
                radicand /= &sq;
                scale *= Rational::from_integer(f.clone());
            }
            f += 1u32;
        }
        let mut out = Self {
            a,
            b: b * scale,
            d: Rational::from_integer(radicand),
        };
        if out.d.is_zero() {
            out.b = Rational::zero();
        } else if out.d.is_one() {
            out.a += &out.b;
            out.b = Rational::zero();
        }
        Ok(out)
    }

    pub fn from_rational(a: Rational) -> Self {
        Self {
            a,
            b: Rational::zero(),
            d: Rational::zero(),
        }
    }

    /// `√d`.
    pub fn sqrt(d: Rational) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Rational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_d(&self, other: &Self) -> Rational {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert!(
                    self.d == other.d,
                    "quadratic numbers from different fields: √{} vs √{}",
                    self.d,
                    other.d
                );
                self.d.clone()
            }
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// `a² - b²d`, the field norm.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    pub fn signum(&self) -> Ordering {
        surd_sign(&self.a, &self.b, &self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        super::rational::to_f64(&self.a)
            + super::rational::to_f64(&self.b) * super::rational::to_f64(&self.d).sqrt()
    }

    fn normalized(a: Rational, b: Rational, d: Rational) -> Self {
        let b = if d.is_zero() { Rational::zero() } else { b };
        Self { a, b, d }
    }
}

/// Sign of `a + b√d` for `d >= 0`, decided exactly.
pub fn surd_sign(a: &Rational, b: &Rational, d: &Rational) -> Ordering {
    let sa = a.cmp(&Rational::zero());
    let sb = if d.is_zero() { Ordering::Equal } else { b.cmp(&Rational::zero()) };
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: the larger magnitude wins.
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of `x + c√e` where `x` is itself quadratic over another radicand.
/// Used to compare numbers living in two different quadratic fields.
pub fn mixed_sign(x: &QuadraticNumber, c: &Rational, e: &Rational) -> Ordering {
    let sx = x.signum();
    let sc = if e.is_zero() { Ordering::Equal } else { c.cmp(&Rational::zero()) };
    if sc == Ordering::Equal {
        return sx;
    }
    if sx == Ordering::Equal || sx == sc {
        return sc;
    }
    let x2 = x.clone() * x.clone();
    let c2e = QuadraticNumber::from_rational(c * c * e);
    match (x2 - c2e).signum() {
        Ordering::Greater => sx,
        Ordering::Less => sc,
        Ordering::Equal => Ordering::Equal,
    }
}

impl PartialEq for QuadraticNumber {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadraticNumber {}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.b.is_zero() && !other.b.is_zero() && self.d != other.d {
            return None;
        }
        Some((self.clone() - other.clone()).signum())
    }
}

impl From<Rational> for QuadraticNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for QuadraticNumber {
    fn from(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }
}

impl Add for QuadraticNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.common_d(&rhs);
        Self::normalized(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for QuadraticNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let d = self.common_d(&rhs);
        Self::normalized(self.a - rhs.a, self.b - rhs.b, d)
    }
}

impl Mul for QuadraticNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.common_d(&rhs);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Self::normalized(a, b, d)
    }
}

impl Div for QuadraticNumber {
    type Output = Self;
    /// Panics on division by zero.
    fn div(self, rhs: Self) -> Self {
        let d = self.common_d(&rhs);
        let norm = rhs.norm();
        assert!(!norm.is_zero(), "division by zero in quadratic field");
        let num = self * rhs.conjugate();
        Self::normalized(num.a / &norm, num.b / &norm, d)
    }
}

impl Neg for QuadraticNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::normalized(-self.a, -self.b, self.d)
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", format_rational(&self.a))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                format_rational(&self.a),
                format_rational(&self.b),
                self.d.numer()
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::{int, rat};
    use proptest::prelude::*;

    fn q(a: Rational, b: Rational, d: i64) -> QuadraticNumber {
        QuadraticNumber::new(a, b, int(d)).unwrap()
    }

    #[test]
    fn radicand_normalisation() {
        let x = QuadraticNumber::sqrt(int(12)).unwrap();
        assert_eq!(x.radicand(), &int(3));
        assert_eq!(x.surd_coefficient(), &int(2));
        let y = QuadraticNumber::sqrt(rat(15, 4)).unwrap();
        assert_eq!(y.radicand(), &int(15));
        assert_eq!(y.surd_coefficient(), &rat(1, 2));
        let z = QuadraticNumber::sqrt(rat(9, 4)).unwrap();
        assert!(z.is_rational());
        assert_eq!(z.rational_part(), &rat(3, 2));
        assert!(QuadraticNumber::sqrt(int(-1)).is_err());
    }

    #[test]
    fn sqrt2_squared() {
        let s = QuadraticNumber::sqrt(int(2)).unwrap();
        assert_eq!(s.clone() * s, QuadraticNumber::from(2));
    }

    #[test]
    fn signs() {
        // 3 - 2√2 > 0, 1 - √2 < 0
        assert_eq!(q(int(3), int(-2), 2).signum(), Ordering::Greater);
        assert_eq!(q(int(1), int(-1), 2).signum(), Ordering::Less);
        assert_eq!(q(int(0), int(0), 2).signum(), Ordering::Equal);
        assert!(q(int(1), int(1), 2) > q(int(2), int(0), 2));
    }

    #[test]
    fn mixed_sign_compares_across_fields() {
        // √3 - √2 > 0
        let s3 = QuadraticNumber::sqrt(int(3)).unwrap();
        assert_eq!(mixed_sign(&s3, &int(-1), &int(2)), Ordering::Greater);
        // 1 + √2 - √5 > 0 (2.414 > 2.236)
        let x = q(int(1), int(1), 2);
        assert_eq!(mixed_sign(&x, &int(-1), &int(5)), Ordering::Greater);
        // 1 + √2 - √6 < 0 (2.414 < 2.449)
        assert_eq!(mixed_sign(&x, &int(-1), &int(6)), Ordering::Less);
    }

    fn elem() -> impl Strategy<Value = QuadraticNumber> {
        (-20i64..20, 1i64..7, -20i64..20, 1i64..7)
            .prop_map(|(a, ad, b, bd)| q(rat(a, ad), rat(b, bd), 6))
    }

    proptest! {
        #[test]
        fn field_axioms(x in elem(), y in elem(), z in elem()) {
            prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
            prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
            prop_assert_eq!((x.clone() + y.clone()) + z.clone(), x.clone() + (y.clone() + z.clone()));
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(
                x.clone() * (y.clone() + z.clone()),
                x.clone() * y.clone() + x.clone() * z.clone()
            );
            prop_assert_eq!(x.clone() - x.clone(), QuadraticNumber::from(0));
            if !y.is_zero() {
                prop_assert_eq!((x.clone() / y.clone()) * y.clone(), x.clone());
                prop_assert_eq!(y.clone() / y.clone(), QuadraticNumber::from(1));
            }
        }

        #[test]
        fn ordering_agrees_with_floats(x in elem(), y in elem()) {
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x.partial_cmp(&y).unwrap(), fx.partial_cmp(&fy).unwrap());
            }
        }
    }
}
