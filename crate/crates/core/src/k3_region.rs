//! The set of achievable `(P(K_3 = 1), P(K_3 = 3))` pairs: the convex hull of
//! the points `v_N` coming from uniform distributions on `N` atoms.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::exact_geom::rational::{floor_sqrt, int, Rational};
use crate::paintbox::{q3_closed, RankedDiscreteDistribution, Support};

/// A law of `K_3` written as `(q1, q3)`; `q2 = 1 - q1 - q3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct K3Point {
    pub q1: Rational,
    pub q3: Rational,
}

impl K3Point {
    pub fn new(q1: Rational, q3: Rational) -> Self {
        Self { q1, q3 }
    }

    pub fn q2(&self) -> Rational {
        Rational::one() - &self.q1 - &self.q3
    }

    pub fn of(p: &RankedDiscreteDistribution) -> Self {
        let (q1, _, q3) = q3_closed(p);
        Self { q1, q3 }
    }
}

/// `v_N = (1/N², (N-1)(N-2)/N²)`, and `(0, 1)` for the non-atomic limit.
pub fn v_point(n: Support) -> K3Point {
    match n {
        Support::Finite(big_n) => {
            let nn = Rational::from_integer((big_n * big_n).into());
            let n = big_n as i64;
            K3Point::new(Rational::one() / &nn, int((n - 1) * (n - 2)) / nn)
        }
        Support::Infinite => K3Point::new(Rational::zero(), Rational::one()),
    }
}

/// Magnitude `(N-1)(3N+2)/(2N+1)` of the (non-positive) slope of segment `N`.
fn slope_magnitude(big_n: u64) -> Rational {
    let n = big_n as i64;
    int((n - 1) * (3 * n + 2)) / int(2 * n + 1)
}

/// Slope of the segment from `v_N` to `v_{N+1}`, `-(N-1)(3N+2)/(2N+1)`.
pub fn segment_slope(big_n: u64) -> Result<Rational> {
    if big_n < 1 {
        return Err(domain("segment index N must be at least 1"));
    }
    Ok(-slope_magnitude(big_n))
}

/// Right-hand side `(2N-2)/(2N+1)` of the supporting line through segment `N`.
pub fn segment_level(big_n: u64) -> Rational {
    let n = big_n as i64;
    int(2 * n - 2) / int(2 * n + 1)
}

/// The boundary constraint that decides a membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// `q1 ∈ [0, 1]`, `q3 >= 0` or `q1 + q3 <= 1`.
    Box,
    /// `q1 = 0` forces the limit vertex `(0, 1)`.
    LimitVertex,
    /// Supporting line of segment `N` (between `v_N` and `v_{N+1}`).
    Segment(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionCheck {
    pub inside: bool,
    /// Segments whose supporting lines were tested (one, or two at a vertex abscissa).
    pub segments: Vec<u64>,
    /// Constraints holding with equality, or the first one violated.
    pub active: Vec<Constraint>,
}

/// Membership in `conv{v_N : N = 1, 2, ..., ∞}` with full detail.
pub fn classify(pt: &K3Point) -> RegionCheck {
    let zero = Rational::zero();
    let one = Rational::one();
    let outside = |c: Constraint| RegionCheck {
        inside: false,
        segments: Vec::new(),
        active: vec![c],
    };
    if pt.q1.is_negative() || pt.q1 > one || pt.q3.is_negative() {
        return outside(Constraint::Box);
    }
    let sum = &pt.q1 + &pt.q3;
    if sum > one {
        return outside(Constraint::Box);
    }
    if pt.q1.is_zero() {
        let inside = pt.q3.is_one();
        return RegionCheck {
            inside,
            segments: Vec::new(),
            active: vec![Constraint::LimitVertex],
        };
    }

    // Bracket: N = floor(sqrt(1/q1)), so 1/(N+1)² < q1 <= 1/N².
    let big_n = floor_sqrt(&(one.clone() / &pt.q1))
        .to_u64()
        .expect("q1 > 0 keeps N finite");
    let at_vertex = pt.q1 == v_point(Support::Finite(big_n)).q1;
    let mut segments = Vec::with_capacity(2);
    if at_vertex && big_n >= 2 {
        segments.push(big_n - 1);
    }
    segments.push(big_n);

    let mut active = Vec::new();
    let mut inside = true;
    if sum == one {
        active.push(Constraint::Box);
    }
    for &s in &segments {
        let lhs = if s == 1 {
            pt.q3.clone()
        } else {
            &pt.q3 + slope_magnitude(s) * &pt.q1
        };
        let rhs = segment_level(s);
        if lhs < rhs {
            inside = false;
            active = vec![Constraint::Segment(s)];
            break;
        }
        if lhs == rhs {
            active.push(Constraint::Segment(s));
        }
    }
    if inside && pt.q3 == zero && !active.contains(&Constraint::Segment(1)) {
        active.push(Constraint::Box);
    }
    RegionCheck {
        inside,
        segments,
        active,
    }
}

pub fn contains(pt: &K3Point) -> bool {
    classify(pt).inside
}

/// Largest possible `P(K_n = 2)`, namely `1 - 2^{1-n}`.
pub fn bound_q2_max(n: u32) -> Result<Rational> {
    if n < 3 {
        return Err(domain("the P(K_n = 2) bound is stated for n >= 3"));
    }
    let pow2 = Rational::from_integer(num_bigint::BigInt::from(2u32).pow(n - 1));
    Ok(Rational::one() - Rational::one() / pow2)
}

/// Checks `Q(λu_N + (1-λ)u_{2N}) = λ²Q(u_N) + (1-λ²)Q(u_{2N})` exactly.
pub fn mixture_identity_check(big_n: u64, lambda: &Rational) -> Result<bool> {
    if big_n < 1 {
        return Err(domain("N must be at least 1"));
    }
    let un = RankedDiscreteDistribution::uniform(Support::Finite(big_n));
    let u2n = RankedDiscreteDistribution::uniform(Support::Finite(2 * big_n));
    let lhs = K3Point::of(&un.mix(&u2n, lambda)?);
    let l2 = lambda * lambda;
    let rest = Rational::one() - &l2;
    let (a, b) = (K3Point::of(&un), K3Point::of(&u2n));
    let rhs = K3Point::new(&l2 * &a.q1 + &rest * &b.q1, &l2 * &a.q3 + &rest * &b.q3);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::rat;
    use crate::paintbox::f_of;

    fn pt(a: (i64, i64), b: (i64, i64)) -> K3Point {
        K3Point::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn v_points() {
        assert_eq!(v_point(Support::Finite(1)), pt((1, 1), (0, 1)));
        assert_eq!(v_point(Support::Finite(2)), pt((1, 4), (0, 1)));
        assert_eq!(v_point(Support::Finite(3)), pt((1, 9), (2, 9)));
        assert_eq!(v_point(Support::Finite(4)), pt((1, 16), (6, 16)));
        assert_eq!(v_point(Support::Infinite), pt((0, 1), (1, 1)));
    }

    #[test]
    fn slopes() {
        assert_eq!(segment_slope(1).unwrap(), rat(0, 1));
        assert_eq!(segment_slope(2).unwrap(), rat(-8, 5));
        assert!(segment_slope(0).is_err());
        for n in 1..100 {
            // Slopes equal 2 - f(N) and the chord through consecutive vertices.
            assert_eq!(segment_slope(n).unwrap(), int(2) - f_of(n));
            let (a, b) = (v_point(Support::Finite(n)), v_point(Support::Finite(n + 1)));
            assert_eq!((&b.q3 - &a.q3) / (&b.q1 - &a.q1), segment_slope(n).unwrap());
        }
    }

    #[test]
    fn slopes_decrease_along_the_left_walk() {
        // Walking from v_1 towards v_∞ the q1 coordinate decreases, so the
        // boundary turns left exactly when consecutive slopes strictly decrease.
        for n in 1..100 {
            assert!(segment_slope(n + 1).unwrap() < segment_slope(n).unwrap());
            assert!(slope_magnitude(n + 1) > slope_magnitude(n));
        }
    }

    #[test]
    fn membership_examples() {
        let v3 = v_point(Support::Finite(3));
        let c = classify(&v3);
        assert!(c.inside);
        assert_eq!(c.segments, vec![2, 3]);
        assert_eq!(c.active, vec![Constraint::Segment(2), Constraint::Segment(3)]);
        assert!(!contains(&pt((1, 9), (1, 100))));
        assert!(contains(&pt((1, 6), (1, 6))));
        assert!(contains(&v_point(Support::Infinite)));
        assert!(!contains(&pt((0, 1), (1, 2))));
        assert!(!contains(&pt((1, 2), (2, 3))));
        assert!(!contains(&pt((-1, 2), (1, 2))));
        assert!(contains(&pt((1, 1), (0, 1))));
        assert!(contains(&pt((1, 2), (0, 1))));
    }

    #[test]
    fn q2_bound() {
        assert_eq!(bound_q2_max(3).unwrap(), rat(3, 4));
        assert_eq!(bound_q2_max(4).unwrap(), rat(7, 8));
        assert_eq!(bound_q2_max(10).unwrap(), rat(511, 512));
        assert!(bound_q2_max(2).is_err());
    }

    #[test]
    fn mixture_examples() {
        for n in 1..=5 {
            assert!(mixture_identity_check(n, &rat(0, 1)).unwrap());
            assert!(mixture_identity_check(n, &rat(1, 1)).unwrap());
        }
        assert!(mixture_identity_check(1, &rat(1, 2)).unwrap());
        let mixed = RankedDiscreteDistribution::new(vec![rat(3, 4), rat(1, 4)]).unwrap();
        assert_eq!(K3Point::of(&mixed), pt((7, 16), (0, 1)));
        assert!(mixture_identity_check(3, &rat(1, 3)).unwrap());
        assert!(mixture_identity_check(1, &rat(3, 2)).is_err());
    }
}
