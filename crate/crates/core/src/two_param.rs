//! The Ewens–Pitman two-parameter family and its `K_3` laws.
//!
//! Main parameters `0 <= α < 1, θ > -α` are reparameterized along rays
//! `α = m(1 + θ)` through `(0, -1)`. On each ray the `m`-dual of `θ` swaps
//! `P(K_3 = 1)` and `P(K_3 = 3)` while preserving `P(K_3 = 2)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::combinatorics::IntegerPartition;
use crate::eppf::{law_from_eppf, EppfTable};
use crate::paintbox::LawOfK;
use crate::error::{domain, out_of_range, Error, Result};
use crate::exact_geom::quadratic::QuadraticNumber;
use crate::exact_geom::rational::{format_rational, int, rat, Rational};

pub const MAX_EPPF_LEVEL: usize = 30;

pub type K3Law = (Rational, Rational, Rational);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `0 <= α < 1`, `θ > -α`.
    Main,
    /// `α < 0`, `θ = -mα`: sampling from a symmetric Dirichlet on `m` atoms.
    Exceptional { m: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamsAT {
    alpha: Rational,
    theta: Rational,
    regime: Regime,
}

impl ParamsAT {
    pub fn new(alpha: Rational, theta: Rational) -> Result<Self> {
        let regime = if !alpha.is_negative() {
            if alpha >= Rational::one() || theta <= -alpha.clone() {
                return Err(domain(format!(
                    "(α, θ) = ({}, {}) needs 0 <= α < 1 and θ > -α",
                    format_rational(&alpha),
                    format_rational(&theta)
                )));
            }
            Regime::Main
        } else {
            let m = -&theta / &alpha;
            if !m.is_integer() || !m.is_positive() {
                return Err(domain(format!(
                    "α = {} < 0 needs θ = -mα for a positive integer m",
                    format_rational(&alpha)
                )));
            }
            let m = m.to_integer().try_into().map_err(|_| out_of_range("m", "too large"))?;
            Regime::Exceptional { m }
        };
        Ok(Self { alpha, theta, regime })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// The ray through these parameters, for the main regime.
    pub fn m_ray(&self) -> Option<MRay> {
        match self.regime {
            Regime::Main => Some(MRay {
                m: &self.alpha / (Rational::one() + &self.theta),
                theta: self.theta.clone(),
            }),
            Regime::Exceptional { .. } => None,
        }
    }
}

impl fmt::Display for ParamsAT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(α={}, θ={})", format_rational(&self.alpha), format_rational(&self.theta))
    }
}

/// A point `(m, θ)` on the ray `α = m(1 + θ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MRay {
    m: Rational,
    theta: Rational,
}

impl MRay {
    pub fn new(m: Rational, theta: Rational) -> Result<Self> {
        if m.is_negative() {
            return Err(domain("m must be nonnegative"));
        }
        if !in_m_domain(&m, &theta) {
            return Err(domain(format!(
                "θ = {} outside the open domain for m = {}",
                format_rational(&theta),
                format_rational(&m)
            )));
        }
        Ok(Self { m, theta })
    }

    pub fn m(&self) -> &Rational {
        &self.m
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn alpha(&self) -> Rational {
        &self.m * (Rational::one() + &self.theta)
    }

    pub fn params(&self) -> ParamsAT {
        ParamsAT::new(self.alpha(), self.theta.clone()).expect("ray points are main-regime parameters")
    }
}

/// `-m/(m+1) < θ < (1-m)/m`, with no upper bound when `m = 0`.
pub fn in_m_domain(m: &Rational, theta: &Rational) -> bool {
    if m.is_negative() {
        return false;
    }
    let one = Rational::one();
    if theta <= &(-m / (m + &one)) {
        return false;
    }
    m.is_zero() || theta < &((&one - m) / m)
}

/// `Π_{i=1}^{k-1}(θ+iα) Π_j (1-α)_{n_j-1} / (θ+1)_{n-1}`, i.e. the usual
/// formula with the common factor `θ` cancelled so that `θ = 0` is allowed.
pub fn eppf_at(params: &ParamsAT, lambda: &IntegerPartition) -> Result<Rational> {
    let n = lambda.level();
    if n > MAX_EPPF_LEVEL {
        return Err(out_of_range("level", format!("{n} > {MAX_EPPF_LEVEL}")));
    }
    let (a, t) = (&params.alpha, &params.theta);
    let mut num = Rational::one();
    for i in 1..lambda.len() {
        num *= t + a * int(i as i64);
    }
    for &nj in lambda.parts() {
        for r in 1..nj {
            num *= int(r as i64) - a;
        }
    }
    let mut den = Rational::one();
    for i in 1..n {
        den *= t + int(i as i64);
    }
    Ok(num / den)
}

/// The EPPF table of the two-parameter model at level `m`.
pub fn ewens_pitman_table(params: &ParamsAT, m: usize) -> Result<EppfTable> {
    EppfTable::from_fn(m, |lambda| eppf_at(params, lambda))
}

/// Law of `K_n` from the EPPF tabulated at level `n`.
pub fn law_at(params: &ParamsAT, n: usize) -> Result<LawOfK> {
    law_from_eppf(&ewens_pitman_table(params, n)?, n)
}

/// `(P(K_3=1), P(K_3=2), P(K_3=3))` in closed form.
pub fn k3_law_at(params: &ParamsAT) -> K3Law {
    k3_formula(&params.alpha, &params.theta)
}

/// The closed-form `K_3` expressions at any `(α, θ)` with `θ ∉ {-1, -2}`,
/// including boundary points that are not valid parameters.
pub fn k3_law_formula(alpha: &Rational, theta: &Rational) -> Result<K3Law> {
    if theta == &int(-1) || theta == &int(-2) {
        return Err(domain("θ = -1 or -2 makes the denominator vanish"));
    }
    Ok(k3_formula(alpha, theta))
}

fn k3_formula(a: &Rational, t: &Rational) -> K3Law {
    let one = Rational::one();
    let two = int(2);
    let den = (&one + t) * (&two + t);
    let q1 = (&one - a) * (&two - a) / &den;
    let q2 = int(3) * (&one - a) * (t + a) / &den;
    let q3 = (t + a) * (t + a * &two) / &den;
    (q1, q2, q3)
}

/// `q_i^{(m)}(θ)` along the ray `α = m(1 + θ)`.
pub fn k3_law_on_ray(ray: &MRay) -> K3Law {
    let m = QuadraticNumber::from_rational(ray.m.clone());
    let (q1, q2, q3) = k3_law_on_ray_in_field(&m, &QuadraticNumber::from_rational(ray.theta.clone()));
    (
        q1.rational_part().clone(),
        q2.rational_part().clone(),
        q3.rational_part().clone(),
    )
}

fn k3_law_on_ray_in_field(
    m: &QuadraticNumber,
    theta: &QuadraticNumber,
) -> (QuadraticNumber, QuadraticNumber, QuadraticNumber) {
    let c = |x: i64| QuadraticNumber::from(x);
    let mt = m.clone() * theta.clone();
    let den = (c(1) + theta.clone()) * (c(2) + theta.clone());
    let u1 = c(1) - m.clone() - mt.clone();
    let u2 = c(2) - m.clone() - mt.clone();
    let v1 = m.clone() + (m.clone() + c(1)) * theta.clone();
    let v2 = c(2) * m.clone() + (c(2) * m.clone() + c(1)) * theta.clone();
    let q1 = u1.clone() * u2 / den.clone();
    let q2 = c(3) * u1 * v1.clone() / den.clone();
    let q3 = v1 * v2 / den;
    (q1, q2, q3)
}

/// `τ(m) = (-m² - 3m + √((m+1)(m+2))) / (1 + 3m + m²)`.
pub fn tau(m: &Rational) -> Result<QuadraticNumber> {
    if m.is_negative() {
        return Err(domain("τ(m) needs m >= 0"));
    }
    let one = Rational::one();
    let d = (m + &one) * (m + int(2));
    let den = &one + m * int(3) + m * m;
    QuadraticNumber::new(-(m * m) - m * int(3), Rational::one(), d).map(|x| x / QuadraticNumber::from_rational(den))
}

/// `9 - 6(√((m+1)(m+2)) - m)`, the maximum of `q_2^{(m)}`.
pub fn q2_max(m: &Rational) -> Result<QuadraticNumber> {
    if m.is_negative() {
        return Err(domain("m must be nonnegative"));
    }
    let d = (m + int(1)) * (m + int(2));
    QuadraticNumber::new(int(9) + m * int(6), int(-6), d)
}

/// `q_i^{(m)}(τ(m))` computed in the field `Q(√((m+1)(m+2)))`.
pub fn k3_law_at_tau(m: &Rational) -> Result<(QuadraticNumber, QuadraticNumber, QuadraticNumber)> {
    let t = tau(m)?;
    Ok(k3_law_on_ray_in_field(&QuadraticNumber::from_rational(m.clone()), &t))
}

/// The `m`-dual `(2 - m(3+m)(1+θ)) / (θ + m(3+m)(1+θ))`.
pub fn dual_theta(m: &Rational, theta: &Rational) -> Result<Rational> {
    if !in_m_domain(m, theta) {
        return Err(domain(format!(
            "θ = {} outside the open domain for m = {}",
            format_rational(theta),
            format_rational(m)
        )));
    }
    let c = m * (int(3) + m) * (int(1) + theta);
    Ok((int(2) - &c) / (theta + &c))
}

/// `4(q1+q3) + 5 q1 q3 - 2(q1² + q3²) - 2`.
pub fn h(q1: &Rational, q3: &Rational) -> Rational {
    int(4) * (q1 + q3) + int(5) * q1 * q3 - int(2) * (q1 * q1 + q3 * q3) - int(2)
}

/// Recovers `(α, θ)` from `(q1, q3)` with `h >= 0`, `q1 + q3 < 1`, `q1, q3 >= 0`.
pub fn inverse_map(q1: &Rational, q3: &Rational) -> Result<ParamsAT> {
    let hv = h(q1, q3);
    if hv.is_negative() || q1.is_negative() || q3.is_negative() || q1 + q3 >= Rational::one() {
        return Err(domain(format!(
            "({}, {}) is outside the image region",
            format_rational(q1),
            format_rational(q3)
        )));
    }
    let d = int(5) * q1 + int(2) * q3 + int(4) * q1 * q3 - int(4) * q1 * q1 - q3 * q3 - int(1);
    if d.is_zero() {
        return Err(Error::Verification("vanishing denominator inside the region".into()));
    }
    let alpha = hv / &d;
    let theta = -(int(8) * q1 + int(5) * q3 + int(4) * q1 * q3 - int(4) * q1 * q1 - q3 * q3 - int(4)) / &d;
    ParamsAT::new(alpha, theta)
}

/// The unique main-regime parameters whose `K_3` law is this one with
/// `q_1` and `q_3` swapped.
pub fn dual_params(params: &ParamsAT) -> Result<ParamsAT> {
    let ray = params
        .m_ray()
        .ok_or_else(|| domain("dual parameters are defined for the main regime only"))?;
    let theta_star = dual_theta(&ray.m, &ray.theta)?;
    let alpha_star = &ray.m * (int(1) + &theta_star);
    ParamsAT::new(alpha_star, theta_star)
}

/// `(4+3m)(q1+q3) + 5 q1 q3 - 2(q1² + q3²) - 2 - 3m = 0`.
pub fn varphi_m_relation_check(m: &Rational, q1: &Rational, q3: &Rational) -> bool {
    varphi_relation(m, q1, q3).is_zero()
}

fn varphi_relation(m: &Rational, q1: &Rational, q3: &Rational) -> Rational {
    (int(4) + int(3) * m) * (q1 + q3) + int(5) * q1 * q3 - int(2) * (q1 * q1 + q3 * q3) - int(2) - int(3) * m
}

/// `φ_m(q1) = 1 + 3m/4 + 5q1/4 - (3/4)√(m² + 6 q1 m + q1(8 + q1))`, the root
/// of the relation in `q3` lying below the line `q1 + q3 = 1`.
pub fn varphi_m(m: &Rational, q1: &Rational) -> Result<QuadraticNumber> {
    if m.is_negative() {
        return Err(domain("m must be nonnegative"));
    }
    let disc = m * m + int(6) * q1 * m + q1 * (int(8) + q1);
    QuadraticNumber::new(int(1) + rat(3, 4) * m + rat(5, 4) * q1, rat(-3, 4), disc)
}

/// Sign of `φ_{m2}(q1) - φ_{m1}(q1)`, decided exactly.
pub fn varphi_compare(m1: &Rational, m2: &Rational, q1: &Rational) -> Result<Ordering> {
    let a = varphi_m(m1, q1)?;
    let b = varphi_m(m2, q1)?;
    // b - a = (b.a - a.a) + b.b√(b.d) - a.b√(a.d)
    let x = QuadraticNumber::new(
        b.rational_part() - a.rational_part(),
        -a.surd_coefficient().clone(),
        a.radicand().clone(),
    )?;
    Ok(crate::exact_geom::quadratic::mixed_sign(
        &x,
        b.surd_coefficient(),
        b.radicand(),
    ))
}

/// `K_3` law at `(α, -mα)`, the symmetric Dirichlet ray.
pub fn dirichlet_ray_law(m: u64, alpha: &Rational) -> Result<K3Law> {
    if !alpha.is_negative() {
        return Err(domain("α must be negative"));
    }
    if m == 0 {
        return Err(domain("m must be positive"));
    }
    let theta = -(alpha * int(m as i64));
    Ok(k3_law_at(&ParamsAT::new(alpha.clone(), theta)?))
}
