//! The vertex family `v_{n,m}` (law of `K_n` for i.i.d. uniform sampling on
//! `m` values) and exact extreme-point / hull-membership checks on it.
//!
//! Extremality is always relative to the truncated family
//! `{v_{n,1}, ..., v_{n,m_max}, v_{n,∞}}`: adding generators can only demote a
//! point, so a "not extreme" verdict is final while an "extreme" verdict holds
//! for the truncation only. Hull membership is reported as evidence, never as
//! a proof or refutation of the conjectured description of all laws.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinatorics::{falling_factorial, stirling2_row};
use crate::error::{out_of_range, Error, Result};
use crate::exact_geom::lp::convex_weights;
use crate::exact_geom::point::Point;
use crate::exact_geom::rational::{from_biguint, Rational};
use crate::paintbox::{LawOfK, Support};

pub const MAX_VNM_N: usize = 12;
pub const MAX_VERIFY_N: usize = 8;
pub const MAX_M: u64 = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VnmVector {
    pub n: usize,
    pub m: Support,
    pub law: LawOfK,
}

/// `v_{n,m} = (S(n,k) (m)_k / m^n)_{k=1..n}`; `v_{n,∞} = (0, ..., 0, 1)`.
pub fn v_nm(n: usize, m: Support) -> Result<VnmVector> {
    if !(2..=MAX_VNM_N).contains(&n) {
        return Err(out_of_range("n", format!("{n} not in 2..={MAX_VNM_N}")));
    }
    let probs = match m {
        Support::Infinite => {
            let mut v = vec![Rational::zero(); n];
            v[n - 1] = Rational::one();
            v
        }
        Support::Finite(m) => {
            let row = stirling2_row(n);
            let denom = Rational::from_integer(num_bigint::BigInt::from(m).pow(n as u32));
            (1..=n)
                .map(|k| from_biguint(&(&row[k] * falling_factorial(m, k as u64))) / &denom)
                .collect()
        }
    };
    Ok(VnmVector {
        n,
        m,
        law: LawOfK::new(probs)?,
    })
}

fn as_point(v: &VnmVector) -> Point {
    Point::new(v.law.probs().to_vec()).expect("n >= 2")
}

/// The truncated family `{v_{n,1..=m_max}} ∪ {v_{n,∞}}`, finite members first.
pub fn truncated_family(n: usize, m_max: u64) -> Result<Vec<VnmVector>> {
    let mut out: Vec<VnmVector> = (1..=m_max).map(|m| v_nm(n, Support::Finite(m))).collect::<Result<_>>()?;
    out.push(v_nm(n, Support::Infinite)?);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremeVerdict {
    /// Not a convex combination of the other members of the truncated family.
    ExtremeInTruncation,
    /// A convex combination of other members; final for the full family too.
    NotExtreme,
}

#[derive(Debug, Clone)]
pub struct ExtremesReport {
    pub n: usize,
    pub m_max: u64,
    /// One verdict per finite `m`, ordered by `m`.
    pub verdicts: Vec<(u64, ExtremeVerdict)>,
    pub elapsed: Duration,
}

impl ExtremesReport {
    pub fn non_extreme(&self) -> Vec<u64> {
        self.verdicts
            .iter()
            .filter(|(_, v)| *v == ExtremeVerdict::NotExtreme)
            .map(|(m, _)| *m)
            .collect()
    }

    pub fn all_extreme(&self) -> bool {
        self.non_extreme().is_empty()
    }
}

/// Tests each `v_{n,m}`, `m <= m_max`, against the rest of the truncated family.
pub fn verify_extremes(n: usize, m_max: u64) -> Result<ExtremesReport> {
    if !(2..=MAX_VERIFY_N).contains(&n) {
        return Err(out_of_range("n", format!("{n} not in 2..={MAX_VERIFY_N}")));
    }
    if !(1..=MAX_M).contains(&m_max) {
        return Err(out_of_range("m_max", format!("{m_max} not in 1..={MAX_M}")));
    }
    let start = Instant::now();
    let family: Vec<Point> = truncated_family(n, m_max)?.iter().map(as_point).collect();
    let verdicts = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let idx = (m - 1) as usize;
            let others: Vec<Point> = family
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != idx)
                .map(|(_, p)| p.clone())
                .collect();
            let extreme = convex_weights(&family[idx], &others)?.is_none();
            let verdict = if extreme {
                ExtremeVerdict::ExtremeInTruncation
            } else {
                ExtremeVerdict::NotExtreme
            };
            Ok((m, verdict))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtremesReport {
        n,
        m_max,
        verdicts,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipEvidence {
    /// The law is a convex combination of the listed generators (nonzero weights only).
    Member { weights: Vec<(Support, Rational)> },
    /// Not in the truncated hull. Says nothing about the full, infinite family.
    Inconclusive,
}

impl MembershipEvidence {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipEvidence::Member { .. })
    }
}

/// Exact LP test of `law ∈ conv({v_{n,m} : m <= m_max} ∪ {v_{n,∞}})`.
pub fn hull_membership(law: &LawOfK, n: usize, m_max: u64) -> Result<MembershipEvidence> {
    if law.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: law.n(),
        });
    }
    if !(1..=MAX_M).contains(&m_max) {
        return Err(out_of_range("m_max", format!("{m_max} not in 1..={MAX_M}")));
    }
    let family = truncated_family(n, m_max)?;
    let points: Vec<Point> = family.iter().map(as_point).collect();
    let target = Point::new(law.probs().to_vec())?;
    Ok(match convex_weights(&target, &points)? {
        Some(w) => MembershipEvidence::Member {
            weights: family
                .iter()
                .zip(w)
                .filter(|(_, w)| !w.is_zero())
                .map(|(v, w)| (v.m, w))
                .collect(),
        },
        None => MembershipEvidence::Inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::rat;
    use crate::paintbox::{law_of_kn, RankedDiscreteDistribution};

    #[test]
    fn vnm_examples() {
        assert_eq!(v_nm(3, Support::Finite(3)).unwrap().law.probs(), &[rat(1, 9), rat(6, 9), rat(2, 9)]);
        for n in 2..=8 {
            let v = v_nm(n, Support::Finite(1)).unwrap();
            assert_eq!(v.law.at(1), &rat(1, 1));
        }
        assert_eq!(
            v_nm(4, Support::Finite(2)).unwrap().law.probs(),
            &[rat(1, 8), rat(7, 8), rat(0, 1), rat(0, 1)]
        );
        assert_eq!(v_nm(3, Support::Infinite).unwrap().law.probs(), &[rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert!(v_nm(1, Support::Finite(2)).is_err());
        assert!(v_nm(13, Support::Finite(2)).is_err());
    }

    #[test]
    fn vnm_agrees_with_paintbox_law() {
        for n in 2..=8 {
            for m in 1..=12u64 {
                let u = RankedDiscreteDistribution::uniform(Support::Finite(m));
                assert_eq!(v_nm(n, Support::Finite(m)).unwrap().law, law_of_kn(&u, n).unwrap(), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn n3_all_extreme() {
        let r = verify_extremes(3, 30).unwrap();
        assert_eq!(r.verdicts.len(), 30);
        assert!(r.all_extreme());
    }

    #[test]
    fn n2_only_first_is_extreme() {
        let r = verify_extremes(2, 10).unwrap();
        assert_eq!(r.non_extreme(), (2..=10).collect::<Vec<_>>());
    }

    #[test]
    fn verify_bounds() {
        assert!(verify_extremes(9, 10).is_err());
        assert!(verify_extremes(3, 61).is_err());
        assert!(verify_extremes(3, 0).is_err());
    }

    #[test]
    fn membership_examples() {
        let u5 = RankedDiscreteDistribution::uniform(Support::Finite(5));
        let law = law_of_kn(&u5, 4).unwrap();
        assert!(hull_membership(&law, 4, 30).unwrap().is_member());

        let p = RankedDiscreteDistribution::new(vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        let law = law_of_kn(&p, 4).unwrap();
        let MembershipEvidence::Member { weights } = hull_membership(&law, 4, 30).unwrap() else {
            panic!("expected membership");
        };
        assert_eq!(weights.iter().map(|(_, w)| w.clone()).sum::<Rational>(), rat(1, 1));

        let spike = LawOfK::new(vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(hull_membership(&spike, 4, 30).unwrap(), MembershipEvidence::Inconclusive);
        assert!(hull_membership(&spike, 3, 30).is_err());
    }
}
