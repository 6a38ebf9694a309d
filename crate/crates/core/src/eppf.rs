//! Finite exchangeable partitions described by their EPPF.
//!
//! The consistency relation
//! `p(n_1..n_k) = p(n_1..n_k, 1) + Σ_i p(n_1.., n_i + 1, ..n_k)`
//! lets any probability about `Π_n` be written as a nonnegative integer
//! combination of EPPF values at a higher level `m`. [`expand_coefficients`]
//! computes those integer coefficients for `P(K_n = k)` by dynamic programming
//! over integer partitions, one level at a time.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binomial, cluster_count, partitions_of, IntegerPartition};
use crate::error::{out_of_range, Error, Result};
use crate::exact_geom::hull::hull2d;
use crate::exact_geom::point::Point;
use crate::exact_geom::rational::{from_biguint, Rational};
use crate::k3_region::K3Point;
use crate::paintbox::LawOfK;

pub const MAX_LEVEL: usize = 45;
pub const MAX_SHARP_N: usize = 20;

/// EPPF values at one level `m`; partitions not listed have value zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EppfTable {
    m: usize,
    values: BTreeMap<IntegerPartition, Rational>,
}

impl EppfTable {
    /// Checks level, nonnegativity and `Σ_λ C(λ) p(λ) = 1`.
    pub fn new(m: usize, values: BTreeMap<IntegerPartition, Rational>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidTable("level must be positive".into()));
        }
        let mut total = Rational::zero();
        for (lambda, v) in &values {
            if lambda.level() != m {
                return Err(Error::InvalidTable(format!("partition {lambda} is not of level {m}")));
            }
            if v.is_negative() {
                return Err(Error::InvalidTable(format!("negative value at {lambda}")));
            }
            total += from_biguint(&cluster_count(lambda)) * v;
        }
        if !total.is_one() {
            return Err(Error::InvalidTable(format!("Σ C(λ) p(λ) = {total}, expected 1")));
        }
        Ok(Self { m, values })
    }

    /// Tabulates `f` over every partition of `m`.
    pub fn from_fn<F>(m: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&IntegerPartition) -> Result<Rational>,
    {
        let mut values = BTreeMap::new();
        for lambda in partitions_of(m)? {
            let v = f(&lambda)?;
            if !v.is_zero() {
                values.insert(lambda, v);
            }
        }
        Self::new(m, values)
    }

    pub fn level(&self) -> usize {
        self.m
    }

    pub fn value(&self, lambda: &IntegerPartition) -> Rational {
        self.values.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn values(&self) -> &BTreeMap<IntegerPartition, Rational> {
        &self.values
    }
}

/// Integer coefficients of `p(λ)`, `λ ⊢ m`, in `P(K_n = k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientMatrix {
    n: usize,
    m: usize,
    partitions: Vec<IntegerPartition>,
    /// `rows[k - 1][i]` is the coefficient for `partitions[i]`.
    rows: Vec<Vec<BigUint>>,
}

impl CoefficientMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Partitions of `m` in reverse-lexicographic order; columns follow this order.
    pub fn partitions(&self) -> &[IntegerPartition] {
        &self.partitions
    }

    pub fn row(&self, k: usize) -> &[BigUint] {
        &self.rows[k - 1]
    }

    pub fn entry(&self, k: usize, lambda: &IntegerPartition) -> BigUint {
        self.partitions
            .iter()
            .position(|p| p == lambda)
            .map(|i| self.rows[k - 1][i].clone())
            .unwrap_or_default()
    }

    /// Applies the coefficients to an EPPF table at level `m`.
    pub fn apply(&self, table: &EppfTable) -> Vec<Rational> {
        let values: Vec<Rational> = self.partitions.iter().map(|l| table.value(l)).collect();
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&values)
                    .filter(|(c, v)| !c.is_zero() && !v.is_zero())
                    .map(|(c, v)| from_biguint(c) * v)
                    .sum()
            })
            .collect()
    }
}

/// Level-by-level expansion state, exposed so callers can observe every level
/// on the way up to `m` without recomputing from scratch.
pub struct Expander {
    n: usize,
    level: usize,
    partitions: Vec<IntegerPartition>,
    rows: Vec<Vec<BigUint>>,
}

impl Expander {
    /// Level-`n` coefficients: `C(λ)` when `λ` has `k` parts, zero otherwise.
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=MAX_LEVEL).contains(&n) {
            return Err(out_of_range("n", format!("{n} not in 1..={MAX_LEVEL}")));
        }
        let partitions = partitions_of(n)?;
        let mut rows = vec![vec![BigUint::zero(); partitions.len()]; n];
        for (i, lambda) in partitions.iter().enumerate() {
            rows[lambda.len() - 1][i] = cluster_count(lambda);
        }
        Ok(Self {
            n,
            level: n,
            partitions,
            rows,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Rewrites every coefficient in terms of EPPF values one level higher.
    pub fn step(&mut self) -> Result<()> {
        let next_level = self.level + 1;
        if next_level > MAX_LEVEL {
            return Err(out_of_range("m", format!("{next_level} > {MAX_LEVEL}")));
        }
        let next = partitions_of(next_level)?;
        let index: HashMap<&[usize], usize> = next.iter().enumerate().map(|(i, p)| (p.parts(), i)).collect();
        let mut rows = vec![vec![BigUint::zero(); next.len()]; self.n];

        for (i, mu) in self.partitions.iter().enumerate() {
            if self.rows.iter().all(|r| r[i].is_zero()) {
                continue;
            }
            // (target column, multiplier)
            let mut targets: Vec<(usize, u32)> = Vec::with_capacity(8);
            targets.push((index[mu.with_singleton().parts()], 1));
            for (j, mult) in mu.multiplicities() {
                targets.push((index[mu.grow_part(j).parts()], mult as u32));
            }
            for (row, next_row) in self.rows.iter().zip(rows.iter_mut()) {
                let c = &row[i];
                if c.is_zero() {
                    continue;
                }
                for &(t, mult) in &targets {
                    if mult == 1 {
                        next_row[t] += c;
                    } else {
                        next_row[t] += c * mult;
                    }
                }
            }
        }
        self.partitions = next;
        self.rows = rows;
        self.level = next_level;
        Ok(())
    }

    pub fn snapshot(&self) -> CoefficientMatrix {
        CoefficientMatrix {
            n: self.n,
            m: self.level,
            partitions: self.partitions.clone(),
            rows: self.rows.clone(),
        }
    }

    pub fn into_matrix(self) -> CoefficientMatrix {
        CoefficientMatrix {
            n: self.n,
            m: self.level,
            partitions: self.partitions,
            rows: self.rows,
        }
    }

    fn k3_points(&self) -> Vec<K3Point> {
        debug_assert_eq!(self.n, 3);
        self.partitions
            .iter()
            .enumerate()
            .map(|(i, lambda)| {
                let c = from_biguint(&cluster_count(lambda));
                K3Point::new(from_biguint(&self.rows[0][i]) / &c, from_biguint(&self.rows[2][i]) / &c)
            })
            .collect()
    }
}

fn expand_unchecked(n: usize, m: usize) -> Result<CoefficientMatrix> {
    if m < n {
        return Err(out_of_range("m", format!("{m} < n = {n}")));
    }
    let mut ex = Expander::new(n)?;
    while ex.level() < m {
        ex.step()?;
    }
    Ok(ex.into_matrix())
}

/// Coefficients of `P(K_n = k)` in terms of EPPF values at level `m`.
pub fn expand_coefficients(n: usize, m: usize) -> Result<CoefficientMatrix> {
    if n < 3 || m < n || m > MAX_LEVEL {
        return Err(out_of_range("(n, m)", format!("need 3 <= n <= m <= {MAX_LEVEL}, got ({n}, {m})")));
    }
    expand_unchecked(n, m)
}

/// Law of `K_n` for the exchangeable partition of `[m]` with the given EPPF.
pub fn law_from_eppf(table: &EppfTable, n: usize) -> Result<LawOfK> {
    let m = table.level();
    if n == 0 || n > m || m > MAX_LEVEL {
        return Err(out_of_range("(n, m)", format!("need 1 <= n <= m <= {MAX_LEVEL}, got ({n}, {m})")));
    }
    let probs = expand_unchecked(n, m)?.apply(table);
    LawOfK::new(probs).map_err(|e| Error::Verification(format!("expanded law is not a distribution: {e}")))
}

/// The points `S_m` and their strict hull.
#[derive(Debug, Clone)]
pub struct K3Region {
    pub m: usize,
    /// One point per partition of `m`, in reverse-lexicographic partition order.
    pub points: Vec<K3Point>,
    /// Extreme points, counterclockwise from the lexicographically smallest.
    pub hull: Vec<K3Point>,
}

impl K3Region {
    pub fn hull_vertex_count(&self) -> usize {
        self.hull.len()
    }

    fn from_points(m: usize, points: Vec<K3Point>) -> Result<Self> {
        let pts: Vec<Point> = points.iter().map(|p| Point::xy(p.q1.clone(), p.q3.clone())).collect();
        let hull = hull2d(&pts)?
            .into_iter()
            .map(|p| {
                let mut c = p.into_coords().into_iter();
                K3Point::new(c.next().unwrap(), c.next().unwrap())
            })
            .collect();
        Ok(Self { m, points, hull })
    }
}

/// Achievable `(P(K_3=1), P(K_3=3))` for exchangeable partitions of `[m]`:
/// the hull of `(A(λ)/C(λ), B(λ)/C(λ))` over `λ ⊢ m`.
pub fn achievable_k3_region(m: usize) -> Result<K3Region> {
    if !(3..=MAX_LEVEL).contains(&m) {
        return Err(out_of_range("m", format!("{m} not in 3..={MAX_LEVEL}")));
    }
    let mut ex = Expander::new(3)?;
    while ex.level() < m {
        ex.step()?;
    }
    K3Region::from_points(m, ex.k3_points())
}

/// Regions for every level in `m_min..=m_max`, sharing one expansion pass.
pub fn achievable_k3_regions(m_min: usize, m_max: usize) -> Result<Vec<K3Region>> {
    if m_min < 3 || m_max < m_min || m_max > MAX_LEVEL {
        return Err(out_of_range("m range", format!("need 3 <= m_min <= m_max <= {MAX_LEVEL}")));
    }
    let mut ex = Expander::new(3)?;
    let mut per_level = Vec::new();
    loop {
        if ex.level() >= m_min {
            per_level.push((ex.level(), ex.k3_points()));
        }
        if ex.level() == m_max {
            break;
        }
        ex.step()?;
    }
    use rayon::prelude::*;
    per_level
        .into_par_iter()
        .map(|(m, pts)| K3Region::from_points(m, pts))
        .collect()
}

/// `(m, s_m)` rows: the number of extreme points of each `S_m`.
pub fn sn_table(m_min: usize, m_max: usize) -> Result<Vec<(usize, usize)>> {
    Ok(achievable_k3_regions(m_min, m_max)?
        .into_iter()
        .map(|r| (r.m, r.hull_vertex_count()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpBound {
    pub n: usize,
    pub value: Rational,
    /// A partition of `n + 1` whose EPPF mass alone attains the bound.
    pub argmax: IntegerPartition,
}

/// Sharp upper bound on `P(K_n(Π_{n+1}) = n - 1)`.
///
/// Maximising the linear objective `Σ e(λ) p(λ)` over `p >= 0` with the single
/// normalisation `Σ C(λ) p(λ) = 1` puts all mass on one partition, so the
/// optimum is `max_λ e(λ)/C(λ)`. The result is cross-checked against the
/// three candidate ratios `(3, 1^{n-2})`, `(2, 2, 1^{n-3})`, `(2, 1^{n-1})`.
pub fn sharp_bound_kn(n: usize) -> Result<SharpBound> {
    if !(3..=MAX_SHARP_N).contains(&n) {
        return Err(out_of_range("n", format!("{n} not in 3..={MAX_SHARP_N}")));
    }
    let coeffs = expand_coefficients(n, n + 1)?;
    let mut best: Option<(Rational, &IntegerPartition)> = None;
    for (lambda, e) in coeffs.partitions().iter().zip(coeffs.row(n - 1)) {
        if e.is_zero() {
            continue;
        }
        let ratio = from_biguint(e) / from_biguint(&cluster_count(lambda));
        if best.as_ref().is_none_or(|(b, _)| &ratio > b) {
            best = Some((ratio, lambda));
        }
    }
    let (value, argmax) = best.expect("P(K_n = n-1) has a nonzero coefficient");
    let three = three_ratio_bound(n);
    if value != three {
        return Err(Error::Verification(format!(
            "ratio maximum {value} disagrees with the three-ratio bound {three}"
        )));
    }
    Ok(SharpBound {
        n,
        value,
        argmax: argmax.clone(),
    })
}

/// `max{ C(n,2)/(C(n,2)+C(n,3)), C(n,2)(n-2)/(C(n,2)(n-2)+3C(n,4)), C(n,2)/(C(n,2)+n) }`.
pub fn three_ratio_bound(n: usize) -> Rational {
    let b = |k| from_biguint(&binomial(n, k));
    let nn = Rational::from_integer((n as i64).into());
    let n_minus_2 = Rational::from_integer(((n - 2) as i64).into());
    let two = b(2);
    let r1 = &two / (&two + b(3));
    let r2 = (&two * &n_minus_2) / (&two * &n_minus_2 + b(4) * Rational::from_integer(3.into()));
    let r3 = &two / (&two + &nn);
    r1.max(r2).max(r3)
}

/// EPPF at level `n` realising the given law of `K_n`: all mass of `K_n = k`
/// sits on the partition `(n-k+1, 1^{k-1})`.
pub fn eppf_for_target_law(a: &LawOfK) -> Result<EppfTable> {
    let n = a.n();
    let mut values = BTreeMap::new();
    for k in 1..=n {
        let ak = a.at(k);
        if ak.is_zero() {
            continue;
        }
        let mut parts = vec![n - k + 1];
        parts.extend(std::iter::repeat_n(1, k - 1));
        let lambda = IntegerPartition::new(parts)?;
        let v = ak / from_biguint(&cluster_count(&lambda));
        values.insert(lambda, v);
    }
    EppfTable::new(n, values)
}
