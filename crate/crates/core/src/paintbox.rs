//! Laws of the number of distinct values `K_n` when sampling i.i.d. from a
//! ranked discrete distribution (a "paintbox"), plus the functionals and
//! transforms used to bound them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binomial, cluster_count, partitions_of, IntegerPartition};
use crate::error::{domain, out_of_range, Error, Result};
use crate::exact_geom::rational::{from_biguint, int, pow, Rational};

pub const MAX_EPPF_LEVEL: usize = 12;
pub const MAX_ATOMS: usize = 16;

/// Size of a uniform distribution's support: `m` atoms, or non-atomic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Support {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Finite(m) => write!(f, "{m}"),
            Support::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Support {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Support::Infinite),
            t => match t.parse::<u64>() {
                Ok(m) if m >= 1 => Ok(Support::Finite(m)),
                _ => Err(domain(format!("expected a positive integer or `inf`, got `{t}`"))),
            },
        }
    }
}

/// Non-increasing atom weights plus the implicit continuous ("dust") mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedDiscreteDistribution {
    atoms: Vec<Rational>,
    dust: Rational,
}

impl RankedDiscreteDistribution {
    /// Ranks the given weights; zero atoms are dropped.
    pub fn new(mut atoms: Vec<Rational>) -> Result<Self> {
        if atoms.iter().any(Signed::is_negative) {
            return Err(domain("atom weights must be nonnegative"));
        }
        atoms.retain(|a| !a.is_zero());
        atoms.sort_unstable_by(|a, b| b.cmp(a));
        let total: Rational = atoms.iter().sum();
        if total > Rational::one() {
            return Err(domain("atom weights sum to more than 1"));
        }
        Ok(Self {
            dust: Rational::one() - total,
            atoms,
        })
    }

    /// `u_m`; `u_∞` is the purely continuous law.
    pub fn uniform(support: Support) -> Self {
        match support {
            Support::Finite(m) => {
                let w = Rational::new(1.into(), m.into());
                Self {
                    atoms: vec![w; m as usize],
                    dust: Rational::zero(),
                }
            }
            Support::Infinite => Self::dust_only(),
        }
    }

    pub fn dust_only() -> Self {
        Self {
            atoms: Vec::new(),
            dust: Rational::one(),
        }
    }

    pub fn atoms(&self) -> &[Rational] {
        &self.atoms
    }

    pub fn dust(&self) -> &Rational {
        &self.dust
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Coordinatewise mixture `t·self + (1-t)·other` of the ranked vectors.
    pub fn mix(&self, other: &Self, t: &Rational) -> Result<Self> {
        if t.is_negative() || t > &Rational::one() {
            return Err(domain("mixture weight must lie in [0, 1]"));
        }
        let len = self.atoms.len().max(other.atoms.len());
        let zero = Rational::zero();
        let s = Rational::one() - t;
        let atoms = (0..len)
            .map(|i| t * self.atoms.get(i).unwrap_or(&zero) + &s * other.atoms.get(i).unwrap_or(&zero))
            .collect();
        Self::new(atoms)
    }

    /// Same atoms with the dust mass promoted to one extra atom.
    pub fn dust_as_atom(&self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.push(self.dust.clone());
        Self::new(atoms).expect("total mass stays 1")
    }
}

/// Distribution of `K_n` over `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawOfK {
    probs: Vec<Rational>,
}

impl LawOfK {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(domain("a law of K_n needs n >= 1 entries"));
        }
        if probs.iter().any(|p| p.is_negative() || p > &Rational::one()) {
            return Err(domain("law entries must lie in [0, 1]"));
        }
        if probs.iter().sum::<Rational>() != Rational::one() {
            return Err(domain("law entries must sum to 1"));
        }
        Ok(Self { probs })
    }

    pub(crate) fn from_exact(probs: Vec<Rational>) -> Self {
        debug_assert!(probs.iter().sum::<Rational>().is_one());
        Self { probs }
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// `P(K_n = k)` for `1 <= k <= n`.
    pub fn at(&self, k: usize) -> &Rational {
        &self.probs[k - 1]
    }
}

/// Probability that the i.i.d. partition of `[n]` equals one fixed set
/// partition with block sizes `λ`. Blocks of size one may land in the dust;
/// every other block must occupy its own atom.
pub fn paintbox_eppf(p: &RankedDiscreteDistribution, lambda: &IntegerPartition) -> Result<Rational> {
    check_bounds(p, lambda.level())?;
    Ok(EppfEvaluator::new(p, lambda.level()).eval(lambda))
}

fn check_bounds(p: &RankedDiscreteDistribution, n: usize) -> Result<()> {
    if n == 0 || n > MAX_EPPF_LEVEL {
        return Err(out_of_range("n", format!("{n} not in 1..={MAX_EPPF_LEVEL}")));
    }
    if p.num_atoms() > MAX_ATOMS {
        return Err(out_of_range("atoms", format!("{} > {MAX_ATOMS}", p.num_atoms())));
    }
    Ok(())
}

/// Dynamic program over atoms: each atom is left unused or assigned to one
/// still-unassigned block. State is the atom position together with the
/// multiset of remaining block sizes (a count per size).
struct EppfEvaluator<'a> {
    p: &'a RankedDiscreteDistribution,
    /// `powers[i][s] = p_i^s`
    powers: Vec<Vec<Rational>>,
    memo: HashMap<(usize, Vec<u8>), Rational>,
}

impl<'a> EppfEvaluator<'a> {
    fn new(p: &'a RankedDiscreteDistribution, max_part: usize) -> Self {
        let powers = p
            .atoms
            .iter()
            .map(|a| (0..=max_part as u32).map(|s| pow(a, s)).collect())
            .collect();
        Self {
            p,
            powers,
            memo: HashMap::new(),
        }
    }

    fn eval(&mut self, lambda: &IntegerPartition) -> Rational {
        let max_part = lambda.parts().first().copied().unwrap_or(0);
        let mut counts = vec![0u8; max_part + 1];
        for &s in lambda.parts() {
            counts[s] += 1;
        }
        let singletons = counts.get(1).copied().unwrap_or(0) as usize;
        let mut total = Rational::zero();
        for j in 0..=singletons {
            let dust_term = pow(&self.p.dust, j as u32);
            if dust_term.is_zero() && j > 0 {
                break;
            }
            let mut rest = counts.clone();
            if j > 0 {
                rest[1] -= j as u8;
            }
            let ways = from_biguint(&binomial(singletons, j));
            total += ways * dust_term * self.assign(0, rest);
        }
        total
    }

    fn assign(&mut self, atom: usize, counts: Vec<u8>) -> Rational {
        if counts.iter().all(|&c| c == 0) {
            return Rational::one();
        }
        let remaining: usize = counts.iter().map(|&c| c as usize).sum();
        if atom + remaining > self.powers.len() {
            return Rational::zero();
        }
        if let Some(v) = self.memo.get(&(atom, counts.clone())) {
            return v.clone();
        }
        let mut total = self.assign(atom + 1, counts.clone());
        for s in 1..counts.len() {
            if counts[s] == 0 {
                continue;
            }
            let mut next = counts.clone();
            next[s] -= 1;
            let term = int(counts[s] as i64) * &self.powers[atom][s] * self.assign(atom + 1, next);
            total += term;
        }
        self.memo.insert((atom, counts), total.clone());
        total
    }
}

/// Law of `K_n` under i.i.d. sampling from `p`:
/// `P(K_n = k) = Σ_{λ ⊢ n, ℓ(λ) = k} C(λ) p(λ)`.
pub fn law_of_kn(p: &RankedDiscreteDistribution, n: usize) -> Result<LawOfK> {
    check_bounds(p, n)?;
    let mut eval = EppfEvaluator::new(p, n);
    let mut probs = vec![Rational::zero(); n];
    for lambda in partitions_of(n)? {
        let v = eval.eval(&lambda);
        if !v.is_zero() {
            probs[lambda.len() - 1] += from_biguint(&cluster_count(&lambda)) * v;
        }
    }
    if probs.iter().sum::<Rational>() != Rational::one() {
        return Err(Error::Verification("law of K_n does not sum to 1".into()));
    }
    Ok(LawOfK::from_exact(probs))
}

/// `(Σ p_i^3, Σ 3 p_i^2 (1 - p_i), 1 - Σ (3 p_i^2 - 2 p_i^3))`, the law of `K_3`
/// in closed form.
pub fn q3_closed(p: &RankedDiscreteDistribution) -> (Rational, Rational, Rational) {
    let (s2, s3) = power_sums(p);
    let three = int(3);
    let q1 = s3.clone();
    let q2 = &three * &s2 - &three * &s3;
    let q3 = Rational::one() - three * s2 + int(2) * s3;
    (q1, q2, q3)
}

fn power_sums(p: &RankedDiscreteDistribution) -> (Rational, Rational) {
    let s2 = p.atoms.iter().map(|a| a * a).sum();
    let s3 = p.atoms.iter().map(|a| a * a * a).sum();
    (s2, s3)
}

/// Replaces the two smallest nonzero atoms by their sum and re-ranks.
pub fn merge_two_smallest(p: &RankedDiscreteDistribution) -> Result<RankedDiscreteDistribution> {
    let m = p.atoms.len();
    if m < 2 {
        return Err(domain("merging needs at least two nonzero atoms"));
    }
    let mut atoms = p.atoms[..m - 2].to_vec();
    atoms.push(&p.atoms[m - 2] + &p.atoms[m - 1]);
    RankedDiscreteDistribution::new(atoms)
}

/// `f(N) = 3N(N+1)/(2N+1)`.
pub fn f_of(n: u64) -> Rational {
    Rational::new((3 * n * (n + 1)).into(), (2 * n + 1).into())
}

/// `L_N(p) = 1 - 3Σp_i² + f(N)Σp_i³`, the facet functional of the `K_3` region.
pub fn l_n_functional(p: &RankedDiscreteDistribution, big_n: u64) -> Result<Rational> {
    if big_n < 1 {
        return Err(domain("N must be at least 1"));
    }
    let (s2, s3) = power_sums(p);
    Ok(Rational::one() - int(3) * s2 + f_of(big_n) * s3)
}

/// Change in `L_N` when atoms `a` and `b` are merged: `3ab[(a+b)f(N) - 2]`.
pub fn merge_delta(a: &Rational, b: &Rational, big_n: u64) -> Rational {
    int(3) * a * b * ((a + b) * f_of(big_n) - int(2))
}

/// Weights `w` with `p = Σ_m w_m u_m + w_∞ u_∞`. For finite `m` the weight is
/// `m (p_m - p_{m+1})`; the non-atomic part carries the dust. Zero weights are
/// omitted.
pub fn khintchine_decompose(p: &RankedDiscreteDistribution) -> BTreeMap<Support, Rational> {
    let mut out = BTreeMap::new();
    let zero = Rational::zero();
    for (i, a) in p.atoms.iter().enumerate() {
        let next = p.atoms.get(i + 1).unwrap_or(&zero);
        let w = int(i as i64 + 1) * (a - next);
        if !w.is_zero() {
            out.insert(Support::Finite(i as u64 + 1), w);
        }
    }
    if !p.dust.is_zero() {
        out.insert(Support::Infinite, p.dust.clone());
    }
    out
}

/// Rebuilds the ranked vector (padded to `len`) from decomposition weights.
pub fn khintchine_reconstruct(weights: &BTreeMap<Support, Rational>, len: usize) -> Vec<Rational> {
    let mut coords = vec![Rational::zero(); len];
    for (support, w) in weights {
        if let Support::Finite(m) = *support {
            let share = w / int(m as i64);
            for c in coords.iter_mut().take(m as usize) {
                *c += &share;
            }
        }
    }
    coords
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geom::rational::rat;

    fn dist(ws: &[(i64, i64)]) -> RankedDiscreteDistribution {
        RankedDiscreteDistribution::new(ws.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    fn part(p: &[usize]) -> IntegerPartition {
        IntegerPartition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn construction_normalises() {
        let p = dist(&[(1, 4), (0, 1), (1, 2)]);
        assert_eq!(p.atoms(), &[rat(1, 2), rat(1, 4)]);
        assert_eq!(p.dust(), &rat(1, 4));
        assert!(RankedDiscreteDistribution::new(vec![rat(3, 4), rat(1, 2)]).is_err());
        assert!(RankedDiscreteDistribution::new(vec![rat(-1, 4)]).is_err());
    }

    #[test]
    fn eppf_examples() {
        let u2 = RankedDiscreteDistribution::uniform(Support::Finite(2));
        assert_eq!(paintbox_eppf(&u2, &part(&[3])).unwrap(), rat(1, 4));
        assert_eq!(paintbox_eppf(&u2, &part(&[2, 1])).unwrap(), rat(1, 4));
        assert_eq!(paintbox_eppf(&u2, &part(&[1, 1, 1])).unwrap(), rat(0, 1));
        let dust = RankedDiscreteDistribution::dust_only();
        assert_eq!(paintbox_eppf(&dust, &part(&[1, 1])).unwrap(), rat(1, 1));
        assert_eq!(paintbox_eppf(&dust, &part(&[2])).unwrap(), rat(0, 1));
    }

    #[test]
    fn eppf_bounds() {
        let u2 = RankedDiscreteDistribution::uniform(Support::Finite(2));
        assert!(paintbox_eppf(&u2, &part(&[13])).is_err());
        let u17 = RankedDiscreteDistribution::uniform(Support::Finite(17));
        assert!(law_of_kn(&u17, 3).is_err());
        assert!(law_of_kn(&u2, 0).is_err());
    }

    #[test]
    fn law_examples() {
        for big_n in 1..=6i64 {
            let u = RankedDiscreteDistribution::uniform(Support::Finite(big_n as u64));
            let law = law_of_kn(&u, 3).unwrap();
            let nn = big_n * big_n;
            assert_eq!(law.probs(), &[rat(1, nn), rat(3 * (big_n - 1), nn), rat((big_n - 1) * (big_n - 2), nn)]);
        }
        let u2 = RankedDiscreteDistribution::uniform(Support::Finite(2));
        assert_eq!(law_of_kn(&u2, 5).unwrap().at(2), &rat(15, 16));
        let dust = RankedDiscreteDistribution::dust_only();
        assert_eq!(law_of_kn(&dust, 4).unwrap().probs(), &[rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn q3_closed_examples() {
        let u2 = RankedDiscreteDistribution::uniform(Support::Finite(2));
        assert_eq!(q3_closed(&u2), (rat(1, 4), rat(3, 4), rat(0, 1)));
        let u3 = RankedDiscreteDistribution::uniform(Support::Finite(3));
        assert_eq!(q3_closed(&u3), (rat(1, 9), rat(6, 9), rat(2, 9)));
        assert_eq!(q3_closed(&RankedDiscreteDistribution::dust_only()), (rat(0, 1), rat(0, 1), rat(1, 1)));
    }

    #[test]
    fn merge_examples() {
        assert_eq!(merge_two_smallest(&dist(&[(1, 2), (1, 4), (1, 4)])).unwrap(), dist(&[(1, 2), (1, 2)]));
        assert_eq!(merge_two_smallest(&dist(&[(1, 3), (1, 3), (1, 3)])).unwrap(), dist(&[(2, 3), (1, 3)]));
        assert!(merge_two_smallest(&dist(&[(1, 2)])).is_err());
        // Dust is untouched.
        let m = merge_two_smallest(&dist(&[(1, 4), (1, 8), (1, 8)])).unwrap();
        assert_eq!(m.dust(), &rat(1, 2));
    }

    #[test]
    fn f_and_l_n_values() {
        assert_eq!(f_of(1), rat(2, 1));
        assert_eq!(f_of(2), rat(18, 5));
        assert_eq!(f_of(3), rat(36, 7));
        assert_eq!(f_of(4), rat(60, 9));
        for big_n in 1..=20u64 {
            let u = RankedDiscreteDistribution::uniform(Support::Finite(big_n));
            let expect = Rational::new((2 * big_n as i64 - 2).into(), (2 * big_n as i64 + 1).into());
            assert_eq!(l_n_functional(&u, big_n).unwrap(), expect);
        }
        let u3 = RankedDiscreteDistribution::uniform(Support::Finite(3));
        let u2 = RankedDiscreteDistribution::uniform(Support::Finite(2));
        assert_eq!(l_n_functional(&u3, 2).unwrap(), rat(2, 5));
        assert_eq!(l_n_functional(&u2, 2).unwrap(), rat(2, 5));
        assert!(l_n_functional(&u3, 0).is_err());
    }

    #[test]
    fn merge_delta_examples() {
        assert_eq!(merge_delta(&rat(0, 1), &rat(0, 1), 3), rat(0, 1));
        assert_eq!(merge_delta(&rat(1, 2), &rat(1, 2), 2), rat(6, 5));
        for big_n in 1..=10 {
            let half = Rational::one() / f_of(big_n);
            assert!(merge_delta(&half, &half, big_n).is_zero());
        }
    }

    #[test]
    fn khintchine_examples() {
        let u3 = RankedDiscreteDistribution::uniform(Support::Finite(3));
        let w = khintchine_decompose(&u3);
        assert_eq!(w.into_iter().collect::<Vec<_>>(), vec![(Support::Finite(3), rat(1, 1))]);

        let p = dist(&[(1, 2), (1, 4), (1, 4)]);
        let w = khintchine_decompose(&p);
        assert_eq!(w.get(&Support::Finite(1)), Some(&rat(1, 4)));
        assert_eq!(w.get(&Support::Finite(3)), Some(&rat(3, 4)));
        assert_eq!(khintchine_reconstruct(&w, 3), p.atoms());

        let half = dist(&[(1, 2)]);
        let w = khintchine_decompose(&half);
        assert_eq!(w.get(&Support::Finite(1)), Some(&rat(1, 2)));
        assert_eq!(w.get(&Support::Infinite), Some(&rat(1, 2)));
    }

    #[test]
    fn support_parsing() {
        assert_eq!("inf".parse::<Support>().unwrap(), Support::Infinite);
        assert_eq!("7".parse::<Support>().unwrap(), Support::Finite(7));
        assert!("0".parse::<Support>().is_err());
        assert!("x".parse::<Support>().is_err());
    }
}
