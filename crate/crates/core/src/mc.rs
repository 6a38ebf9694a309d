//! Seeded Monte Carlo estimates of the law of `K_n`, checked against exact laws.
//!
//! Replicates are split into fixed chunks of [`CHUNK`]; chunk `c` runs on
//! `ChaCha8Rng::seed_from_u64(seed)` with stream `c`. Chunks are independent,
//! so the merged counts do not depend on how many worker threads run them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::error::{domain, out_of_range, Error, Result};
use crate::exact_geom::rational::{floor_sqrt, int, to_f64, Rational};
use crate::paintbox::{law_of_kn, LawOfK, RankedDiscreteDistribution};
use crate::two_param::{law_at, ParamsAT, Regime};

pub const MAX_N: usize = 20;
pub const MAX_REPS: u64 = 10_000_000;
pub const CHUNK: u64 = 4096;
pub const ALGORITHM: &str = "chacha8; seed_from_u64(seed); stream = chunk index; 4096 replicates per chunk";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    pub model: String,
    pub n: usize,
    pub reps: u64,
    pub seed: u64,
    pub algorithm: &'static str,
    /// `counts[k - 1]` replicates had `K_n = k`.
    pub counts: Vec<u64>,
    pub empirical: Vec<Rational>,
    pub exact: LawOfK,
    pub max_abs_deviation: Rational,
    /// Largest per-cell `√(p(1-p)/reps)`, rounded up to a multiple of `10^-12`.
    pub sigma_bound: Rational,
}

impl SampleReport {
    fn build(model: String, n: usize, reps: u64, seed: u64, counts: Vec<u64>, exact: LawOfK) -> Result<Self> {
        let r = Rational::from_integer(BigInt::from(reps));
        let empirical: Vec<Rational> = counts
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)) / &r)
            .collect();
        if !empirical.iter().sum::<Rational>().is_one() {
            return Err(Error::Verification("empirical law does not sum to 1".into()));
        }
        let max_abs_deviation = empirical
            .iter()
            .zip(exact.probs())
            .map(|(e, p)| (e - p).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let scale = Rational::from_integer(BigInt::from(10u32).pow(12));
        let sigma_bound = exact
            .probs()
            .iter()
            .map(|p| {
                let var = p * (Rational::one() - p) / &r * &scale * &scale;
                let f = floor_sqrt(&var);
                let exact_root = Rational::from_integer(&f * &f) == var;
                let f = if exact_root { f } else { f + 1 };
                Rational::from_integer(f) / &scale
            })
            .max()
            .unwrap_or_else(Rational::zero);
        Ok(Self {
            model,
            n,
            reps,
            seed,
            algorithm: ALGORITHM,
            counts,
            empirical,
            exact,
            max_abs_deviation,
            sigma_bound,
        })
    }

    /// `|e - p| <= 4√(p(1-p)/reps)` in every cell, decided exactly.
    pub fn within_sigmas(&self, sigmas: u32) -> bool {
        let r = Rational::from_integer(BigInt::from(self.reps));
        let s2 = Rational::from_integer(BigInt::from(sigmas * sigmas));
        self.empirical.iter().zip(self.exact.probs()).all(|(e, p)| {
            let d = e - p;
            &d * &d <= &s2 * p * (Rational::one() - p) / &r
        })
    }

    pub fn within_4_sigma(&self) -> bool {
        self.within_sigmas(4)
    }
}

fn check_sizes(n: usize, reps: u64) -> Result<()> {
    if !(1..=MAX_N).contains(&n) {
        return Err(out_of_range("n", format!("{n} not in 1..={MAX_N}")));
    }
    if !(1..=MAX_REPS).contains(&reps) {
        return Err(out_of_range("reps", format!("{reps} not in 1..={MAX_REPS}")));
    }
    Ok(())
}

/// Runs `one(rng)` per replicate and tallies the returned block counts.
fn run<F>(n: usize, reps: u64, seed: u64, one: F) -> Vec<u64>
where
    F: Fn(&mut ChaCha8Rng) -> usize + Sync,
{
    let chunks = reps.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let size = CHUNK.min(reps - c * CHUNK);
            let mut counts = vec![0u64; n];
            for _ in 0..size {
                counts[one(&mut rng) - 1] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Chinese restaurant process: customer `j + 1` opens a new table with
/// probability `(θ + kα)/(j + θ)` or joins table `i` with `(|C_i| - α)/(j + θ)`.
pub fn sample_crp(params: &ParamsAT, n: usize, reps: u64, seed: u64) -> Result<SampleReport> {
    check_sizes(n, reps)?;
    let (a, t) = (params.alpha(), params.theta());
    // new_table[j][k] = θ + kα, total[j] = j + θ
    let mut new_table = vec![vec![0f64; n + 1]; n];
    let mut total = vec![0f64; n];
    for j in 1..n {
        let tot = int(j as i64) + t;
        total[j] = to_f64(&tot);
        for k in 1..=j {
            let fresh = t + a * int(k as i64);
            let joined = int(j as i64) - a * int(k as i64);
            if joined.clone() + &fresh != tot {
                return Err(Error::Verification(format!("CRP weights at ({j}, {k}) do not sum to j + θ")));
            }
            if let Regime::Exceptional { m } = params.regime() {
                if k as u64 == m && !fresh.is_zero() {
                    return Err(Error::Verification("new-table weight must vanish at m tables".into()));
                }
            }
            new_table[j][k] = if fresh.is_negative() { 0.0 } else { to_f64(&fresh) };
        }
    }
    let alpha = to_f64(a);
    let counts = run(n, reps, seed, |rng| {
        let mut sizes: Vec<f64> = Vec::with_capacity(n);
        sizes.push(1.0);
        for j in 1..n {
            let k = sizes.len();
            let mut u = rng.random::<f64>() * total[j];
            if u < new_table[j][k] {
                sizes.push(1.0);
                continue;
            }
            u -= new_table[j][k];
            let mut chosen = k - 1;
            for (i, s) in sizes.iter().enumerate() {
                let w = s - alpha;
                if u < w {
                    chosen = i;
                    break;
                }
                u -= w;
            }
            sizes[chosen] += 1.0;
        }
        sizes.len()
    });
    let exact = law_at(params, n)?;
    SampleReport::build(format!("crp {params}"), n, reps, seed, counts, exact)
}

enum Categorical {
    /// Integer thresholds over `0..modulus`, used when all weights share a small denominator.
    Exact { cumulative: Vec<u64>, modulus: u64 },
    Float { cumulative: Vec<f64> },
}

impl Categorical {
    /// Cells are the atoms in order followed by one dust cell.
    fn new(weights: &[Rational]) -> Self {
        let lcm = weights
            .iter()
            .try_fold(BigInt::one(), |acc, w| {
                let l = acc.lcm(w.denom());
                (l.bits() <= 62).then_some(l)
            });
        if let Some(l) = lcm {
            let modulus = l.to_u64().expect("fits in 62 bits");
            let mut acc = 0u64;
            let cumulative = weights
                .iter()
                .map(|w| {
                    acc += (w * Rational::from_integer(l.clone())).to_integer().to_u64().unwrap();
                    acc
                })
                .collect();
            return Categorical::Exact { cumulative, modulus };
        }
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += to_f64(w);
                acc
            })
            .collect();
        Categorical::Float { cumulative }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        match self {
            Categorical::Exact { cumulative, modulus } => {
                let u = rng.random_range(0..*modulus);
                cumulative.partition_point(|&c| c <= u)
            }
            Categorical::Float { cumulative } => {
                let u = rng.random::<f64>() * cumulative.last().copied().unwrap_or(1.0);
                cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
            }
        }
    }
}

fn count_distinct(draws: &mut [usize], dust_cell: Option<usize>) -> usize {
    let fresh = dust_cell.map_or(0, |d| draws.iter().filter(|&&x| x == d).count());
    draws.sort_unstable();
    let mut distinct = 0;
    let mut prev = None;
    for &x in draws.iter() {
        if Some(x) != dust_cell && prev != Some(x) {
            distinct += 1;
        }
        prev = Some(x);
    }
    distinct + fresh
}

/// I.i.d. draws from a ranked distribution; each dust draw is a new value.
pub fn sample_paintbox(p: &RankedDiscreteDistribution, n: usize, reps: u64, seed: u64) -> Result<SampleReport> {
    check_sizes(n, reps)?;
    let mut weights = p.atoms().to_vec();
    weights.push(p.dust().clone());
    let dust_cell = weights.len() - 1;
    let cat = Categorical::new(&weights);
    let counts = run(n, reps, seed, |rng| {
        let mut draws = [0usize; MAX_N];
        for d in draws.iter_mut().take(n) {
            *d = cat.draw(rng);
        }
        count_distinct(&mut draws[..n], Some(dust_cell))
    });
    let exact = law_of_kn(p, n)?;
    SampleReport::build("paintbox".into(), n, reps, seed, counts, exact)
}

/// Weights from the symmetric Dirichlet with `m` parameters `neg_alpha`,
/// then `n` i.i.d. categorical draws. The exact law is the two-parameter
/// law at `(-neg_alpha, m · neg_alpha)`.
pub fn sample_dirichlet_uniform(m: u64, neg_alpha: &Rational, n: usize, reps: u64, seed: u64) -> Result<SampleReport> {
    check_sizes(n, reps)?;
    if m == 0 || m > 1_000_000 {
        return Err(out_of_range("m", format!("{m} not in 1..=1000000")));
    }
    if !neg_alpha.is_positive() {
        return Err(domain("neg_alpha must be positive"));
    }
    let shape = to_f64(neg_alpha);
    let gamma = Gamma::new(shape, 1.0).map_err(|e| domain(format!("gamma({shape}): {e}")))?;
    let m_usize = m as usize;
    let counts = run(n, reps, seed, |rng| {
        if m_usize == 1 {
            return 1;
        }
        let mut cumulative: Vec<f64> = Vec::with_capacity(m_usize);
        let mut acc = 0.0;
        for _ in 0..m_usize {
            acc += gamma.sample(rng);
            cumulative.push(acc);
        }
        let mut draws = [0usize; MAX_N];
        for d in draws.iter_mut().take(n) {
            let u = rng.random::<f64>() * acc;
            *d = cumulative.partition_point(|&c| c <= u).min(m_usize - 1);
        }
        count_distinct(&mut draws[..n], None)
    });
    let params = ParamsAT::new(-neg_alpha.clone(), neg_alpha * int(m as i64))?;
    let exact = law_at(&params, n)?;
    SampleReport::build(format!("dirichlet m={m}"), n, reps, seed, counts, exact)
}
