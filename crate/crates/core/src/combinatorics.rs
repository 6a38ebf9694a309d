//! Integer partitions, Stirling numbers of the second kind, falling factorials
//! and the number of set partitions with a given block-size profile.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{domain, out_of_range, Result};

pub const MAX_PARTITION_LEVEL: usize = 60;
pub const MAX_STIRLING_N: usize = 200;

/// Non-increasing positive parts. The level is the sum of the parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    /// Validates and keeps the given parts, which must already be non-increasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(domain("partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(domain("partition parts must be non-increasing"));
        }
        Ok(Self { parts })
    }

    /// Sorts arbitrary positive block sizes into a partition.
    pub fn from_blocks(mut sizes: Vec<usize>) -> Result<Self> {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(sizes)
    }

    pub(crate) fn from_sorted_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn level(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, i.e. the number of blocks.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Pairs `(part value, multiplicity)` in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Partition with one extra singleton block.
    pub fn with_singleton(&self) -> Self {
        let mut parts = self.parts.clone();
        parts.push(1);
        Self { parts }
    }

    /// Partition with one block of size `j` grown to `j + 1`.
    /// Panics if no part equals `j`.
    pub fn grow_part(&self, j: usize) -> Self {
        let mut parts = self.parts.clone();
        // The first occurrence keeps the order non-increasing after incrementing.
        let idx = parts.iter().position(|&p| p == j).expect("part not present");
        parts[idx] += 1;
        Self { parts }
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Stirling number of the second kind `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> Result<BigUint> {
    if n > MAX_STIRLING_N {
        return Err(out_of_range("n", format!("{n} > {MAX_STIRLING_N}")));
    }
    if k > n {
        return Err(out_of_range("k", format!("{k} > n = {n}")));
    }
    Ok(stirling2_row(n).swap_remove(k))
}

/// `[S(n, 0), ..., S(n, n)]` via `S(i, j) = j S(i-1, j) + S(i-1, j-1)`.
pub(crate) fn stirling2_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for j in 1..=i {
            let mut v = row.get(j - 1).cloned().unwrap_or_default();
            if let Some(prev) = row.get(j) {
                v += prev * BigUint::from(j);
            }
            next[j] = v;
        }
        row = next;
    }
    row
}

/// `m (m-1) ... (m-k+1)`; one for `k = 0`, zero for `k > m`.
pub fn falling_factorial(m: u64, k: u64) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    (0..k).map(|i| BigUint::from(m - i)).product()
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    falling_factorial(n as u64, k as u64) / factorial(k)
}

/// All partitions of `n`, in reverse-lexicographic order starting from `(n)`.
pub fn partitions_of(n: usize) -> Result<Vec<IntegerPartition>> {
    if n == 0 || n > MAX_PARTITION_LEVEL {
        return Err(out_of_range("partition level", format!("{n} not in 1..={MAX_PARTITION_LEVEL}")));
    }
    Ok(ReverseLex::new(n).collect())
}

/// Successor iteration: find the rightmost part greater than one, decrement it,
/// and refill the tail greedily with parts no larger than the decremented value.
struct ReverseLex {
    next: Option<Vec<usize>>,
}

impl ReverseLex {
    fn new(n: usize) -> Self {
        Self { next: Some(vec![n]) }
    }
}

impl Iterator for ReverseLex {
    type Item = IntegerPartition;

    fn next(&mut self) -> Option<IntegerPartition> {
        let cur = self.next.take()?;
        if let Some(pos) = cur.iter().rposition(|&p| p > 1) {
            let mut succ = cur[..pos].to_vec();
            let v = cur[pos] - 1;
            let mut rest: usize = cur[pos..].iter().sum::<usize>() - v;
            succ.push(v);
            while rest > 0 {
                let take = rest.min(v);
                succ.push(take);
                rest -= take;
            }
            self.next = Some(succ);
        }
        Some(IntegerPartition::from_sorted_unchecked(cur))
    }
}

/// Number of set partitions of `[n]` whose block sizes are `λ`:
/// `n! / Π_j (j!)^{s_j} s_j!` with `s_j` the multiplicity of part `j`.
pub fn cluster_count(lambda: &IntegerPartition) -> BigUint {
    let mut denom = BigUint::one();
    for (part, mult) in lambda.multiplicities() {
        denom *= num_traits::pow(factorial(part), mult) * factorial(mult);
    }
    factorial(lambda.level()) / denom
}
