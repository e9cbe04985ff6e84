//! Builders for totally nonnegative GCD matrices.
//!
//! Any column-monotone exponent matrix, paired with increasing primes,
//! reconstructs an ordered set whose GCD matrix is totally nonnegative.
//!
//! Randomness comes from [`seeded_rng`]: ChaCha8 seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. [`random_column_monotone`] draws, per
//! attempt and in this order: the column count `k` uniform in `1..=4` (only
//! when no primes are supplied), then for each column a direction bit
//! (`gen_bool(0.5)`, true = non-decreasing) followed by `n` exponents uniform
//! in `0..=max_exponent`, which are sorted into that direction. Attempts with
//! duplicate rows are discarded and redrawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numtheory::{is_prime, Nat};
use crate::setmodel::{ExponentMatrix, OrderedSet, SetError};

pub const DEFAULT_MAX_EXPONENT: u64 = 6;
pub const MAX_RANDOM_COLUMNS: usize = 4;
const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("pattern needs {needed} primes, got {given}")]
    PrimeCount { needed: usize, given: usize },
    #[error("vandermonde bases must be positive and strictly increasing")]
    InvalidBases,
    #[error("size must be at least 1")]
    InvalidSize,
    #[error("no duplicate-free sample after {0} attempts; raise the exponent bound or add primes")]
    Exhausted(usize),
    #[error(transparent)]
    Set(#[from] SetError),
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<Nat> {
    let mut out = Vec::with_capacity(k);
    let mut candidate = Nat::from(2u32);
    while out.len() < k {
        if is_prime(&candidate) {
            out.push(candidate.clone());
        }
        candidate += 1u32;
    }
    out
}

/// Symmetric Pascal matrix `P_n`: entry `(i, j)` is `C(i + j, i)`.
pub fn pascal_exponents(n: usize) -> Vec<Vec<u64>> {
    let mut p = vec![vec![1u64; n]; n];
    for i in 1..n {
        for j in 1..n {
            p[i][j] = p[i - 1][j] + p[i][j - 1];
        }
    }
    p
}

/// Vandermonde rows `(1, b, b^2, ..., b^{n-1})` for increasing positive bases.
pub fn vandermonde_exponents(bases: &[u64]) -> Result<Vec<Vec<u64>>, GenError> {
    if bases.is_empty() {
        return Err(GenError::InvalidSize);
    }
    if bases[0] == 0 || bases.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GenError::InvalidBases);
    }
    let n = bases.len();
    Ok(bases
        .iter()
        .map(|&b| (0..n as u32).map(|e| b.pow(e)).collect())
        .collect())
}

fn with_primes(
    exponents: Vec<Vec<u64>>,
    primes: Option<Vec<Nat>>,
) -> Result<ExponentMatrix, GenError> {
    let k = exponents.first().map_or(0, Vec::len);
    let primes = primes.unwrap_or_else(|| first_primes(k));
    if primes.len() != k {
        return Err(GenError::PrimeCount { needed: k, given: primes.len() });
    }
    Ok(ExponentMatrix::new(primes, exponents)?)
}

pub fn pascal(n: usize, primes: Option<Vec<Nat>>) -> Result<ExponentMatrix, GenError> {
    if n == 0 {
        return Err(GenError::InvalidSize);
    }
    with_primes(pascal_exponents(n), primes)
}

pub fn vandermonde(bases: &[u64], primes: Option<Vec<Nat>>) -> Result<ExponentMatrix, GenError> {
    with_primes(vandermonde_exponents(bases)?, primes)
}

/// Random column-monotone exponent matrix with `n` distinct rows.
pub fn random_column_monotone<R: Rng>(
    rng: &mut R,
    n: usize,
    primes: Option<&[Nat]>,
    max_exponent: u64,
) -> Result<ExponentMatrix, GenError> {
    if n == 0 {
        return Err(GenError::InvalidSize);
    }
    for _ in 0..MAX_ATTEMPTS {
        let k = match primes {
            Some(p) => p.len(),
            None => rng.gen_range(1..=MAX_RANDOM_COLUMNS),
        };
        let columns: Vec<Vec<u64>> = (0..k)
            .map(|_| {
                let up = rng.gen_bool(0.5);
                let mut col: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_exponent)).collect();
                col.sort_unstable();
                if !up {
                    col.reverse();
                }
                col
            })
            .collect();
        let rows: Vec<Vec<u64>> = (0..n).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        let mut sorted = rows.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let primes = match primes {
            Some(p) => p.to_vec(),
            None => first_primes(k),
        };
        return Ok(ExponentMatrix::new(primes, rows)?);
    }
    Err(GenError::Exhausted(MAX_ATTEMPTS))
}

/// Convenience: a random TN-ordered set.
pub fn random_tn_set<R: Rng>(rng: &mut R, n: usize, max_exponent: u64) -> Result<OrderedSet, GenError> {
    Ok(random_column_monotone(rng, n, None, max_exponent)?.reconstruct()?)
}

/// Distinct random integers in `1..=bound`, in random order.
pub fn random_set<R: Rng>(rng: &mut R, n: usize, bound: u64) -> Result<OrderedSet, GenError> {
    if n == 0 || (n as u64) > bound {
        return Err(GenError::InvalidSize);
    }
    let mut seen = std::collections::HashSet::new();
    let mut values = Vec::with_capacity(n);
    while values.len() < n {
        let v = rng.gen_range(1..=bound);
        if seen.insert(v) {
            values.push(v);
        }
    }
    Ok(OrderedSet::from_u64s(&values)?)
}
