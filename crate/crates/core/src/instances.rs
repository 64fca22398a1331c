//! Seeded generators for random test and benchmark instances.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::linalg::rational::{int, ratio};
use crate::linalg::{rank_exact, JordanSpec, RationalMatrix};
use crate::reductions::HittingSetInstance;

/// Random valid instance: each set is a nonempty random subset of `{1..m}`,
/// and uncovered elements are added to a random set.
pub fn random_hitting_set<R: Rng>(m: usize, p: usize, rng: &mut R) -> HittingSetInstance {
    assert!(m >= 1 && p >= 1, "need m ≥ 1 and p ≥ 1");
    let mut sets: Vec<Vec<usize>> = (0..p)
        .map(|_| loop {
            let s: Vec<usize> = (1..=m).filter(|_| rng.random_bool(0.5)).collect();
            if !s.is_empty() {
                break s;
            }
        })
        .collect();
    for e in 1..=m {
        if !sets.iter().any(|s| s.contains(&e)) {
            let k = rng.random_range(0..p);
            sets[k].push(e);
            sets[k].sort_unstable();
        }
    }
    HittingSetInstance { m, sets }
}

/// Exact system with distinct integer eigenvalues and sparse integer left
/// eigenvectors.
#[derive(Debug, Clone)]
pub struct DistinctEigenInstance {
    pub a: RationalMatrix,
    /// Row `i` is a left eigenvector for `eigenvalues[i]`.
    pub left_eigenvectors: RationalMatrix,
    pub eigenvalues: Vec<i64>,
}

/// `A = P⁻¹·diag(λ)·P` with `P` an invertible matrix of entries in
/// `{-2..2}` (about half of them zero) and distinct integer `λ`.
pub fn random_distinct_eigen_instance<R: Rng>(
    n: usize,
    rng: &mut R,
) -> Result<DistinctEigenInstance> {
    let p = loop {
        let data: Vec<BigRational> = (0..n * n)
            .map(|_| {
                if rng.random_bool(0.55) {
                    int(0)
                } else {
                    let v = rng.random_range(1..=2) * if rng.random_bool(0.5) { 1 } else { -1 };
                    int(v)
                }
            })
            .collect();
        let p = RationalMatrix::new(n, n, data)?;
        if rank_exact(&p) == n {
            break p;
        }
    };
    let mut pool: Vec<i64> = (-(n as i64) - 2..=(n as i64) + 2).collect();
    pool.shuffle(rng);
    let eigenvalues: Vec<i64> = pool[..n].to_vec();
    let d = RationalMatrix::from_diagonal(&eigenvalues.iter().map(|&l| int(l)).collect::<Vec<_>>());
    let p_inv = p.inverse()?.expect("P has full rank");
    let a = p_inv.matmul(&d)?.matmul(&p)?;
    Ok(DistinctEigenInstance {
        a,
        left_eigenvectors: p,
        eigenvalues,
    })
}

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    ratio(rng.random_range(-3..=3), rng.random_range(1..=3))
}

/// Random single-block-per-eigenvalue Jordan structure of dimension `n`
/// with a dense random rational `T⁻¹`.
pub fn random_jordan_spec<R: Rng>(n: usize, rng: &mut R) -> Result<JordanSpec> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let d = rng.random_range(1..=left);
        sizes.push(d);
        left -= d;
    }
    let mut pool: Vec<i64> = (-6..=6).collect();
    pool.shuffle(rng);
    let eigenvalues: Vec<BigRational> = pool[..sizes.len()].iter().map(|&l| int(l)).collect();
    let t_inv = loop {
        let data: Vec<BigRational> = (0..n * n).map(|_| small_rational(rng)).collect();
        let t = RationalMatrix::new(n, n, data)?;
        if rank_exact(&t) == n {
            break t;
        }
    };
    JordanSpec::new(eigenvalues, sizes, t_inv)
}

/// Random rational vector; each entry is zero with probability `zero_prob`.
pub fn random_rational_vector<R: Rng>(n: usize, zero_prob: f64, rng: &mut R) -> Vec<BigRational> {
    (0..n)
        .map(|_| {
            if rng.random_bool(zero_prob) {
                int(0)
            } else {
                small_rational(rng)
            }
        })
        .collect()
}
