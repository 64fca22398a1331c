//! Greedy rank-maximization solvers.
//!
//! Each solver grows a support one index at a time, always taking the index
//! whose activation increases `rank C(A, ·)` the most, and stops as soon as
//! no index increases the rank. Ties go to the lowest index (and, for the
//! deterministic solver, the lowest probe value).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, RankBackend, RankEvaluator, RankOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    RandomizedVector,
    DeterministicVector,
    Diagonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub chosen_index: usize,
    pub chosen_value: f64,
    pub rank_before: usize,
    pub rank_after: usize,
}

/// Output of every greedy solver. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub algorithm: Algorithm,
    pub backend: RankBackend,
    pub n: usize,
    pub support: Vec<usize>,
    pub values: Vec<f64>,
    pub final_rank: usize,
    pub controllable: bool,
    pub trace: Vec<TraceStep>,
    pub rank_evaluations: usize,
}

impl SolveResult {
    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    /// Dense input vector (vector modes) or diagonal of `B` (diagonal mode).
    pub fn input_vector(&self) -> Vec<f64> {
        let mut b = vec![0.0; self.n];
        for (&j, &v) in self.support.iter().zip(&self.values) {
            b[j] = v;
        }
        b
    }
}

struct Run {
    n: usize,
    support: Vec<usize>,
    values: Vec<f64>,
    rank: usize,
    trace: Vec<TraceStep>,
    evaluations: usize,
}

impl Run {
    fn new(n: usize) -> Self {
        Self {
            n,
            support: Vec::new(),
            values: Vec::new(),
            rank: 0,
            trace: Vec::new(),
            evaluations: 0,
        }
    }

    fn accept(&mut self, index: usize, value: f64, new_rank: usize) {
        self.trace.push(TraceStep {
            step: self.trace.len() + 1,
            chosen_index: index,
            chosen_value: value,
            rank_before: self.rank,
            rank_after: new_rank,
        });
        self.support.push(index);
        self.values.push(value);
        self.rank = new_rank;
    }

    fn finish(self, algorithm: Algorithm, backend: RankBackend) -> SolveResult {
        SolveResult {
            algorithm,
            backend,
            n: self.n,
            controllable: self.rank == self.n,
            final_rank: self.rank,
            support: self.support,
            values: self.values,
            trace: self.trace,
            rank_evaluations: self.evaluations,
        }
    }
}

fn require_square(a: &DenseMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "A must be square, got {}x{}",
            a.rows(),
            a.cols()
        )))
    }
}

/// Randomized greedy: each zero entry is tentatively set to a fresh standard
/// normal draw; the draw giving the largest rank increase is kept.
pub fn randomized_greedy_vector(
    a: &DenseMatrix,
    seed: u64,
    backend: RankBackend,
) -> Result<SolveResult> {
    require_square(a)?;
    let eval = RankEvaluator::new(a, backend, &RankOptions::default())?;
    randomized_greedy_vector_with(&eval, seed)
}

pub fn randomized_greedy_vector_with(eval: &RankEvaluator, seed: u64) -> Result<SolveResult> {
    let n = eval.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = Run::new(n);
    let mut b = vec![0.0; n];
    while run.rank < n {
        let mut best: Option<(usize, f64, usize)> = None;
        for j in 0..n {
            if b[j] != 0.0 {
                continue;
            }
            let x: f64 = StandardNormal.sample(&mut rng);
            b[j] = x;
            let r = eval.rank_vector(&b)?;
            run.evaluations += 1;
            b[j] = 0.0;
            if r > best.map_or(run.rank, |(_, _, br)| br) {
                best = Some((j, x, r));
            }
        }
        let Some((j, x, r)) = best else { break };
        b[j] = x;
        run.accept(j, x, r);
    }
    Ok(run.finish(Algorithm::RandomizedVector, eval.backend()))
}

/// Deterministic greedy: each zero entry is probed with the values
/// `1, 2, …, 2n+1`; the (index, value) pair with the largest rank increase is
/// kept.
pub fn deterministic_greedy_vector(a: &DenseMatrix, backend: RankBackend) -> Result<SolveResult> {
    require_square(a)?;
    let eval = RankEvaluator::new(a, backend, &RankOptions::default())?;
    deterministic_greedy_vector_with(&eval)
}

pub fn deterministic_greedy_vector_with(eval: &RankEvaluator) -> Result<SolveResult> {
    let n = eval.n();
    let probes = 2 * n + 1;
    let mut run = Run::new(n);
    let mut b = vec![0.0; n];
    while run.rank < n {
        let mut best: Option<(usize, f64, usize)> = None;
        'scan: for j in 0..n {
            if b[j] != 0.0 {
                continue;
            }
            for p in 1..=probes {
                let value = p as f64;
                b[j] = value;
                let r = eval.rank_vector(&b)?;
                run.evaluations += 1;
                b[j] = 0.0;
                if r > best.map_or(run.rank, |(_, _, br)| br) {
                    best = Some((j, value, r));
                    // Nothing later in scan order can beat a full-rank hit.
                    if r == n {
                        break 'scan;
                    }
                }
            }
        }
        let Some((j, value, r)) = best else { break };
        b[j] = value;
        run.accept(j, value, r);
    }
    Ok(run.finish(Algorithm::DeterministicVector, eval.backend()))
}

/// Diagonal greedy: adds `eⱼeⱼᵀ` to `B` for the index with the largest rank
/// increase of `C(A, B)`.
pub fn greedy_diagonal(a: &DenseMatrix, backend: RankBackend) -> Result<SolveResult> {
    require_square(a)?;
    let eval = RankEvaluator::new(a, backend, &RankOptions::default())?;
    greedy_diagonal_with(&eval)
}

pub fn greedy_diagonal_with(eval: &RankEvaluator) -> Result<SolveResult> {
    let n = eval.n();
    let mut run = Run::new(n);
    let mut active = vec![false; n];
    while run.rank < n {
        let mut best: Option<(usize, usize)> = None;
        let mut candidate = run.support.clone();
        for j in (0..n).filter(|&j| !active[j]) {
            candidate.push(j);
            let r = eval.rank_diagonal(&candidate)?;
            run.evaluations += 1;
            candidate.pop();
            if r > best.map_or(run.rank, |(_, br)| br) {
                best = Some((j, r));
            }
        }
        let Some((j, r)) = best else { break };
        active[j] = true;
        run.accept(j, 1.0, r);
    }
    Ok(run.finish(Algorithm::Diagonal, eval.backend()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag123() -> DenseMatrix {
        DenseMatrix::from_diagonal(&[1.0, 2.0, 3.0]).unwrap()
    }

    #[test]
    fn randomized_on_diagonal_needs_every_index() {
        for backend in [RankBackend::Exact, RankBackend::Pbh, RankBackend::Svd] {
            for seed in [0, 1, 99] {
                let r = randomized_greedy_vector(&diag123(), seed, backend).unwrap();
                let mut s = r.support.clone();
                s.sort_unstable();
                assert_eq!(s, vec![0, 1, 2]);
                assert_eq!(r.final_rank, 3);
                assert!(r.controllable);
            }
        }
    }

    #[test]
    fn identity_stalls_at_rank_one() {
        let a = DenseMatrix::identity(2);
        let r = randomized_greedy_vector(&a, 7, RankBackend::Exact).unwrap();
        assert_eq!((r.sparsity(), r.final_rank, r.controllable), (1, 1, false));
        let r = deterministic_greedy_vector(&a, RankBackend::Svd).unwrap();
        assert_eq!((r.sparsity(), r.final_rank, r.controllable), (1, 1, false));
    }

    #[test]
    fn deterministic_on_diagonal_uses_unit_values() {
        let r = deterministic_greedy_vector(&diag123(), RankBackend::Exact).unwrap();
        assert_eq!(r.support, vec![0, 1, 2]);
        assert_eq!(r.values, vec![1.0, 1.0, 1.0]);
        assert_eq!(r.final_rank, 3);
    }

    #[test]
    fn diagonal_greedy_small_cases() {
        let r = greedy_diagonal(
            &DenseMatrix::from_diagonal(&[1.0, 2.0]).unwrap(),
            RankBackend::Exact,
        )
        .unwrap();
        assert_eq!(r.support, vec![0, 1]);
        assert_eq!(r.trace[0].rank_after, 1);
        let r = greedy_diagonal(&DenseMatrix::identity(2), RankBackend::Exact).unwrap();
        assert_eq!(
            (r.support.clone(), r.final_rank, r.controllable),
            (vec![0, 1], 2, true)
        );
    }

    #[test]
    fn pbh_backend_rejected_before_iteration() {
        assert!(matches!(
            randomized_greedy_vector(&DenseMatrix::identity(3), 0, RankBackend::Pbh),
            Err(Error::BackendPrecondition(_))
        ));
    }

    #[test]
    fn trace_is_strictly_increasing() {
        let a = DenseMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 5.0],
        ])
        .unwrap();
        let r = deterministic_greedy_vector(&a, RankBackend::Exact).unwrap();
        assert!(r.controllable);
        for w in r.trace.windows(2) {
            assert_eq!(w[0].rank_after, w[1].rank_before);
        }
        assert!(r.trace.iter().all(|s| s.rank_after > s.rank_before));
        // The chain needs its tail node plus the isolated mode.
        assert_eq!(r.support, vec![2, 3]);
    }

    #[test]
    fn result_serializes_with_trace() {
        let r = deterministic_greedy_vector(&diag123(), RankBackend::Exact).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["backend"], "exact");
        assert_eq!(v["trace"].as_array().unwrap().len(), 3);
        let back: SolveResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
