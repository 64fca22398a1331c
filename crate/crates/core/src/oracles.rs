//! Exhaustive ground truth for small instances.
//!
//! Candidates are enumerated by increasing cardinality and lexicographically
//! within a cardinality, so the first feasible candidate is both optimal and
//! a deterministic witness.

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    controllability::controllability_matrix_exact, pbh_support_test, rank_exact, DenseMatrix,
    RankBackend, RankEvaluator, RankOptions, RationalMatrix,
};
use crate::reductions::HittingSetInstance;

pub const MAX_HITTING_SET_GROUND: usize = 20;
pub const MAX_SUPPORT_DIMENSION: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub optimum: usize,
    /// Minimizing set: 1-based elements for hitting sets, 0-based
    /// coordinates for supports.
    pub witness: Vec<usize>,
    pub enumerated: u64,
}

/// Size guards for the enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_ground: usize,
    pub max_dimension: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_ground: MAX_HITTING_SET_GROUND,
            max_dimension: MAX_SUPPORT_DIMENSION,
        }
    }
}

impl OracleLimits {
    pub fn unlimited() -> Self {
        Self {
            max_ground: usize::MAX,
            max_dimension: usize::MAX,
        }
    }
}

fn first_feasible(
    universe: usize,
    min_size: usize,
    mut feasible: impl FnMut(&[usize]) -> bool,
) -> Option<OracleResult> {
    let mut enumerated = 0u64;
    for k in min_size..=universe {
        for cand in (0..universe).combinations(k) {
            enumerated += 1;
            if feasible(&cand) {
                return Some(OracleResult {
                    optimum: k,
                    witness: cand,
                    enumerated,
                });
            }
        }
    }
    None
}

pub fn brute_force_hitting_set(inst: &HittingSetInstance) -> Result<OracleResult> {
    brute_force_hitting_set_with(inst, OracleLimits::default())
}

pub fn brute_force_hitting_set_with(
    inst: &HittingSetInstance,
    limits: OracleLimits,
) -> Result<OracleResult> {
    inst.validate()?;
    if inst.m > limits.max_ground {
        return Err(Error::GuardExceeded {
            size: inst.m,
            limit: limits.max_ground,
        });
    }
    let sets: Vec<Vec<usize>> = inst
        .sets
        .iter()
        .map(|s| s.iter().map(|e| e - 1).collect())
        .collect();
    let mut res = first_feasible(inst.m, 1, |cand| {
        sets.iter().all(|s| s.iter().any(|e| cand.contains(e)))
    })
    .ok_or_else(|| {
        Error::Internal("a validated instance is always hit by the full ground set".into())
    })?;
    for e in &mut res.witness {
        *e += 1;
    }
    if !inst.is_hitting_set(&res.witness) {
        return Err(Error::Internal(
            "hitting-set witness failed certification".into(),
        ));
    }
    Ok(res)
}

fn check_rows(v_rows: &RationalMatrix, limits: OracleLimits) -> Result<()> {
    let n = v_rows.cols();
    if n > limits.max_dimension {
        return Err(Error::GuardExceeded {
            size: n,
            limit: limits.max_dimension,
        });
    }
    if let Some(i) = (0..v_rows.rows()).find(|&i| v_rows.row(i).iter().all(Zero::is_zero)) {
        return Err(Error::InvalidInput(format!(
            "row {i} is zero and cannot be a left eigenvector"
        )));
    }
    Ok(())
}

/// Smallest support whose coordinates meet the support of every row.
pub fn brute_force_min_vector_support(v_rows: &RationalMatrix) -> Result<OracleResult> {
    brute_force_min_vector_support_with(v_rows, OracleLimits::default())
}

pub fn brute_force_min_vector_support_with(
    v_rows: &RationalMatrix,
    limits: OracleLimits,
) -> Result<OracleResult> {
    check_rows(v_rows, limits)?;
    if v_rows.rows() == 0 {
        return Ok(OracleResult {
            optimum: 0,
            witness: Vec::new(),
            enumerated: 1,
        });
    }
    let res =
        first_feasible(v_rows.cols(), 1, |s| pbh_support_test(v_rows, s)).ok_or_else(|| {
            Error::Internal("full support is always feasible for nonzero rows".into())
        })?;
    if !pbh_support_test(v_rows, &res.witness) {
        return Err(Error::Internal(
            "support witness failed certification".into(),
        ));
    }
    Ok(res)
}

fn diagonal_selector(n: usize, support: &[usize]) -> RationalMatrix {
    let mut b = RationalMatrix::zeros(n, n);
    for &j in support {
        b.set(j, j, num_rational::BigRational::from_integer(1.into()));
    }
    b
}

/// `vᵀB ≠ 0` for every row `v`, with `B = diag(1_support)`.
fn diagonal_feasible(v_rows: &RationalMatrix, support: &[usize]) -> bool {
    let b = diagonal_selector(v_rows.cols(), support);
    let vb = v_rows
        .matmul(&b)
        .expect("square selector matches row length");
    (0..vb.rows()).all(|i| vb.row(i).iter().any(|x| !x.is_zero()))
}

/// Smallest diagonal `B` for which no row is orthogonal to every column of `B`.
pub fn brute_force_min_diagonal_support(v_rows: &RationalMatrix) -> Result<OracleResult> {
    brute_force_min_diagonal_support_with(v_rows, OracleLimits::default())
}

pub fn brute_force_min_diagonal_support_with(
    v_rows: &RationalMatrix,
    limits: OracleLimits,
) -> Result<OracleResult> {
    check_rows(v_rows, limits)?;
    if v_rows.rows() == 0 {
        return Ok(OracleResult {
            optimum: 0,
            witness: Vec::new(),
            enumerated: 1,
        });
    }
    let res =
        first_feasible(v_rows.cols(), 1, |s| diagonal_feasible(v_rows, s)).ok_or_else(|| {
            Error::Internal("full diagonal is always feasible for nonzero rows".into())
        })?;
    if !diagonal_feasible(v_rows, &res.witness) {
        return Err(Error::Internal(
            "diagonal witness failed certification".into(),
        ));
    }
    Ok(res)
}

/// `rank C(A, B) == n` under the chosen backend.
pub fn kalman_test(a: &DenseMatrix, b: &DenseMatrix, backend: RankBackend) -> Result<bool> {
    let eval = RankEvaluator::new(a, backend, &RankOptions::default())?;
    Ok(eval.rank_input(b)? == eval.n())
}

pub fn kalman_test_exact(a: &RationalMatrix, b: &RationalMatrix) -> Result<bool> {
    let c = controllability_matrix_exact(a, b)?;
    Ok(rank_exact(&c) == a.rows())
}
