//! Popov–Belevitch–Hautus rank tests.
//!
//! For a matrix with distinct eigenvalues, `rank C(A, B)` equals the number of
//! left eigenvectors `v` with `vᵀB ≠ 0`.

use nalgebra::Complex;
use num_traits::Zero;

use super::dense::DenseMatrix;
use super::eigen::EigenSystem;
use super::rational::RationalMatrix;
use crate::error::{Error, Result};

fn require_distinct(eig: &EigenSystem) -> Result<()> {
    if eig.has_distinct_eigenvalues() {
        Ok(())
    } else {
        Err(Error::BackendPrecondition(format!(
            "eigenvalue gap {:.3e} is not above threshold {:.3e}; use the covered-count or rank backends",
            eig.min_pairwise_gap, eig.gap_threshold
        )))
    }
}

fn inner(v: &[Complex<f64>], b: &[f64]) -> f64 {
    v.iter()
        .zip(b)
        .filter(|(_, &x)| x != 0.0)
        .fold(Complex::new(0.0, 0.0), |acc, (z, &x)| acc + z * x)
        .norm()
}

/// `n` minus the number of left eigenvectors with `|vᵀb| ≤ orth_tol`.
pub fn pbh_controllability_rank(
    eig: &EigenSystem,
    b: &DenseMatrix,
    orth_tol: f64,
) -> Result<usize> {
    if b.cols() != 1 || b.rows() != eig.n() {
        return Err(Error::DimensionMismatch(format!(
            "b must be {}x1, got {}x{}",
            eig.n(),
            b.rows(),
            b.cols()
        )));
    }
    pbh_rank_vector(eig, b.data(), orth_tol)
}

pub(crate) fn pbh_rank_vector(eig: &EigenSystem, b: &[f64], orth_tol: f64) -> Result<usize> {
    if orth_tol.is_nan() || orth_tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "orthogonality tolerance must be positive, got {orth_tol}"
        )));
    }
    require_distinct(eig)?;
    Ok(eig
        .left_eigenvectors
        .iter()
        .filter(|v| inner(v, b) > orth_tol)
        .count())
}

/// Rank of `C(A, B)` for an arbitrary input matrix `B` (n×m).
pub(crate) fn pbh_rank_matrix(eig: &EigenSystem, b: &DenseMatrix, orth_tol: f64) -> Result<usize> {
    require_distinct(eig)?;
    let cols: Vec<Vec<f64>> = (0..b.cols())
        .map(|j| (0..b.rows()).map(|i| b.get(i, j)).collect())
        .collect();
    Ok(eig
        .left_eigenvectors
        .iter()
        .filter(|v| {
            let sq: f64 = cols.iter().map(|c| inner(v, c).powi(2)).sum();
            sq.sqrt() > orth_tol
        })
        .count())
}

/// Rank of `C(A, diag(1_S))`: eigenvectors with some entry in `support` above `tol`.
pub(crate) fn pbh_rank_support(eig: &EigenSystem, support: &[usize], tol: f64) -> Result<usize> {
    require_distinct(eig)?;
    Ok(eig
        .left_eigenvectors
        .iter()
        .filter(|v| support.iter().any(|&j| v[j].norm() > tol))
        .count())
}

/// True iff every row of `v_rows` has a nonzero entry inside `support`.
///
/// When the rows are the left eigenvectors of a matrix with distinct
/// eigenvalues this is exactly "some `b` supported on `support` makes the
/// system controllable".
pub fn pbh_support_test(v_rows: &RationalMatrix, support: &[usize]) -> bool {
    (0..v_rows.rows()).all(|i| {
        let row = v_rows.row(i);
        support.iter().any(|&j| j < row.len() && !row[j].is_zero())
    })
}
