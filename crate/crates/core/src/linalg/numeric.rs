use serde::{Deserialize, Serialize};

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Threshold rule for counting singular values as nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RankTolerance {
    /// `max(rows, cols) · σ_max · ε`.
    #[default]
    Default,
    Absolute {
        tol: f64,
    },
}

impl RankTolerance {
    pub fn threshold(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        match *self {
            RankTolerance::Default => rows.max(cols) as f64 * sigma_max * f64::EPSILON,
            RankTolerance::Absolute { tol } => tol,
        }
    }
}

pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(Vec::new());
    }
    let svd = m
        .to_nalgebra()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or(Error::Numeric {
            operation: "singular value decomposition",
            matrix_hash: m.fingerprint(),
        })?;
    Ok(svd.singular_values.iter().copied().collect())
}

/// Number of singular values strictly above the tolerance threshold.
pub fn rank_numeric(m: &DenseMatrix, tolerance: RankTolerance) -> Result<usize> {
    let sv = singular_values(m)?;
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    let thr = tolerance.threshold(m.rows(), m.cols(), sigma_max);
    Ok(sv.iter().filter(|&&s| s > thr).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_full_rank() {
        assert_eq!(
            rank_numeric(&DenseMatrix::identity(2), RankTolerance::Default).unwrap(),
            2
        );
        assert_eq!(
            rank_numeric(&DenseMatrix::zeros(3, 2), RankTolerance::Default).unwrap(),
            0
        );
    }

    #[test]
    fn nearly_singular_two_by_two_under_default_policy() {
        let eps = 1e-15;
        let m = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0 + eps]]).unwrap();
        // Independent closed form for a symmetric 2x2 matrix: the singular values
        // are |eigenvalues|; the small one is det / large, and det = (1+ε)-1 is
        // computed exactly (Sterbenz).
        let d = m.get(1, 1) - 1.0;
        let tr = m.get(0, 0) + m.get(1, 1);
        let big = 0.5 * (tr + (tr * tr - 4.0 * d).sqrt());
        let small = d / big;
        let thr = 2.0 * big * f64::EPSILON;
        assert!(big > thr);
        assert!(
            small < thr,
            "small singular value {small} vs threshold {thr}"
        );
        assert_eq!(rank_numeric(&m, RankTolerance::Default).unwrap(), 1);
        // A tighter absolute tolerance sees both.
        assert_eq!(
            rank_numeric(&m, RankTolerance::Absolute { tol: 1e-17 }).unwrap(),
            2
        );
    }
}
