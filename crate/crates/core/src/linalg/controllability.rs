use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::dense::DenseMatrix;
use super::eigen::{left_eigensystem_with, EigenOptions, EigenSystem};
use super::numeric::{rank_numeric, RankTolerance};
use super::pbh::{pbh_rank_matrix, pbh_rank_support, pbh_rank_vector};
use super::rational::{float_to_rational, rank_exact, RationalMatrix};
use crate::error::{Error, Result};

fn check_shapes(a_rows: usize, a_cols: usize, b_rows: usize) -> Result<()> {
    if a_rows != a_cols {
        return Err(Error::DimensionMismatch(format!(
            "A must be square, got {a_rows}x{a_cols}"
        )));
    }
    if b_rows != a_rows {
        return Err(Error::DimensionMismatch(format!(
            "B has {b_rows} rows, A is {a_rows}x{a_rows}"
        )));
    }
    Ok(())
}

/// `(B, AB, A²B, …, Aⁿ⁻¹B)` as an `n × (n·m)` matrix.
pub fn controllability_matrix(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    check_shapes(a.rows(), a.cols(), b.rows())?;
    let n = a.rows();
    let m = b.cols();
    let an = a.to_nalgebra();
    let mut block = b.to_nalgebra();
    let mut out = nalgebra::DMatrix::<f64>::zeros(n, n * m);
    for k in 0..n {
        out.view_mut((0, k * m), (n, m)).copy_from(&block);
        if k + 1 < n {
            block = &an * block;
        }
    }
    DenseMatrix::from_nalgebra(&out)
}

/// Exact counterpart of [`controllability_matrix`].
pub fn controllability_matrix_exact(
    a: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<RationalMatrix> {
    check_shapes(a.rows(), a.cols(), b.rows())?;
    let n = a.rows();
    let m = b.cols();
    let mut out = RationalMatrix::zeros(n, n * m);
    let mut block = b.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..m {
                out.set(i, k * m + j, block.get(i, j).clone());
            }
        }
        if k + 1 < n {
            block = a.matmul(&block)?;
        }
    }
    Ok(out)
}

/// How `rank C(A, ·)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankBackend {
    /// Singular values of the floating-point controllability matrix.
    Svd,
    /// Count of left eigenvectors not orthogonal to the input (distinct eigenvalues only).
    Pbh,
    /// Fraction-free elimination over the rationals.
    Exact,
}

impl fmt::Display for RankBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankBackend::Svd => "svd",
            RankBackend::Pbh => "pbh",
            RankBackend::Exact => "exact",
        })
    }
}

impl FromStr for RankBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "svd" => Ok(RankBackend::Svd),
            "pbh" => Ok(RankBackend::Pbh),
            "exact" => Ok(RankBackend::Exact),
            other => Err(Error::InvalidInput(format!(
                "unknown rank backend {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RankOptions {
    pub tolerance: RankTolerance,
    /// PBH zero test: `|vᵀb| ≤ orth_rel_tol · ‖b‖` counts as orthogonal.
    pub orth_rel_tol: f64,
    pub eigen: EigenOptions,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            tolerance: RankTolerance::Default,
            orth_rel_tol: 1e-8,
            eigen: EigenOptions::default(),
        }
    }
}

enum Engine {
    Svd {
        a: DenseMatrix,
        tolerance: RankTolerance,
    },
    Pbh {
        eig: Box<EigenSystem>,
        orth_rel_tol: f64,
    },
    Exact {
        /// `A⁰, A¹, …, Aⁿ⁻¹`.
        powers: Vec<RationalMatrix>,
    },
}

/// A system matrix prepared for repeated `rank C(A, ·)` queries.
pub struct RankEvaluator {
    n: usize,
    backend: RankBackend,
    engine: Engine,
}

impl RankEvaluator {
    pub fn new(a: &DenseMatrix, backend: RankBackend, opts: &RankOptions) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "A must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        match backend {
            RankBackend::Exact => Self::exact(&RationalMatrix::from_dense(a)?),
            RankBackend::Svd => Ok(Self {
                n: a.rows(),
                backend,
                engine: Engine::Svd {
                    a: a.clone(),
                    tolerance: opts.tolerance,
                },
            }),
            RankBackend::Pbh => {
                let eig = left_eigensystem_with(a, &opts.eigen)?;
                Self::from_eigensystem(eig, opts.orth_rel_tol)
            }
        }
    }

    /// Exact backend over a rational system matrix.
    pub fn exact(a: &RationalMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "A must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut powers = Vec::with_capacity(n);
        if n > 0 {
            powers.push(RationalMatrix::identity(n));
        }
        for k in 1..n {
            let next = a.matmul(&powers[k - 1])?;
            powers.push(next);
        }
        Ok(Self {
            n,
            backend: RankBackend::Exact,
            engine: Engine::Exact { powers },
        })
    }

    /// Any backend over a rational system matrix; float backends use the
    /// nearest-double copy.
    pub fn from_rational(
        a: &RationalMatrix,
        backend: RankBackend,
        opts: &RankOptions,
    ) -> Result<Self> {
        match backend {
            RankBackend::Exact => Self::exact(a),
            _ => Self::new(&a.to_dense()?, backend, opts),
        }
    }

    /// PBH backend from a precomputed eigensystem. Fails unless the
    /// eigenvalues are pairwise separated by more than the gap threshold.
    pub fn from_eigensystem(eig: EigenSystem, orth_rel_tol: f64) -> Result<Self> {
        if !eig.has_distinct_eigenvalues() {
            return Err(Error::BackendPrecondition(format!(
                "PBH backend needs distinct eigenvalues; minimum gap {:.3e} ≤ threshold {:.3e}",
                eig.min_pairwise_gap, eig.gap_threshold
            )));
        }
        if orth_rel_tol.is_nan() || orth_rel_tol <= 0.0 {
            return Err(Error::InvalidInput(
                "orthogonality tolerance must be positive".into(),
            ));
        }
        Ok(Self {
            n: eig.n(),
            backend: RankBackend::Pbh,
            engine: Engine::Pbh {
                eig: Box::new(eig),
                orth_rel_tol,
            },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn backend(&self) -> RankBackend {
        self.backend
    }

    pub fn eigensystem(&self) -> Option<&EigenSystem> {
        match &self.engine {
            Engine::Pbh { eig, .. } => Some(eig),
            _ => None,
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch(format!(
                "input has {len} rows, system has dimension {}",
                self.n
            )));
        }
        Ok(())
    }

    /// `rank C(A, b)` for a single input column.
    pub fn rank_vector(&self, b: &[f64]) -> Result<usize> {
        self.check_len(b.len())?;
        match &self.engine {
            Engine::Svd { a, tolerance } => rank_numeric(
                &controllability_matrix(a, &DenseMatrix::column(b)?)?,
                *tolerance,
            ),
            Engine::Pbh { eig, orth_rel_tol } => {
                let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Ok(0);
                }
                pbh_rank_vector(eig, b, orth_rel_tol * norm)
            }
            Engine::Exact { .. } => {
                let exact = b
                    .iter()
                    .map(|&x| float_to_rational(x))
                    .collect::<Result<Vec<_>>>()?;
                self.rank_vector_exact(&exact)
            }
        }
    }

    /// `rank C(A, b)` for an exact input column. Float backends round `b`.
    pub fn rank_vector_exact(&self, b: &[BigRational]) -> Result<usize> {
        self.check_len(b.len())?;
        match &self.engine {
            Engine::Exact { powers } => {
                let n = self.n;
                let nz: Vec<usize> = (0..n).filter(|&j| !b[j].is_zero()).collect();
                let mut c = RationalMatrix::zeros(n, n);
                for (k, p) in powers.iter().enumerate() {
                    for i in 0..n {
                        let mut acc = BigRational::zero();
                        for &j in &nz {
                            let e = p.get(i, j);
                            if !e.is_zero() {
                                acc += e * &b[j];
                            }
                        }
                        c.set(i, k, acc);
                    }
                }
                Ok(rank_exact(&c))
            }
            _ => {
                let approx: Vec<f64> = b.iter().map(super::rational::rational_to_f64).collect();
                self.rank_vector(&approx)
            }
        }
    }

    /// `rank C(A, D)` for the diagonal 0/1 input `D = Σ_{j∈support} eⱼeⱼᵀ`.
    pub fn rank_diagonal(&self, support: &[usize]) -> Result<usize> {
        if let Some(&j) = support.iter().find(|&&j| j >= self.n) {
            return Err(Error::InvalidInput(format!(
                "support index {j} out of range"
            )));
        }
        if support.is_empty() {
            return Ok(0);
        }
        match &self.engine {
            Engine::Svd { a, tolerance } => {
                let mut b = vec![0.0; self.n * support.len()];
                for (col, &j) in support.iter().enumerate() {
                    b[j * support.len() + col] = 1.0;
                }
                let b = DenseMatrix::new(self.n, support.len(), b)?;
                rank_numeric(&controllability_matrix(a, &b)?, *tolerance)
            }
            Engine::Pbh { eig, orth_rel_tol } => pbh_rank_support(eig, support, *orth_rel_tol),
            Engine::Exact { powers } => {
                let n = self.n;
                let m = support.len();
                let mut c = RationalMatrix::zeros(n, n * m);
                for (k, p) in powers.iter().enumerate() {
                    for (col, &j) in support.iter().enumerate() {
                        for i in 0..n {
                            c.set(i, k * m + col, p.get(i, j).clone());
                        }
                    }
                }
                Ok(rank_exact(&c))
            }
        }
    }

    /// `rank C(A, B)` for a general `n × m` input matrix.
    pub fn rank_input(&self, b: &DenseMatrix) -> Result<usize> {
        self.check_len(b.rows())?;
        match &self.engine {
            Engine::Svd { a, tolerance } => {
                rank_numeric(&controllability_matrix(a, b)?, *tolerance)
            }
            Engine::Pbh { eig, orth_rel_tol } => {
                let norm = b.data().iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Ok(0);
                }
                pbh_rank_matrix(eig, b, orth_rel_tol * norm)
            }
            Engine::Exact { .. } => self.rank_input_exact(&RationalMatrix::from_dense(b)?),
        }
    }

    pub fn rank_input_exact(&self, b: &RationalMatrix) -> Result<usize> {
        self.check_len(b.rows())?;
        match &self.engine {
            Engine::Exact { powers } => {
                let n = self.n;
                let m = b.cols();
                let mut c = RationalMatrix::zeros(n, n * m);
                for (k, p) in powers.iter().enumerate() {
                    let block = p.matmul(b)?;
                    for i in 0..n {
                        for j in 0..m {
                            c.set(i, k * m + j, block.get(i, j).clone());
                        }
                    }
                }
                Ok(rank_exact(&c))
            }
            _ => self.rank_input(&b.to_dense()?),
        }
    }
}
