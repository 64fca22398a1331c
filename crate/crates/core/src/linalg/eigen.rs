use nalgebra::{Complex, DMatrix, DVector, Schur};
use serde::{Deserialize, Serialize};

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EigenOptions {
    /// Eigenvalues closer than this are treated as one cluster.
    pub gap_threshold: f64,
    /// Singular values of `A - λI` at or below `multiplicity_tol · max(1, σ_max(A))`
    /// count toward the eigenspace dimension.
    pub multiplicity_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            gap_threshold: 0.01,
            multiplicity_tol: 1e-8,
        }
    }
}

/// A group of numerically coincident eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCluster {
    pub center: C64,
    pub members: Vec<usize>,
    pub geometric_multiplicity: usize,
}

/// Eigenvalues of a real square matrix with one unit-norm left eigenvector
/// per eigenvalue (`vᵢᵀA ≈ λᵢvᵢᵀ`).
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<C64>,
    pub left_eigenvectors: Vec<Vec<C64>>,
    pub residuals: Vec<f64>,
    pub min_pairwise_gap: f64,
    pub clusters: Vec<EigenCluster>,
    pub gap_threshold: f64,
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn geometric_multiplicities(&self) -> Vec<usize> {
        self.clusters
            .iter()
            .map(|c| c.geometric_multiplicity)
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Every pair of eigenvalues is separated by more than the gap threshold.
    pub fn has_distinct_eigenvalues(&self) -> bool {
        self.n() <= 1 || self.min_pairwise_gap > self.gap_threshold
    }
}

fn numeric_failure(operation: &'static str, a: &DenseMatrix) -> Error {
    Error::Numeric {
        operation,
        matrix_hash: a.fingerprint(),
    }
}

/// Eigenvalues only, from the real Schur form.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(a.to_nalgebra(), f64::EPSILON, 10_000)
        .ok_or_else(|| numeric_failure("eigenvalue decomposition", a))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

pub fn min_pairwise_gap(values: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Smallest pairwise eigenvalue distance of `a` (infinite for n ≤ 1).
pub fn eigen_gap(a: &DenseMatrix) -> Result<f64> {
    Ok(min_pairwise_gap(&eigenvalues(a)?))
}

pub fn left_eigensystem(a: &DenseMatrix) -> Result<EigenSystem> {
    left_eigensystem_with(a, &EigenOptions::default())
}

pub fn left_eigensystem_with(a: &DenseMatrix, opts: &EigenOptions) -> Result<EigenSystem> {
    let lambdas = eigenvalues(a)?;
    let n = lambdas.len();
    let at: DMatrix<C64> = a.to_nalgebra().transpose().map(|x| C64::new(x, 0.0));
    let scale = a.data().iter().fold(1.0_f64, |m, x| m.max(x.abs())) * n.max(1) as f64;

    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for &lambda in &lambdas {
        let v = inverse_iteration(&at, lambda, scale)
            .filter(|v| residual(&at, lambda, v) <= 1e-10 * scale)
            .map_or_else(|| smallest_singular_vector(&at, lambda), Ok)
            .map_err(|_| numeric_failure("left eigenvector", a))?;
        residuals.push(residual(&at, lambda, &v));
        vectors.push(normalize_phase(v).iter().copied().collect());
    }

    let clusters = cluster(a, &lambdas, opts)?;
    Ok(EigenSystem {
        min_pairwise_gap: min_pairwise_gap(&lambdas),
        eigenvalues: lambdas,
        left_eigenvectors: vectors,
        residuals,
        clusters,
        gap_threshold: opts.gap_threshold,
    })
}

fn shifted(at: &DMatrix<C64>, mu: C64) -> DMatrix<C64> {
    let mut m = at.clone();
    for i in 0..m.nrows() {
        m[(i, i)] -= mu;
    }
    m
}

fn residual(at: &DMatrix<C64>, lambda: C64, v: &DVector<C64>) -> f64 {
    (at * v - v * lambda).norm()
}

fn inverse_iteration(at: &DMatrix<C64>, lambda: C64, scale: f64) -> Option<DVector<C64>> {
    let n = at.nrows();
    let mu = lambda + C64::new(1e-13 * scale, 0.0);
    let lu = shifted(at, mu).lu();
    let mut v = DVector::from_fn(n, |i, _| C64::new(1.0 + 0.37 * ((i + 1) as f64).sin(), 0.0));
    v /= C64::new(v.norm(), 0.0);
    for _ in 0..3 {
        let w = lu.solve(&v)?;
        let norm = w.norm();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        v = w / C64::new(norm, 0.0);
    }
    Some(v)
}

fn smallest_singular_vector(
    at: &DMatrix<C64>,
    lambda: C64,
) -> std::result::Result<DVector<C64>, ()> {
    let svd = shifted(at, lambda)
        .try_svd(false, true, f64::EPSILON, 0)
        .ok_or(())?;
    let v_t = svd.v_t.ok_or(())?;
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(())?;
    Ok(v_t.row(k).transpose().map(|z| z.conj()))
}

/// Unit norm, largest-modulus entry real and positive.
fn normalize_phase(v: DVector<C64>) -> DVector<C64> {
    let (_, pivot) = v
        .iter()
        .enumerate()
        .fold((0, C64::new(0.0, 0.0)), |(bi, bz), (i, &z)| {
            if z.norm() > bz.norm() {
                (i, z)
            } else {
                (bi, bz)
            }
        });
    let phase = if pivot.norm() > 0.0 {
        pivot.conj() / C64::new(pivot.norm(), 0.0)
    } else {
        C64::new(1.0, 0.0)
    };
    let w = v * phase;
    let norm = w.norm();
    w / C64::new(norm, 0.0)
}

fn cluster(a: &DenseMatrix, lambdas: &[C64], opts: &EigenOptions) -> Result<Vec<EigenCluster>> {
    let n = lambdas.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (lambdas[i] - lambdas[j]).norm() < opts.gap_threshold {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }

    let am: DMatrix<C64> = a.to_nalgebra().map(|x| C64::new(x, 0.0));
    let sigma_max = super::numeric::singular_values(a)?
        .into_iter()
        .fold(0.0, f64::max);
    let tol = opts.multiplicity_tol * sigma_max.max(1.0);

    groups
        .into_iter()
        .map(|members| {
            let center = members.iter().map(|&i| lambdas[i]).sum::<C64>()
                / C64::new(members.len() as f64, 0.0);
            let geometric = if members.len() == 1 {
                1
            } else {
                let sv = shifted(&am, center)
                    .try_svd(false, false, f64::EPSILON, 0)
                    .ok_or_else(|| numeric_failure("eigenspace dimension", a))?
                    .singular_values;
                sv.iter()
                    .filter(|&&s| s <= tol)
                    .count()
                    .clamp(1, members.len())
            };
            Ok(EigenCluster {
                center,
                members,
                geometric_multiplicity: geometric,
            })
        })
        .collect()
}

/// `B` can be a single column only if every eigenspace is one-dimensional.
pub fn is_vector_controllable_possible(eig: &EigenSystem) -> bool {
    eig.clusters.iter().all(|c| c.geometric_multiplicity == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(vals: &[C64]) -> Vec<f64> {
        let mut v: Vec<f64> = vals.iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn diagonal_matrix_has_basis_left_eigenvectors() {
        let a = DenseMatrix::from_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let eig = left_eigensystem(&a).unwrap();
        assert_eq!(sorted_re(&eig.eigenvalues), vec![1.0, 2.0, 3.0]);
        assert!((eig.min_pairwise_gap - 1.0).abs() < 1e-12);
        for (lambda, v) in eig.eigenvalues.iter().zip(&eig.left_eigenvectors) {
            let idx = (lambda.re.round() as usize) - 1;
            for (k, z) in v.iter().enumerate() {
                let want = if k == idx { 1.0 } else { 0.0 };
                assert!((z - C64::new(want, 0.0)).norm() < 1e-10);
            }
        }
        assert!(is_vector_controllable_possible(&eig));
    }

    #[test]
    fn identity_has_two_dimensional_eigenspace() {
        let eig = left_eigensystem(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(eig.min_pairwise_gap, 0.0);
        assert_eq!(eig.geometric_multiplicities(), vec![2]);
        assert!(!is_vector_controllable_possible(&eig));
        assert!(!eig.has_distinct_eigenvalues());
    }

    #[test]
    fn jordan_block_is_one_dimensional() {
        let a = DenseMatrix::from_rows(&[vec![3.0, 1.0], vec![0.0, 3.0]]).unwrap();
        let eig = left_eigensystem(&a).unwrap();
        assert_eq!(eig.geometric_multiplicities(), vec![1]);
        assert!(is_vector_controllable_possible(&eig));
    }

    #[test]
    fn rotation_has_complex_pair() {
        let a = DenseMatrix::from_rows(&[vec![0.0, -2.0], vec![2.0, 0.0]]).unwrap();
        let eig = left_eigensystem(&a).unwrap();
        let mut ims: Vec<f64> = eig.eigenvalues.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 2.0).abs() < 1e-12 && (ims[1] - 2.0).abs() < 1e-12);
        assert!(eig.max_residual() < 1e-10);
        for v in &eig.left_eigenvectors {
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn non_square_rejected() {
        let a = DenseMatrix::zeros(2, 3);
        assert!(matches!(
            left_eigensystem(&a),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
