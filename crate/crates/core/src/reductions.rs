//! Hitting-set instances compiled into controllability instances.
//!
//! For a collection of `p` subsets of `{1..m}` with incidence matrix `C`, the
//! matrix
//!
//! ```text
//!     ⎡ 2·I_m   0         1 ⎤
//! V = ⎢ C       (m+1)·I_p 0 ⎥
//!     ⎣ 0       0         1 ⎦
//! ```
//!
//! is strictly diagonally dominant by rows, and `A = V⁻¹·diag(1..m+p+1)·V`
//! has the rows of `V` as left eigenvectors. The sparsest controlling input
//! of `A` has exactly one more nonzero than the smallest hitting set.
//!
//! All arithmetic here is exact.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational::{dot, int, ratio};
use crate::linalg::RationalMatrix;

/// Ground set `{1..m}` and `p` nonempty subsets, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingSetInstance {
    pub m: usize,
    pub sets: Vec<Vec<usize>>,
}

impl HittingSetInstance {
    pub fn new(m: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let inst = Self { m, sets };
        inst.validate()?;
        Ok(inst)
    }

    pub fn p(&self) -> usize {
        self.sets.len()
    }

    /// Every set nonempty with elements in `{1..m}`, and every element covered.
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidInstance {
                set_index: 0,
                reason: "ground set is empty".into(),
            });
        }
        if self.sets.is_empty() {
            return Err(Error::InvalidInstance {
                set_index: 0,
                reason: "collection has no sets".into(),
            });
        }
        let mut seen = vec![false; self.m];
        for (i, set) in self.sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidInstance {
                    set_index: i + 1,
                    reason: "set is empty".into(),
                });
            }
            for &e in set {
                if e == 0 || e > self.m {
                    return Err(Error::InvalidInstance {
                        set_index: i + 1,
                        reason: format!("element {e} outside 1..={}", self.m),
                    });
                }
                seen[e - 1] = true;
            }
        }
        if let Some(e) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidInstance {
                set_index: 0,
                reason: format!("element {} appears in no set", e + 1),
            });
        }
        Ok(())
    }

    /// `true` if `hits` (1-based elements) meets every set.
    pub fn is_hitting_set(&self, hits: &[usize]) -> bool {
        self.sets.iter().all(|s| s.iter().any(|e| hits.contains(e)))
    }
}

/// `p × m` 0/1 matrix; row `i` is the indicator of set `i`.
pub fn incidence_matrix(inst: &HittingSetInstance) -> Result<RationalMatrix> {
    inst.validate()?;
    let mut c = RationalMatrix::zeros(inst.p(), inst.m);
    for (i, set) in inst.sets.iter().enumerate() {
        for &e in set {
            c.set(i, e - 1, BigRational::one());
        }
    }
    Ok(c)
}

/// The `(m+p+1)²` left-eigenvector matrix.
pub fn build_v(inst: &HittingSetInstance) -> Result<RationalMatrix> {
    let c = incidence_matrix(inst)?;
    let (m, p) = (inst.m, inst.p());
    let n = m + p + 1;
    let mut v = RationalMatrix::zeros(n, n);
    for i in 0..m {
        v.set(i, i, int(2));
        v.set(i, n - 1, int(1));
    }
    let diag = int(m as i64 + 1);
    for i in 0..p {
        for j in 0..m {
            v.set(m + i, j, c.get(i, j).clone());
        }
        v.set(m + i, m + i, diag.clone());
    }
    v.set(n - 1, n - 1, int(1));
    Ok(v)
}

/// Which coordinates of the reduction correspond to elements, sets and the
/// anchor. All indices 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMap {
    pub elements: Vec<usize>,
    pub sets: Vec<usize>,
    pub anchor: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionOutput {
    pub v: RationalMatrix,
    pub a: RationalMatrix,
    pub eigenvalues: Vec<i64>,
    pub index_map: IndexMap,
}

pub fn strictly_row_dominant(m: &RationalMatrix) -> bool {
    (0..m.rows()).all(|i| {
        let off: BigRational = (0..m.cols())
            .filter(|&j| j != i)
            .map(|j| m.get(i, j).abs())
            .sum();
        m.get(i, i).abs() > off
    })
}

fn diag_1_to(n: usize) -> RationalMatrix {
    RationalMatrix::from_diagonal(&(1..=n as i64).map(int).collect::<Vec<_>>())
}

/// `A = V⁻¹·diag(1..n)·V`, checked against `V·A = diag(1..n)·V`.
pub fn build_reduction(inst: &HittingSetInstance) -> Result<ReductionOutput> {
    let v = build_v(inst)?;
    let n = v.rows();
    if !strictly_row_dominant(&v) {
        return Err(Error::Internal(
            "V is not strictly diagonally dominant".into(),
        ));
    }
    let v_inv = v
        .inverse()?
        .ok_or_else(|| Error::Internal("V is singular".into()))?;
    let d = diag_1_to(n);
    let a = v_inv.matmul(&d)?.matmul(&v)?;
    if v.matmul(&a)? != d.matmul(&v)? {
        return Err(Error::Internal(
            "rows of V are not left eigenvectors of A".into(),
        ));
    }
    let (m, p) = (inst.m, inst.p());
    Ok(ReductionOutput {
        v,
        a,
        eigenvalues: (1..=n as i64).collect(),
        index_map: IndexMap {
            elements: (0..m).collect(),
            sets: (m..m + p).collect(),
            anchor: m + p,
        },
    })
}

/// Closed-form `V⁻¹`: it shares the sparsity pattern of `V` except for a
/// dense last column.
pub fn v_inverse_closed_form(inst: &HittingSetInstance) -> Result<RationalMatrix> {
    inst.validate()?;
    let (m, p) = (inst.m, inst.p());
    let n = m + p + 1;
    let last = n - 1;
    let mut w = RationalMatrix::zeros(n, n);
    for i in 0..m {
        w.set(i, i, ratio(1, 2));
        w.set(i, last, ratio(-1, 2));
    }
    let m1 = m as i64 + 1;
    for (k, set) in inst.sets.iter().enumerate() {
        let i = m + k;
        w.set(i, i, ratio(1, m1));
        let mut distinct = set.clone();
        distinct.sort_unstable();
        distinct.dedup();
        for &e in &distinct {
            w.set(i, e - 1, ratio(-1, 2 * m1));
        }
        w.set(i, last, ratio(distinct.len() as i64, 2 * m1));
    }
    w.set(last, last, int(1));
    Ok(w)
}

fn norm_sq(v: &[BigRational]) -> BigRational {
    dot(v, v)
}

fn axpy(y: &mut [BigRational], alpha: &BigRational, x: &[BigRational]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += alpha * xi;
        }
    }
}

/// Completes `k` pairwise-orthogonal vectors with zero first coordinate to an
/// orthogonal basis whose `n - k` new vectors all have nonzero first
/// coordinate.
///
/// Starts from `e₁`, finishes the basis with Gram–Schmidt over the standard
/// basis, then repairs each new vector `v_l` with zero first entry by
/// `v_l ← c·v_l + w`, `w ← w - v_l` where `w` is the vector seeded from `e₁`
/// and `c = ‖w‖²/‖v_l‖²`.
pub fn orthogonal_extension(vs: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let k = vs.len();
    let n = vs.first().map_or(0, Vec::len);
    if k == 0 {
        return Err(Error::InvalidInput("need at least one vector".into()));
    }
    if vs.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch(
            "vectors of different lengths".into(),
        ));
    }
    if k >= n {
        return Err(Error::InvalidInput(format!(
            "{k} vectors already fill dimension {n}"
        )));
    }
    for (i, v) in vs.iter().enumerate() {
        if !v[0].is_zero() {
            return Err(Error::InvalidInput(format!(
                "vector {i} is not orthogonal to e₁"
            )));
        }
        if v.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput(format!("vector {i} is zero")));
        }
        for (j, u) in vs.iter().enumerate().skip(i + 1) {
            if !dot(v, u).is_zero() {
                return Err(Error::InvalidInput(format!(
                    "vectors {i} and {j} are not orthogonal"
                )));
            }
        }
    }

    let unit = |i: usize| {
        let mut e = vec![BigRational::zero(); n];
        e[i] = BigRational::one();
        e
    };
    let mut basis: Vec<Vec<BigRational>> = vs.to_vec();
    basis.push(unit(0));
    for i in 1..n {
        if basis.len() == n {
            break;
        }
        let mut cand = unit(i);
        for u in &basis {
            let coef = -dot(&cand, u) / norm_sq(u);
            axpy(&mut cand, &coef, u);
        }
        if cand.iter().any(|x| !x.is_zero()) {
            basis.push(cand);
        }
    }
    if basis.len() != n {
        return Err(Error::Internal(
            "Gram-Schmidt did not complete the basis".into(),
        ));
    }

    let mut added = basis.split_off(k);
    let (w, rest) = added.split_first_mut().expect("k < n");
    for vl in rest.iter_mut() {
        if !vl[0].is_zero() {
            continue;
        }
        let c = norm_sq(w) / norm_sq(vl);
        let old = vl.clone();
        for (x, wi) in vl.iter_mut().zip(w.iter()) {
            *x = &c * &*x + wi;
        }
        for (wi, o) in w.iter_mut().zip(&old) {
            *wi -= o;
        }
    }
    Ok(added)
}

/// Pair column `{i, j}` (0-based, `i < j`) of the symmetric extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairColumn {
    pub column: usize,
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricExtensionOutput {
    pub v_hat: RationalMatrix,
    pub a_hat: RationalMatrix,
    pub r: usize,
    pub column_index_map: Vec<PairColumn>,
    pub final_column: usize,
}

fn binom2(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

/// Symmetric variant of the reduction.
///
/// `V` (size `N = m+p+1`) is widened by `C(N,2)` pair columns, ordered
/// lexicographically, plus one final column. For rows `i < j` of `V` with
/// nonzero inner product, row `i` gets `1` and row `j` gets `-⟨Vᵢ, Vⱼ⟩` in
/// column `{i, j}`, which makes the first `N` rows orthogonal. The remaining
/// rows come from [`orthogonal_extension`] with the final coordinate playing
/// the role of the first, so each has a nonzero final entry. Then
/// `Â = V̂⁻¹·diag(1..r)·V̂`, which is symmetric because the rows of `V̂` are
/// orthogonal.
pub fn build_symmetric_extension(inst: &HittingSetInstance) -> Result<SymmetricExtensionOutput> {
    let v = build_v(inst)?;
    let big_n = v.rows();
    let r = big_n + binom2(big_n) + 1;
    let last = r - 1;

    let pairs: Vec<(usize, usize)> = (0..big_n).tuple_combinations().collect();
    let column_index_map: Vec<PairColumn> = pairs
        .iter()
        .enumerate()
        .map(|(k, &pair)| PairColumn {
            column: big_n + k,
            pair,
        })
        .collect();

    let mut top: Vec<Vec<BigRational>> = (0..big_n)
        .map(|i| {
            let mut row = v.row(i).to_vec();
            row.resize(r, BigRational::zero());
            row
        })
        .collect();
    for pc in &column_index_map {
        let (i, j) = pc.pair;
        let ip = dot(v.row(i), v.row(j));
        if !ip.is_zero() {
            top[i][pc.column] = BigRational::one();
            top[j][pc.column] = -ip;
        }
    }

    // Rotate so the final coordinate comes first, extend, rotate back.
    let rotate_in = |row: &[BigRational]| {
        let mut out = Vec::with_capacity(r);
        out.push(row[last].clone());
        out.extend_from_slice(&row[..last]);
        out
    };
    let rotate_out = |row: Vec<BigRational>| {
        let mut out = row[1..].to_vec();
        out.push(row[0].clone());
        out
    };
    let rotated: Vec<Vec<BigRational>> = top.iter().map(|row| rotate_in(row)).collect();
    let extra = orthogonal_extension(&rotated)?;
    let mut rows = top;
    rows.extend(extra.into_iter().map(rotate_out));
    let v_hat = RationalMatrix::from_rows(rows)?;

    for i in 0..r {
        for j in i + 1..r {
            if !dot(v_hat.row(i), v_hat.row(j)).is_zero() {
                return Err(Error::Internal(format!(
                    "rows {i} and {j} of V̂ are not orthogonal"
                )));
            }
        }
    }

    // Orthogonal rows: V̂⁻¹ = V̂ᵀ·Δ⁻¹ with Δ = diag(‖row‖²).
    let inv_norms: Vec<BigRational> = (0..r)
        .map(|i| BigRational::one() / norm_sq(v_hat.row(i)))
        .collect();
    let mut scaled = v_hat.clone();
    for (i, inv) in inv_norms.iter().enumerate() {
        let f = inv * BigRational::from_integer(BigInt::from(i as i64 + 1));
        for j in 0..r {
            let x = scaled.get(i, j) * &f;
            scaled.set(i, j, x);
        }
    }
    let a_hat = v_hat.transpose().matmul(&scaled)?;

    if !a_hat.is_symmetric() {
        return Err(Error::Internal("Â is not symmetric".into()));
    }
    if v_hat.matmul(&a_hat)? != diag_1_to(r).matmul(&v_hat)? {
        return Err(Error::Internal(
            "rows of V̂ are not left eigenvectors of Â".into(),
        ));
    }
    Ok(SymmetricExtensionOutput {
        v_hat,
        a_hat,
        r,
        column_index_map,
        final_column: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_exact;

    fn example_instance() -> HittingSetInstance {
        HittingSetInstance::new(3, vec![vec![1, 2], vec![2, 3], vec![1, 3], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn incidence_examples() {
        let c = incidence_matrix(&example_instance()).unwrap();
        let want = RationalMatrix::from_i64_rows(&[
            vec![1, 1, 0],
            vec![0, 1, 1],
            vec![1, 0, 1],
            vec![1, 1, 1],
        ])
        .unwrap();
        assert_eq!(c, want);
        let one = HittingSetInstance::new(1, vec![vec![1]]).unwrap();
        assert_eq!(incidence_matrix(&one).unwrap(), RationalMatrix::identity(1));
        let two = HittingSetInstance::new(2, vec![vec![1], vec![2]]).unwrap();
        assert_eq!(incidence_matrix(&two).unwrap(), RationalMatrix::identity(2));
    }

    #[test]
    fn instance_validation_names_the_set() {
        let err = HittingSetInstance::new(2, vec![vec![1, 2], vec![]]).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { set_index: 2, .. }));
        let err = HittingSetInstance::new(2, vec![vec![1, 3]]).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { set_index: 1, .. }));
        assert!(HittingSetInstance::new(3, vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn v_for_single_element() {
        let inst = HittingSetInstance::new(1, vec![vec![1]]).unwrap();
        let v = build_v(&inst).unwrap();
        let want =
            RationalMatrix::from_i64_rows(&[vec![2, 0, 1], vec![1, 2, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(v, want);
        assert!(strictly_row_dominant(&v));
        assert_eq!(rank_exact(&v), 3);
    }

    #[test]
    fn reduction_for_single_element() {
        let inst = HittingSetInstance::new(1, vec![vec![1]]).unwrap();
        let red = build_reduction(&inst).unwrap();
        let d =
            RationalMatrix::from_i64_rows(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]).unwrap();
        assert_eq!(red.v.matmul(&red.a).unwrap(), d.matmul(&red.v).unwrap());
        assert_eq!(red.index_map.anchor, 2);
    }

    #[test]
    fn closed_form_inverse_matches_on_example_instance() {
        let inst = example_instance();
        let w = v_inverse_closed_form(&inst).unwrap();
        assert_eq!(w.get(0, 0), &ratio(1, 2));
        assert_eq!(w.get(0, 7), &ratio(-1, 2));
        assert_eq!(w.get(3, 7), &ratio(1, 4));
        let inv = build_v(&inst).unwrap().inverse().unwrap().unwrap();
        assert_eq!(w, inv);
    }

    #[test]
    fn extension_two_dims() {
        let out = orthogonal_extension(&[vec![int(0), int(1)]]).unwrap();
        assert_eq!(out.len(), 1);
        assert!(!out[0][0].is_zero());
        assert!(dot(&out[0], &[int(0), int(1)]).is_zero());
    }

    fn check_extension(input: Vec<Vec<BigRational>>) {
        let n = input[0].len();
        let out = orthogonal_extension(&input).unwrap();
        assert_eq!(out.len(), n - input.len());
        assert!(out.iter().all(|v| !v[0].is_zero()));
        let all: Vec<_> = input.iter().chain(&out).collect();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert!(dot(all[i], all[j]).is_zero(), "{i} vs {j}");
            }
        }
    }

    #[test]
    fn extension_postconditions_exact() {
        check_extension(vec![vec![int(0), int(1), int(-1)]]);
        check_extension(vec![
            vec![int(0), int(1), int(1), int(0)],
            vec![int(0), int(1), int(-1), int(0)],
        ]);
        check_extension(vec![vec![int(0), ratio(1, 3), int(2), int(0), int(-5)]]);
    }

    #[test]
    fn extension_rejects_bad_input() {
        assert!(orthogonal_extension(&[vec![int(1), int(0)]]).is_err());
        assert!(orthogonal_extension(&[
            vec![int(0), int(1), int(1)],
            vec![int(0), int(1), int(0)]
        ])
        .is_err());
        assert!(orthogonal_extension(&[]).is_err());
        assert!(orthogonal_extension(&[vec![int(0), int(1)], vec![int(0), int(0)]]).is_err());
    }

    #[test]
    fn symmetric_extension_single_element() {
        let inst = HittingSetInstance::new(1, vec![vec![1]]).unwrap();
        let ext = build_symmetric_extension(&inst).unwrap();
        assert_eq!(ext.r, 7);
        assert_eq!(ext.a_hat.rows(), 7);
        assert!(ext.a_hat.is_symmetric());
        let gram = ext.v_hat.matmul(&ext.v_hat.transpose()).unwrap();
        assert!(gram.is_diagonal());
        let v = build_v(&inst).unwrap();
        for i in 0..3 {
            assert_eq!(&ext.v_hat.row(i)[..3], v.row(i));
        }
        assert_eq!(ext.column_index_map[0].pair, (0, 1));
        assert_eq!(ext.column_index_map[2].pair, (1, 2));
        for i in 3..7 {
            assert!(!ext.v_hat.get(i, 6).is_zero());
        }
    }
}
