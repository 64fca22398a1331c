use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::{dot, rank_exact, RationalMatrix};
use crate::error::{Error, Result};

/// Exact Jordan structure `A = T·J·T⁻¹` where each eigenvalue owns a single
/// block (one-dimensional eigenspaces). `J` carries ones on the
/// superdiagonal inside each block.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanSpec {
    block_eigenvalues: Vec<BigRational>,
    block_sizes: Vec<usize>,
    t_inverse: RationalMatrix,
}

impl JordanSpec {
    pub fn new(
        block_eigenvalues: Vec<BigRational>,
        block_sizes: Vec<usize>,
        t_inverse: RationalMatrix,
    ) -> Result<Self> {
        if block_eigenvalues.len() != block_sizes.len() {
            return Err(Error::InvalidInput(format!(
                "{} eigenvalues for {} blocks",
                block_eigenvalues.len(),
                block_sizes.len()
            )));
        }
        if block_sizes.contains(&0) {
            return Err(Error::InvalidInput("empty Jordan block".into()));
        }
        let n: usize = block_sizes.iter().sum();
        if !t_inverse.is_square() || t_inverse.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "block sizes sum to {n} but T⁻¹ is {}x{}",
                t_inverse.rows(),
                t_inverse.cols()
            )));
        }
        for i in 0..block_eigenvalues.len() {
            for j in i + 1..block_eigenvalues.len() {
                if block_eigenvalues[i] == block_eigenvalues[j] {
                    return Err(Error::InvalidInput(format!(
                        "blocks {i} and {j} share eigenvalue {}",
                        block_eigenvalues[i]
                    )));
                }
            }
        }
        if rank_exact(&t_inverse) != n {
            return Err(Error::InvalidInput("rows of T⁻¹ are not a basis".into()));
        }
        Ok(Self {
            block_eigenvalues,
            block_sizes,
            t_inverse,
        })
    }

    pub fn n(&self) -> usize {
        self.t_inverse.rows()
    }

    pub fn block_eigenvalues(&self) -> &[BigRational] {
        &self.block_eigenvalues
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn t_inverse(&self) -> &RationalMatrix {
        &self.t_inverse
    }

    fn offset(&self, block: usize) -> usize {
        self.block_sizes[..block].iter().sum()
    }

    /// Row `t(block, pos)` of `T⁻¹`, both indices 0-based.
    pub fn t_row(&self, block: usize, pos: usize) -> &[BigRational] {
        self.t_inverse.row(self.offset(block) + pos)
    }

    pub fn jordan_matrix(&self) -> RationalMatrix {
        let n = self.n();
        let mut j = RationalMatrix::zeros(n, n);
        for (block, (lambda, &d)) in self
            .block_eigenvalues
            .iter()
            .zip(&self.block_sizes)
            .enumerate()
        {
            let off = self.offset(block);
            for k in 0..d {
                j.set(off + k, off + k, lambda.clone());
                if k + 1 < d {
                    j.set(off + k, off + k + 1, BigRational::one());
                }
            }
        }
        j
    }

    /// `A = T·J·T⁻¹`.
    pub fn system_matrix(&self) -> Result<RationalMatrix> {
        let t = self
            .t_inverse
            .inverse()?
            .ok_or_else(|| Error::Internal("T⁻¹ lost invertibility".into()))?;
        t.matmul(&self.jordan_matrix())?.matmul(&self.t_inverse)
    }
}

/// Number of covered `t(i, j)`: for each block, the last position whose row
/// has nonzero inner product with `b`. Equals `rank C(A, b)`.
pub fn covered_count(jordan: &JordanSpec, b: &[BigRational]) -> Result<usize> {
    if b.len() != jordan.n() {
        return Err(Error::DimensionMismatch(format!(
            "b has length {}, system has dimension {}",
            b.len(),
            jordan.n()
        )));
    }
    Ok((0..jordan.block_sizes.len())
        .map(|i| {
            (0..jordan.block_sizes[i])
                .rev()
                .find(|&j| !dot(jordan.t_row(i, j), b).is_zero())
                .map_or(0, |j| j + 1)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    fn single_block() -> JordanSpec {
        JordanSpec::new(vec![int(5)], vec![2], RationalMatrix::identity(2)).unwrap()
    }

    #[test]
    fn last_position_covers_whole_block() {
        assert_eq!(
            covered_count(&single_block(), &[int(0), int(1)]).unwrap(),
            2
        );
    }

    #[test]
    fn first_position_covers_only_itself() {
        assert_eq!(
            covered_count(&single_block(), &[int(1), int(0)]).unwrap(),
            1
        );
        assert_eq!(
            covered_count(&single_block(), &[int(0), int(0)]).unwrap(),
            0
        );
    }

    #[test]
    fn jordan_matrix_layout() {
        let spec = JordanSpec::new(
            vec![int(2), int(-1)],
            vec![2, 1],
            RationalMatrix::identity(3),
        )
        .unwrap();
        let j =
            RationalMatrix::from_i64_rows(&[vec![2, 1, 0], vec![0, 2, 0], vec![0, 0, -1]]).unwrap();
        assert_eq!(spec.jordan_matrix(), j);
        assert_eq!(spec.system_matrix().unwrap(), j);
    }

    #[test]
    fn invariants_enforced() {
        assert!(JordanSpec::new(
            vec![int(1), int(1)],
            vec![1, 1],
            RationalMatrix::identity(2)
        )
        .is_err());
        assert!(JordanSpec::new(vec![int(1)], vec![3], RationalMatrix::identity(2)).is_err());
        let singular = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(JordanSpec::new(vec![int(1), int(2)], vec![1, 1], singular).is_err());
    }
}
