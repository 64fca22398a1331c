//! Matrix types and the rank and eigen primitives the solvers are built on.

pub mod controllability;
pub mod dense;
pub mod eigen;
pub mod io;
pub mod jordan;
pub mod numeric;
pub mod pbh;
pub mod rational;

pub use controllability::{
    controllability_matrix, controllability_matrix_exact, RankBackend, RankEvaluator, RankOptions,
};
pub use dense::DenseMatrix;
pub use eigen::{
    eigen_gap, eigenvalues, is_vector_controllable_possible, left_eigensystem,
    left_eigensystem_with, EigenCluster, EigenOptions, EigenSystem,
};
pub use io::{read_matrix, MatrixFile};
pub use jordan::{covered_count, JordanSpec};
pub use numeric::{rank_numeric, singular_values, RankTolerance};
pub use pbh::{pbh_controllability_rank, pbh_support_test};
pub use rational::{rank_exact, RationalMatrix};
