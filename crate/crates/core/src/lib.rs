//! Sparse actuator selection for linear time-invariant systems `ẋ = Ax + Bu`.
//!
//! The crate finds inputs `b` (or diagonal `B`) with few nonzero entries that
//! render a system controllable. It contains:
//!
//! * [`linalg`]: dense and exact-rational matrices, exact and numeric rank,
//!   left eigensystems, the PBH test and the Jordan covered-count rank.
//! * [`greedy`]: the randomized, deterministic and diagonal greedy
//!   rank-maximization solvers.
//! * [`reductions`]: compilation of hitting-set instances into
//!   controllability instances, including the symmetric variant.
//! * [`oracles`]: brute-force ground truth for small instances.
//! * [`experiments`]: the Erdős–Rényi random digraph harness.
//! * [`instances`]: seeded random instance generators.

pub mod error;
pub mod experiments;
pub mod greedy;
pub mod instances;
pub mod linalg;
pub mod oracles;
pub mod reductions;

pub use error::{Error, Result};
pub use greedy::{
    deterministic_greedy_vector, greedy_diagonal, randomized_greedy_vector, SolveResult, TraceStep,
};
pub use linalg::{
    controllability_matrix, covered_count, is_vector_controllable_possible, left_eigensystem,
    pbh_controllability_rank, pbh_support_test, rank_exact, rank_numeric, DenseMatrix, EigenSystem,
    JordanSpec, RankBackend, RankEvaluator, RankOptions, RankTolerance, RationalMatrix,
};
pub use oracles::{
    brute_force_hitting_set, brute_force_min_diagonal_support, brute_force_min_vector_support,
    kalman_test, OracleResult,
};
pub use reductions::{
    build_reduction, build_symmetric_extension, build_v, incidence_matrix, orthogonal_extension,
    v_inverse_closed_form, HittingSetInstance, ReductionOutput, SymmetricExtensionOutput,
};
