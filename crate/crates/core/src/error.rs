use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid hitting-set instance (set {set_index}): {reason}")]
    InvalidInstance { set_index: usize, reason: String },

    #[error("backend precondition violated: {0}")]
    BackendPrecondition(String),

    #[error("enumeration guard exceeded: size {size} > limit {limit}")]
    GuardExceeded { size: usize, limit: usize },

    #[error("numeric backend failure in {operation} (matrix hash {matrix_hash:016x})")]
    Numeric {
        operation: &'static str,
        matrix_hash: u64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
