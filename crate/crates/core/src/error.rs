use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have dimension at least 1")]
    Empty,

    #[error("matrix is not Hermitian: max |m[i][j] - conj(m[j][i])| = {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e} below floor {floor:e}")]
    NotPsd { min_eigenvalue: f64, floor: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("zero vector: a ray needs a non-zero direction")]
    ZeroVector,

    #[error("invalid tolerance: rel = {rel:e}, abs = {abs:e} (both must be positive)")]
    InvalidTolerance { rel: f64, abs: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Precondition failures are meaningful outcomes (for example asking for an
    /// infimum witness on a pair whose infimum exists), as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Precondition(_)
                | Error::NotPsd { .. }
                | Error::DimensionMismatch { .. }
                | Error::ZeroVector
        )
    }
}
