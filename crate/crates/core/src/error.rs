use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected}, got {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("width {0} exceeds the 64-bit limit")]
    WidthTooLarge(usize),

    /// Invalid parameters supplied by the caller (bad N for a case, bad J, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// An operation was called outside of the domain where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A mathematical statement that should hold was found to fail.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("the symplectic form is degenerate (radical of dimension {radical_dim})")]
    DegenerateForm { radical_dim: usize },

    #[error("interval {0} occurs more than once in a family")]
    DuplicateInterval(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("coefficient does not fit in 64 bits at ({row}, {col})")]
    CoefficientOverflow { row: usize, col: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
