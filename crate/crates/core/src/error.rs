use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("tensor index {0} out of range (expected 1, 2 or 3)")]
    IndexOutOfRange(usize),

    #[error("expected 9 independent components, got {0}")]
    ComponentCount(usize),

    #[error("matrix is not orthogonal: max |Q^T Q - I| = {0:e}")]
    NotOrthogonal(f64),

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("unknown invariant {0:?}")]
    UnknownInvariant(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("parameter t = {0} is outside the admissible family domain")]
    FamilyDomain(f64),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
