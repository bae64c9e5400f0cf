use thiserror::Error;

/// Errors raised by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m^†| = {0:e})")]
    NotHermitian(f64),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("negative eigenvalue {0:e} below the PSD clip threshold")]
    NegativeEigenvalue(f64),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("measurement is not projective")]
    NotProjective,

    #[error("joint state lacks the system/record block structure (deviation {0:e})")]
    BlockFormViolation(f64),

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("volume must be positive (got {0})")]
    NonPositiveVolume(f64),

    #[error("second law violated: net cycle work {0:e} bits is positive")]
    SecondLawViolation(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
