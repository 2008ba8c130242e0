use thiserror::Error;

/// Errors raised by the estimators, densities and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Exact evaluation is only available for univariate (p = 1) families.
    #[error("unsupported dimension p = {0}; exact evaluation requires p = 1")]
    UnsupportedDimension(usize),

    #[error("invalid summary: {0}")]
    InvalidSummary(String),

    #[error("invalid restriction: {0}")]
    InvalidRestriction(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// Quadrature failed to converge or a density failed its normalization check.
    #[error("numeric integrity: {0}")]
    NumericIntegrity(String),

    /// Rejection sampling acceptance rate is too small to be usable.
    #[error("infeasible sampling: {0}")]
    Infeasible(String),

    #[error("input error: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
