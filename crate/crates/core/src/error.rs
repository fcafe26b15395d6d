use thiserror::Error;

/// Errors raised by the lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration budget exceeded: {needed} evaluations requested, limit is {limit}")]
    BudgetExceeded { needed: f64, limit: f64 },

    #[error("horizon {horizon} is too small: need at least {needed}")]
    HorizonTooSmall { horizon: usize, needed: usize },

    #[error("denominator vanished: {0}")]
    ZeroDenominator(String),

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error("no bundled preset for {0}")]
    NoPreset(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::InvalidArgument(msg.into()))
}
