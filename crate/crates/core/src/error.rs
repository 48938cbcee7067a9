use thiserror::Error;

/// Errors raised across the toolkit.
///
/// The variants map onto the CLI exit-code contract: `Capacity` is a
/// capacity failure, everything else is a usage/parameter failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AmdError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity error: {what} needs {required} operations, budget is {budget}")]
    Capacity {
        what: String,
        required: u128,
        budget: u128,
    },
    #[error("attack inapplicable: {0}")]
    Inapplicable(String),
    #[error("insufficient shares: have {have}, need {need}")]
    InsufficientShares { have: usize, need: usize },
    #[error("query budget exceeded: {used} queries against a budget of {budget}")]
    BudgetViolation { used: u64, budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, AmdError>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(AmdError::Usage(msg.into()))
}
