use thiserror::Error;

/// Errors raised across the scheduling pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// An instance document is malformed.
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },

    /// Exhaustive search would visit more schedules than allowed.
    #[error("enumeration budget exceeded: {required} schedules > budget {budget}; use the relaxation instead")]
    BudgetExceeded { required: f64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
