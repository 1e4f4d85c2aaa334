use thiserror::Error;

/// Errors raised by the calculus, the searches and the splitting engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group parameters m={m}, s={s}: both must be at least 2")]
    InvalidParams { m: usize, s: usize },

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource cap exceeded: {resource} would need {requested}, cap is {limit}{detail}")]
    ResourceCap {
        resource: &'static str,
        requested: usize,
        limit: usize,
        detail: String,
    },

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn cap(resource: &'static str, requested: usize, limit: usize) -> Self {
        Error::ResourceCap {
            resource,
            requested,
            limit,
            detail: String::new(),
        }
    }

    /// True for errors caused by a cap or budget rather than by bad input or a failed check.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceCap { .. } | Error::BudgetExhausted(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
