use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("non-finite series term at index {index:?}")]
    NonFiniteTerm { index: Vec<usize> },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("scenario error in `{field}`: {reason}")]
    Scenario { field: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn scenario(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Scenario {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
