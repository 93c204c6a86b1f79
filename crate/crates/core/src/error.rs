use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input is valid but lies outside the configurations this crate models.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// An operation precondition (e.g. rational singularity) does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid family parameters: {0}")]
    InvalidParams(String),

    /// A value no longer fits the machine integers used for divisor arithmetic.
    #[error("integer overflow: {0}")]
    Overflow(String),
}

impl Error {
    /// Stable machine-readable code, used in JSON reports and CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain_error",
            Error::Unsupported(_) => "unsupported_configuration",
            Error::Precondition(_) => "precondition_failed",
            Error::Parse { .. } => "parse_error",
            Error::InvalidParams(_) => "invalid_params",
            Error::Overflow(_) => "overflow",
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
