use thiserror::Error;

/// Failure classes shared by every module.
///
/// The CLI maps these onto exit codes: `Validation` -> 2, `Invariant` -> 3,
/// `Unsupported` -> 4.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
