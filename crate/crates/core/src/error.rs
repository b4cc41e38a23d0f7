use thiserror::Error;

/// Errors raised by the toolkit.
///
/// `Parse` carries the 1-based line number of the offending TGC line; every
/// other variant is a domain error, meaning the arguments violate the
/// operation's preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("collection has no colors")]
    EmptyCollection,

    #[error("vertex count mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected {expected} colors, found {found}")]
    ColorCount { expected: usize, found: usize },

    #[error("{what} exceeds the limit of {limit}")]
    TooLarge { what: &'static str, limit: usize },

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("{0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn pre(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
