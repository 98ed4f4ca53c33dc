use thiserror::Error;

/// Errors produced by the library.
///
/// The variants are grouped by who is at fault: malformed input
/// ([`Error::Structural`], [`Error::Parse`], [`Error::Io`]), a violated
/// operation precondition ([`Error::Precondition`]), or a broken internal
/// invariant ([`Error::Invariant`]).
#[derive(Debug, Error)]
pub enum Error {
    /// The input does not describe a well-formed graph, divisor or fiber.
    #[error("structural error: {0}")]
    Structural(String),

    /// The input is well formed but the requested operation is not defined on it.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A value did not fit the machine integer used to report it.
    #[error("integer overflow: {0}")]
    Overflow(String),

    /// An internal consistency check failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for errors caused by a violated operation precondition.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
