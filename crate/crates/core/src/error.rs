use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input supplied by the caller.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A tuple entry violates `a_j >= 2`.
    #[error("invalid exponent tuple: entry {index} is {value}, every entry must be at least 2")]
    EntryTooSmall { index: usize, value: String },

    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An enumeration would exceed one of the configured caps.
    #[error("capacity exceeded: {what} needs {needed}, cap is {cap}")]
    Capacity {
        what: &'static str,
        needed: String,
        cap: String,
    },

    /// Two independent computation routes disagreed. Always a bug.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    MalformedLine {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    /// True for errors caused by what the caller asked for, as opposed to
    /// resource limits or internal failures.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::EntryTooSmall { .. } | Error::Precondition(_)
        )
    }

    pub(crate) fn capacity(what: &'static str, needed: impl ToString, cap: impl ToString) -> Self {
        Error::Capacity {
            what,
            needed: needed.to_string(),
            cap: cap.to_string(),
        }
    }
}
