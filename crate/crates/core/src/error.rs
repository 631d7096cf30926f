//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violated an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A data file had a bad header (magic, version, or column declaration).
    #[error("malformed header: {0}")]
    MalformedHeader(String),

    /// A data file had a bad record; `row` is the zero-based sample index.
    #[error("malformed data at row {row}: {msg}")]
    MalformedData { row: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn at_row(row: usize, msg: impl Into<String>) -> Self {
        Error::MalformedData { row, msg: msg.into() }
    }
}
