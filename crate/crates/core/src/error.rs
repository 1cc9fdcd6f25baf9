use std::io;

use thiserror::Error;

use crate::ingest::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    /// A binary file (sketch, dictionary, encoded triples) could not be decoded.
    #[error("malformed {what} at byte offset {offset}: {reason}")]
    Format {
        what: &'static str,
        offset: u64,
        reason: String,
    },

    #[error("unknown ID {0} in encoded data")]
    UnknownId(u64),

    #[error("term missing from dictionary: {0}")]
    MissingTerm(String),

    #[error("predicate does not occur in the encoded data: {0}")]
    AbsentPredicate(String),

    /// An invariant the pipeline itself must guarantee was broken.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn format(what: &'static str, offset: u64, reason: impl Into<String>) -> Self {
        Error::Format {
            what,
            offset,
            reason: reason.into(),
        }
    }
}
