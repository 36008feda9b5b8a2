use std::io;

use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// The CLI maps [`Error::Domain`] to exit status 1 and
/// [`Error::Integrity`] to exit status 2.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input: non-prime modulus, out-of-range parameter, malformed grid.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical invariant (Weil bound, realness, quadrature budget,
    /// cache integrity, ...) did not hold.
    #[error("numerical integrity error: {0}")]
    Integrity(String),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    /// Process exit status associated with this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 1,
            Error::Integrity(_) | Error::Io(_) | Error::Json(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
