//! Crate-wide error type.
//!
//! All fallible operations return [`Result`]. Domain errors (parameters
//! outside the mathematical domain of an operation) are kept distinct from
//! range errors (indices or degrees outside a constructed object) and from
//! numerical failures (an iteration that did not converge), so that callers
//! can map them onto exit codes without string matching.

use thiserror::Error;

/// Errors produced by the approximation lab.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the mathematical domain of the operation
    /// (for example a weight exponent `<= -1`, or `|x| = 1` where a kernel
    /// has a singular prefactor).
    #[error("domain error: {0}")]
    Domain(String),

    /// An index, degree, or size is outside the range supported by the
    /// object it is applied to.
    #[error("range error: {0}")]
    Range(String),

    /// The symmetric tridiagonal eigensolver exceeded its iteration budget.
    #[error("eigensolver did not converge: {0}")]
    Eigensolver(String),

    /// The operation is valid but deliberately not supported (for example a
    /// direct-quadrature iteration order that would be astronomically slow);
    /// the message names the supported alternative.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numerical postcondition failed in a way that indicates an internal
    /// defect rather than a caller mistake.
    #[error("internal error: {0}")]
    Internal(String),

    /// Filesystem failure while reading or writing an output or cache file.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed JSON in a manifest, report, or baseline file.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Command line usage error (unknown function, missing flag, value out
    /// of the accepted set).
    #[error("usage error: {0}")]
    Usage(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the command line front end: usage and domain problems
    /// map to 2, everything else (including failed checks, which are not
    /// errors) is handled by the caller.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Domain(_) | Error::Range(_) => 2,
            _ => 2,
        }
    }
}
