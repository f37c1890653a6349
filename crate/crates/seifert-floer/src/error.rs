//! Error taxonomy shared by the library and the CLI exit codes.

use thiserror::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes; the CLI maps them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input (grammar, zero denominators, out-of-range values). Exit code 2.
    #[error("parse error: {0}")]
    Parse(String),

    /// Well-formed but out-of-scope input (lens spaces, exceptional slopes,
    /// torus-bundle detail requests). Exit code 3.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Two independent computations of the same quantity disagreed; both
    /// witnesses are embedded in the message. Exit code 4.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    /// An operation was called outside its stated precondition.
    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    /// CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Unsupported(_) => 3,
            Error::Consistency(_) => 4,
            Error::Contract(_) => 4,
        }
    }
}
