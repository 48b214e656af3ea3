use thiserror::Error;

/// Errors shared across the crate.
///
/// The variants are coarse on purpose: callers mostly need to distinguish
/// "the input was malformed" from "the requested size is out of supported
/// range" from "an internal invariant broke", and the CLI maps exactly those
/// three classes to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (ANF expression, bit string, table file, ...).
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A request outside the supported size range of an operation.
    #[error("{what} supports {min} <= n <= {max}, got n = {n}")]
    SizeLimit {
        what: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },

    /// Structurally inconsistent arguments (wrong table length, mismatched
    /// variable counts, duplicate qubit operands, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A semantically invalid experiment configuration (zero shots,
    /// confidence level outside (0, 1), algorithm/function mismatch, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An internal consistency check failed, e.g. state norm drift beyond
    /// tolerance. Indicates a bug, not a user error.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn parse_at(column: usize, message: impl Into<String>) -> Self {
        Error::parse(1, column, message)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
