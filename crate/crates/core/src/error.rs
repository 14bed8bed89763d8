use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value violates a domain invariant. `field` names the offending input.
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// The input graph does not have the shape an operation requires.
    #[error("malformed graph: {0}")]
    Structure(String),

    #[error("unsupported graph: {0}")]
    UnsupportedGraph(String),

    /// An internal consistency check failed. Always a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
