use thiserror::Error;

/// Errors produced by the viewing-graph toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed input that violates a graph invariant (self-loop, range, duplicate).
    #[error("invalid graph: {0}")]
    Validation(String),
    /// An argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive search was refused because the input is too large.
    #[error("input too large: {0}")]
    TooLarge(String),
    /// A geometric configuration that violates a genericity precondition.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
