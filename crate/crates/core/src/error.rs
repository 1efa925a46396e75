use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::textmine::QueryError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: malformed record: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("invalid record: {0}")]
    InvalidRecord(String),

    #[error("dangling reference: {context} refers to unknown publication `{id}`")]
    DanglingReference { context: String, id: String },

    #[error("publication `{0}` has year {1} outside the corpus range")]
    YearOutOfRange(String, i32),

    #[error("unknown publication `{0}`")]
    UnknownPublication(String),

    #[error("unknown patent family `{0}`")]
    UnknownFamily(String),

    #[error("unknown main field `{0}`")]
    UnknownField(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("empty year range {0}..={1}")]
    EmptyYearRange(i32, i32),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("publication `{0}` has no awakening year")]
    NoAwakening(String),

    #[error("normalization base bucket has zero count")]
    ZeroBase,

    #[error("infeasible synthetic corpus configuration: {0}")]
    Infeasible(String),

    #[error("unparseable name `{0}`")]
    UnparseableName(String),

    #[error(transparent)]
    Query(#[from] QueryError),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error stems from how the tool was invoked rather than from the data.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_)
                | Error::Config(_)
                | Error::UnknownField(_)
                | Error::EmptyYearRange(..)
                | Error::Query(_)
        )
    }
}
