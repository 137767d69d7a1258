use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game state: {0}")]
    InvalidState(String),

    #[error("invalid scaling profile: {0}")]
    InvalidProfile(String),

    #[error("invalid mood signature: {0}")]
    InvalidSignature(String),

    #[error("scaled value overflowed for {attribute}: {value} x {factor}")]
    ScaleOverflow {
        attribute: &'static str,
        value: f64,
        factor: f64,
    },

    #[error("invalid rule set: {0}")]
    InvalidRuleSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: String,
        message: String,
    },

    #[error("{0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
