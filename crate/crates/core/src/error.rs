use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoreError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("undefined value: {0}")]
    Undefined(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl LoreError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        LoreError::Parameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LoreError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, LoreError>;
