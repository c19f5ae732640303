//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by matrix construction, scoring, learning and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),

    /// A line of a data file could not be parsed.
    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// A term or identifier was not found where it is required.
    #[error("unknown term: {term}")]
    Lookup { term: String },

    /// A parameter is out of its valid range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Supervised training could not proceed (e.g. single-class input).
    #[error("training error: {0}")]
    Training(String),

    /// Probability calibration could not proceed.
    #[error("calibration error: {0}")]
    Calibration(String),

    /// An iterative numerical procedure failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// An underlying I/O failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
