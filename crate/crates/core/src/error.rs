//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by failure class so callers (notably the CLI) can
/// map them onto exit codes: argument/usage errors vs. data errors vs.
/// invalid-state errors.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is out of range or malformed.
    #[error("argument error: {0}")]
    Argument(String),

    /// Input data is missing, inconsistent, or malformed.
    #[error("data error: {0}")]
    Data(String),

    /// A performance-matrix entry that the computation needs is absent.
    #[error("data error: missing performance entry for model {model} at time {time}")]
    MissingEntry { model: i32, time: i32 },

    /// The object is not in a state where the requested operation is valid.
    #[error("state error: {0}")]
    State(String),

    /// Not enough observations to fit a model.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn state(msg: impl Into<String>) -> Self {
        Error::State(msg.into())
    }
}
