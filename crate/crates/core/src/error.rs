use thiserror::Error;

use crate::graph::VertexSet;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex set: {0}")]
    InvalidSet(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("classification failed: {reason}")]
    ClassificationFailed {
        reason: String,
        diagnostics: Box<crate::classify::Diagnostics>,
    },

    #[error("illegal rotation: {0}")]
    Rotation(String),

    #[error("Hall's condition fails for a left set of size {}", violator.len())]
    HallViolation { violator: VertexSet },

    #[error("invalid frame: {0}")]
    Frame(String),

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable numeric code used by the C ABI and the CLI.
    pub fn code(&self) -> i32 {
        match self {
            Error::InvalidSet(_) => 2,
            Error::Domain(_) => 3,
            Error::Parse(_) => 4,
            Error::Budget(_) => 5,
            Error::Precondition(_) => 6,
            Error::ClassificationFailed { .. } => 7,
            Error::Rotation(_) => 8,
            Error::HallViolation { .. } => 9,
            Error::Frame(_) => 10,
            Error::IllegalMove(_) => 11,
            Error::Io(_) => 12,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
