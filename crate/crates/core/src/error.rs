use thiserror::Error;

/// Errors raised by the engine. `Precondition` maps to exit status 2 in the
/// CLI; everything else is treated as an internal failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("table data error in row `{row}`: {msg}")]
    Table { row: String, msg: String },
    #[error("element cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("decoration unresolved: {0}")]
    Unresolved(String),
}

impl Error {
    pub fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    /// True for errors that reject the query rather than signal a fault.
    pub fn is_rejection(&self) -> bool {
        matches!(self, Error::Precondition(_) | Error::Unsupported(_) | Error::Parse { .. } | Error::Unbound(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
