use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("missing input: {}", .0.display())]
    MissingInput(PathBuf),

    #[error("corrupt corpus: {malformed} of {total} lines are malformed")]
    CorruptCorpus { malformed: u64, total: u64 },

    #[error("message {id} at {ts} precedes the week anchor {anchor}")]
    Ordering { id: String, ts: i64, anchor: i64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error in {source_name} line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(source_name: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            line,
            message: message.into(),
        }
    }

    /// True when the failure stems from how the tool was invoked (bad
    /// configuration or an absent input) rather than from the data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::MissingInput(_) | Error::Config(_))
    }
}
