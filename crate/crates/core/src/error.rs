use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced anywhere in the pipeline.
///
/// Variants fall in two families: bad input (unreadable or malformed files,
/// bad flags) and contract violations (well-formed data that breaks an
/// operation's precondition). [`Error::exit_code`] maps them to 2 and 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("DAT line {line}: {message}")]
    Dat { line: usize, message: String },

    #[error("DAT line {line} (row {row}), column {column}: illegal character {found:?}")]
    DatIllegalChar {
        line: usize,
        row: usize,
        column: usize,
        found: char,
    },

    #[error("PGM: {0}")]
    Pgm(String),

    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("no components")]
    NoComponents,

    #[error("empty word image")]
    EmptyWord,

    #[error("row {row} out of range for height {height}")]
    RowOutOfRange { row: usize, height: usize },

    #[error("dimension mismatch: expected {expected} inputs, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid training config: {0}")]
    InvalidConfig(String),

    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("empty test set")]
    EmptyTestSet,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line tool: 2 for input errors,
    /// 3 for contract violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Dat { .. }
            | Error::DatIllegalChar { .. }
            | Error::Pgm(_)
            | Error::ModelFormat { .. }
            | Error::Manifest { .. }
            | Error::Config(_) => 2,
            _ => 3,
        }
    }
}
