use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("input contains no data rows")]
    EmptyInput,

    #[error("cannot parse {value:?} as a number at row {row}, column {column}")]
    Parse {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("row {row} has {found} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("attribute {attr} is constant; its kernel bandwidth is zero")]
    DegenerateBandwidth { attr: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("record id {id} is out of range for a dataset of {n} records")]
    InvalidRecord { id: usize, n: usize },

    #[error("query {0} has no ground truth entry")]
    UnknownQuery(usize),

    #[error("malformed ground truth at line {line}: {message}")]
    Truth { line: usize, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
