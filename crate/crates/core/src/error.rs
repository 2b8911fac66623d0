use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    /// A text input (corpus, TSV, space file, dataset) failed to parse.
    #[error("{source_name}:{line}: {message}")]
    Parse { source_name: String, line: usize, message: String },

    #[error("pattern syntax error at offset {offset}: {message}")]
    PatternSyntax { offset: usize, message: String },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("model file: {0}")]
    Model(String),

    #[error("empty model: {0}")]
    EmptyModel(String),

    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("rank {rank} is invalid for a {rows}x{cols} matrix")]
    InvalidRank { rank: usize, rows: usize, cols: usize },

    #[error("truncated SVD did not converge after {iterations} rounds (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("out of vocabulary: {0}")]
    Oov(String),

    #[error("unknown {kind} {name:?}; valid names: {valid}")]
    UnknownName { kind: &'static str, name: String, valid: String },

    /// The inputs make a measure or protocol undefined (zero vector, no positives, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse { source_name: source_name.to_string(), line, message: message.into() }
    }
}
