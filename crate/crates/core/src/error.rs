use thiserror::Error;

/// Errors raised anywhere in the estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("parse error at row {row}, column {column}: {message}")]
    Cell {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for failures caused by the numerics rather than by the caller's input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } | Error::Cell { .. } => "parse",
            Error::Input(_) => "input",
            Error::Degenerate(_) => "degenerate",
            Error::Domain(_) => "domain",
            Error::Numeric(_) => "numeric",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
