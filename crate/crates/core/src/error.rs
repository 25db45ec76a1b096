use std::fmt;

use thiserror::Error;

/// Location of a problem inside a text input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("format error at {location}: {message}")]
    Format { location: Location, message: String },

    #[error("format error: {0}")]
    BadLabel(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("interval [{start},{end}] is out of range for a string of length {len}")]
    Range { start: usize, end: usize, len: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("resource guard exceeded: {0}")]
    Resource(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Format {
            location: Location { line, column },
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
