use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unknown aspect {label:?}{}; valid labels: {}", suggestion_hint(.suggestion), .valid.join(", "))]
    UnknownAspect {
        label: String,
        suggestion: Option<String>,
        valid: Vec<String>,
    },

    #[error("invalid controls: {}", join_fields(.0))]
    Controls(Vec<FieldError>),

    #[error("unknown place {0:?}")]
    UnknownPlace(String),

    #[error("selection exceeds the word budget: {length} > {budget}")]
    Infeasible { length: u64, budget: u64 },

    #[error("instance too large for {solver}: n = {n} exceeds limit {limit}")]
    TooLarge {
        solver: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("corpus index {path}: {message}")]
    Index { path: PathBuf, message: String },
}

/// A validation failure tied to one request field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        FieldError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn join_fields(errors: &[FieldError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn suggestion_hint(s: &Option<String>) -> String {
    match s {
        Some(s) => format!(" (did you mean {s:?}?)"),
        None => String::new(),
    }
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
