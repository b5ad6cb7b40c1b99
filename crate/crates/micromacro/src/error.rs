use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("field `{field}`: {msg}")]
    Config { field: String, msg: String },

    #[error("invalid state at cell {cell:?}: {msg}")]
    State { cell: Vec<usize>, msg: String },

    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },

    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },

    #[error("worker {worker}: {msg}")]
    Worker { worker: usize, msg: String },
}

impl Error {
    pub fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            msg: msg.into(),
        }
    }

    pub fn state(cell: &[usize], msg: impl Into<String>) -> Self {
        Error::State {
            cell: cell.to_vec(),
            msg: msg.into(),
        }
    }

    /// Short machine-readable tag used by the command line front end.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Config { .. } => "config",
            Error::State { .. } => "state",
            Error::Io { .. } => "io",
            Error::Format { .. } => "format",
            Error::Worker { .. } => "worker",
        }
    }

    /// Attach a step index to a state error raised inside a time loop.
    pub fn at_step(self, step: usize) -> Self {
        match self {
            Error::State { cell, msg } => Error::State {
                cell,
                msg: format!("step {step}: {msg}"),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
