use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameters: {0}")]
    Domain(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("order {order} not constructible by implemented methods")]
    Unreachable { order: usize },

    #[error("bound not applicable for alpha = {alpha}")]
    NotApplicable { alpha: u64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("array of {rows} rows exceeds the materialization threshold of {threshold}; use the streaming interface")]
    TooLarge { rows: u128, threshold: u128 },

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub(crate) fn infeasible(message: impl Into<String>) -> Self {
        Error::Infeasible(message.into())
    }
}
