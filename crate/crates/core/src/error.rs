use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),

    #[error("graph generation stalled after {attempts} samples with {placed} of {target} edges placed")]
    GenerationStalled {
        attempts: u64,
        placed: usize,
        target: usize,
    },

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("constant {0} has a denominator divisible by the field modulus")]
    UnrepresentableConstant(String),

    #[error("matrix of dimension {dim} exceeds the oracle cap of {cap}")]
    OracleTooLarge { dim: usize, cap: usize },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input (flags, configs, specs).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpec(_)
                | Error::InvalidAssignment(_)
                | Error::InvalidConfig(_)
                | Error::Parse(_)
                | Error::OracleTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
