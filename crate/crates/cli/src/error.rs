use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("unknown scenario '{0}' (see --list)")]
    UnknownScenario(String),
    #[error("scenario '{scenario}' has no check '{check}' (field checks[{index}])")]
    UnknownCheck {
        scenario: String,
        check: String,
        index: usize,
    },
    #[error("tolerance for '{check}' is {given:e}, more than 10x the default {default:e}; pass --force to allow")]
    LooseTolerance { check: String, given: f64, default: f64 },
    #[error("check '{0}' is exact and takes no tolerance")]
    ExactCheck(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("registry entry {path}: {message}")]
    Registry { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] orbifold_core::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;
