use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io failure: {0}")]
    IoFailure(#[from] io::Error),
    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] patchasym_core::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
