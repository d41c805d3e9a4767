use std::fmt::Display;

use thiserror::Error;

/// Invalid or unreadable scenario; `key` names the offending entry.
#[derive(Debug, Error)]
#[error("{key}: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn at(key: impl Into<String>, e: impl Display) -> Self {
        Self::new(key, e.to_string())
    }
}

/// Math failure while a suite was evaluating.
#[derive(Debug, Error)]
#[error("suite '{suite}' ({element}) at {point}: {source}")]
pub struct RuntimeError {
    pub suite: String,
    pub element: String,
    pub point: String,
    pub source: confgeom::GeomError,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("runtime error: {0}")]
    Runtime(#[from] RuntimeError),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}
