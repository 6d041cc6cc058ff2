//! Library surface of the `zeno-opt` binary: config parsing, frozen presets,
//! and the command implementations, kept importable for integration tests.

pub mod config;
pub mod presets;
pub mod run;

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}
