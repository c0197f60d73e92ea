//! Configuration-driven runner for the prime-system experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;

use std::path::Path;

pub use commands::{run, Command, RunOutcome};
pub use config::ExperimentConfig;
pub use error::CliError;

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.parse()
}
