use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("usage: {0}")]
    Usage(String),
    #[error("missing artifact {}: run `beurling {producer}` first with the same --out directory", .path.display())]
    MissingArtifact { path: PathBuf, producer: &'static str },
    #[error("output directory {} is in use by another run (delete {}/.lock if it is stale)", .0.display(), .0.display())]
    Locked(PathBuf),
    #[error("resource limit reached: {0}")]
    Resource(String),
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] beurling_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// 2 for usage and configuration problems, 3 for exhausted budgets.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Resource(_) | Self::Core(beurling_core::Error::Resource(_)) => 3,
            _ => 2,
        }
    }
}
