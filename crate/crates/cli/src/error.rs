use std::path::PathBuf;

use oirs_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes. Usage errors are reported by clap with code 2.
pub mod exit {
    pub const SCHEMA: u8 = 3;
    pub const VALIDATION: u8 = 4;
    pub const GEOMETRY: u8 = 5;
    pub const IO: u8 = 6;
    pub const SOLVER: u8 = 7;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Core(e) if e.is_geometry() => exit::GEOMETRY,
            CliError::Core(CoreError::Schema { .. }) => exit::SCHEMA,
            CliError::Core(CoreError::Validation { .. } | CoreError::InsufficientTrials { .. }) => exit::VALIDATION,
            CliError::Core(_) => exit::SOLVER,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            exit::SCHEMA => "schema error",
            exit::VALIDATION => "validation error",
            exit::GEOMETRY => "geometry error",
            exit::IO => "i/o error",
            _ => "solver error",
        }
    }
}
