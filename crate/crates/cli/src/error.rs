use std::io;

use shrinker::mesh::MeshError;
use shrinker::minmax::SolverError;
use shrinker::sweepout::SweepoutError;
use thiserror::Error;

/// Failures of a command, each with a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("solver stopped: {0}")]
    GenusChanged(String),
    #[error("solver stopped: {0}")]
    MaxIterations(String),
    #[error("solver stopped: {0}")]
    QualityCollapse(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Generation(_) => 3,
            CliError::GenusChanged(_) => 4,
            CliError::MaxIterations(_) => 5,
            CliError::QualityCollapse(_) => 6,
            CliError::Io(_) => 1,
        }
    }
}

impl From<SweepoutError> for CliError {
    fn from(e: SweepoutError) -> Self {
        CliError::Generation(e.to_string())
    }
}

impl From<MeshError> for CliError {
    fn from(e: MeshError) -> Self {
        CliError::Generation(e.to_string())
    }
}

impl From<&SolverError> for CliError {
    fn from(e: &SolverError) -> Self {
        match e {
            SolverError::GenusChanged { .. } => CliError::GenusChanged(e.to_string()),
            SolverError::MaxIterations { .. } => CliError::MaxIterations(e.to_string()),
            SolverError::MeshQualityCollapse { .. } => CliError::QualityCollapse(e.to_string()),
            SolverError::InvalidConfig(_) => CliError::Config(e.to_string()),
            _ => CliError::Generation(e.to_string()),
        }
    }
}
