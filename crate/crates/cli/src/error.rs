use std::path::PathBuf;
use std::process::ExitCode;

use fracivp::Error as CoreError;
use thiserror::Error;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NON_CONVERGENCE: u8 = 3;
pub const EXIT_SOLVER: u8 = 4;
pub const EXIT_INADMISSIBLE: u8 = 10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Mismatch(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => core_exit_code(e),
            CliError::Config(_) | CliError::ReadConfig { .. } => EXIT_VALIDATION,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) | CliError::Mismatch(_) => 1,
        }
    }
}

fn core_exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::InvalidParameter(_)
        | CoreError::Domain(_)
        | CoreError::Pole(_)
        | CoreError::BranchCut(_)
        | CoreError::DistributionalKernel
        | CoreError::BoundaryDecay(_)
        | CoreError::NonSmoothInitialCondition(_) => EXIT_VALIDATION,
        CoreError::NonConvergence { .. } | CoreError::Quadrature { .. } => EXIT_NON_CONVERGENCE,
        CoreError::LaplacePole(_)
        | CoreError::Inversion(_)
        | CoreError::WavenumberInversion { .. }
        | CoreError::LimitDisagreement { .. } => EXIT_SOLVER,
    }
}

/// Successful runs may still carry a machine-readable verdict.
pub fn finish(result: CliResult<u8>) -> ExitCode {
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
