use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("s = {0} lies on the branch cut (real s <= 0)")]
    BranchCut(Complex64),

    #[error("pole of the Laplace transform at s = {0}")]
    LaplacePole(Complex64),

    #[error("kernel is distributional at alpha = 1 and has no pointwise value")]
    DistributionalKernel,

    #[error("quadrature did not reach tolerance {tolerance:e} (error estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("inverse Laplace transform failed: {0}")]
    Inversion(String),

    #[error("inversion failed at k = {k}: {source}")]
    WavenumberInversion { k: f64, source: Box<Error> },

    #[error("boundary decay violated: {0}")]
    BoundaryDecay(String),

    #[error("initial condition must be twice differentiable, got {0}")]
    NonSmoothInitialCondition(&'static str),

    #[error("t -> 0+ limit probes disagree: extrapolated {extrapolated}, direct {direct}")]
    LimitDisagreement { extrapolated: f64, direct: f64 },
}

impl Error {
    pub fn is_non_convergence(&self) -> bool {
        match self {
            Error::NonConvergence { .. } => true,
            Error::WavenumberInversion { source, .. } => source.is_non_convergence(),
            _ => false,
        }
    }
}
