//! Run configuration: a TOML file whose fields can each be overridden by a flag.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use fracivp::diffusion::{GridParams, InitialCondition};
use fracivp::kernels::{KernelKind, KernelSpec};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const DEFAULT_TIMES: [f64; 5] = [1e-4, 1e-3, 1e-2, 1e-1, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelArgs {
    /// caputo, caputo-fabrizio (cf), atangana-baleanu (ab) or prabhakar
    #[arg(long)]
    pub kind: Option<KernelKind>,
    /// Derivative order in (0, 1]; 1 is the classical limit
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Normalization M(α)
    #[arg(long = "m-norm", allow_hyphen_values = true)]
    pub m_norm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long = "gamma", allow_hyphen_values = true)]
    pub gamma_p: Option<f64>,
    /// Prabhakar λ; defaults to −κ τ^{−α}, which makes β = 1 the AB kernel
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
}

impl KernelArgs {
    pub fn or(self, file: KernelArgs) -> KernelArgs {
        KernelArgs {
            kind: self.kind.or(file.kind),
            alpha: self.alpha.or(file.alpha),
            tau: self.tau.or(file.tau),
            m_norm: self.m_norm.or(file.m_norm),
            beta: self.beta.or(file.beta),
            gamma_p: self.gamma_p.or(file.gamma_p),
            lambda: self.lambda.or(file.lambda),
        }
    }

    pub fn build(&self) -> CliResult<KernelSpec> {
        let kind = self
            .kind
            .ok_or_else(|| CliError::Config("kernel kind is required (--kind)".into()))?;
        let alpha = self
            .alpha
            .ok_or_else(|| CliError::Config("kernel alpha is required (--alpha)".into()))?;
        let tau = self.tau.unwrap_or(1.0);
        let base = match kind {
            KernelKind::Prabhakar => {
                let beta = self
                    .beta
                    .ok_or_else(|| CliError::Config("prabhakar kernel needs beta".into()))?;
                let gamma_p = self.gamma_p.unwrap_or(1.0);
                match self.lambda {
                    Some(lambda) => {
                        KernelSpec::prabhakar(alpha, beta, gamma_p, lambda)?.with_tau(tau)?
                    }
                    None => KernelSpec::prabhakar_ab_aligned(alpha, beta, gamma_p, tau)?,
                }
            }
            other => {
                if self.beta.is_some() || self.gamma_p.is_some() || self.lambda.is_some() {
                    return Err(CliError::Config(format!(
                        "beta/gamma/lambda only apply to the prabhakar kernel, not {other}"
                    )));
                }
                KernelSpec::new(other, alpha)?.with_tau(tau)?
            }
        };
        Ok(base.with_m_norm(self.m_norm.unwrap_or(1.0))?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IcKind {
    Delta,
    Gaussian,
    Box,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcArgs {
    /// Initial profile
    #[arg(id = "ic_kind", long = "ic", value_enum)]
    #[serde(rename = "kind")]
    pub kind: Option<IcKind>,
    /// Gaussian standard deviation
    #[arg(long)]
    pub sigma0: Option<f64>,
    /// Box half-width
    #[arg(long)]
    pub halfwidth: Option<f64>,
}

impl IcArgs {
    /// A flag that switches the profile kind discards the file's block.
    pub fn or(self, file: IcArgs) -> IcArgs {
        match (self.kind, file.kind) {
            (Some(a), Some(b)) if a != b => self,
            _ => IcArgs {
                kind: self.kind.or(file.kind),
                sigma0: self.sigma0.or(file.sigma0),
                halfwidth: self.halfwidth.or(file.halfwidth),
            },
        }
    }

    pub fn build(&self) -> CliResult<InitialCondition> {
        let kind = self.kind.unwrap_or(IcKind::Gaussian);
        let stray = |name: &str| {
            CliError::Config(format!(
                "{name} does not apply to a {kind:?} initial condition"
            ))
        };
        Ok(match kind {
            IcKind::Delta => {
                if self.sigma0.is_some() {
                    return Err(stray("sigma0"));
                }
                if self.halfwidth.is_some() {
                    return Err(stray("halfwidth"));
                }
                InitialCondition::Delta
            }
            IcKind::Gaussian => {
                if self.halfwidth.is_some() {
                    return Err(stray("halfwidth"));
                }
                InitialCondition::gaussian(self.sigma0.unwrap_or(1.0))?
            }
            IcKind::Box => {
                if self.sigma0.is_some() {
                    return Err(stray("sigma0"));
                }
                let h = self.halfwidth.ok_or_else(|| {
                    CliError::Config("box initial condition needs halfwidth".into())
                })?;
                InitialCondition::boxcar(h)?
            }
        })
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridArgs {
    /// Domain half-width L
    #[arg(id = "grid_l", long = "L")]
    #[serde(rename = "L")]
    pub half_width: Option<f64>,
    /// Number of grid points N (power of two)
    #[arg(id = "grid_n", long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
}

impl GridArgs {
    pub fn or(self, file: GridArgs) -> GridArgs {
        GridArgs {
            half_width: self.half_width.or(file.half_width),
            points: self.points.or(file.points),
        }
    }

    pub fn build(&self) -> CliResult<GridParams> {
        let d = GridParams::default();
        let p = GridParams {
            half_width: self.half_width.unwrap_or(d.half_width),
            points: self.points.unwrap_or(d.points),
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputArgs {
    /// Output file, or directory for `solve`
    #[arg(long = "out")]
    pub path: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl OutputArgs {
    pub fn or(self, file: OutputArgs) -> OutputArgs {
        OutputArgs {
            path: self.path.or(file.path),
            format: self.format.or(file.format),
        }
    }
}

/// Everything a config file may hold.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub kernel: KernelArgs,
    #[serde(default)]
    pub ic: IcArgs,
    #[serde(default)]
    pub grid: GridArgs,
    pub times: Option<Vec<f64>>,
    pub c_alpha: Option<f64>,
    #[serde(default)]
    pub output: OutputArgs,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<FileConfig> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Validated inputs of a diffusion run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kernel: KernelSpec,
    pub ic: InitialCondition,
    pub grid: GridParams,
    pub times: Vec<f64>,
    pub c_alpha: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub fn check_times(times: &[f64]) -> CliResult<()> {
    if times.is_empty() {
        return Err(CliError::Config("at least one time is required".into()));
    }
    if let Some(t) = times.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(CliError::Config(format!(
            "times must be positive and finite, got {t}"
        )));
    }
    Ok(())
}
