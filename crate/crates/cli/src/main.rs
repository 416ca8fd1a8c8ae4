use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use config::{Format, GridArgs, IcArgs, KernelArgs, OutputArgs};

/// Fractional diffusion toolkit: Mittag-Leffler values, memory kernels,
/// admissibility verdicts and spectral diffusion runs.
#[derive(Debug, Parser)]
#[command(name = "fracivp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the Mittag-Leffler function E^γ_{α,β}(z)
    Ml(MlArgs),
    /// Tabulate a kernel in the time or Laplace domain
    Kernel(KernelCmd),
    /// Admissibility report as JSON; exit 0 if admissible, 10 if not
    Admit(AdmitCmd),
    /// Invert a Laplace transform with Talbot and Gaver-Stehfest
    Invert(InvertCmd),
    /// Solve the diffusion problem and write solution and deviation tables
    Solve(SolveCmd),
    /// Verdict table over every kernel family and α = 0.1..0.9
    ReproducePaper(ReproduceCmd),
}

#[derive(Debug, clap::Args)]
pub struct MlArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long = "gamma", default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma_p: f64,
    /// Real part of the argument
    #[arg(long, allow_hyphen_values = true)]
    pub z: f64,
    /// Imaginary part of the argument
    #[arg(long = "z-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_im: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Domain {
    Time,
    Laplace,
}

#[derive(Debug, clap::Args)]
pub struct KernelCmd {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, value_enum, default_value = "time")]
    pub domain: Domain,
    /// Evaluation points (t or real s), comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub at: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, clap::Args)]
pub struct AdmitCmd {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Write the report here instead of stdout
    #[arg(long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Pair {
    /// s^{αγ−β} / (s^α − λ)^γ  ↔  t^{β−1} E^γ_{α,β}(λ t^α)
    Ml,
    /// ψ(s)  ↔  Ψ(t) for the configured kernel
    Kernel,
    /// Ŵ̃(k, s)  ↔  Ŵ(k, t) of the diffusion problem
    Solution,
}

#[derive(Debug, clap::Args)]
pub struct InvertCmd {
    #[arg(long, value_enum)]
    pub pair: Pair,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// For `--pair ml` the kernel flags give α, β, γ and λ (default −1)
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub ic: IcArgs,
    #[arg(long = "c-alpha")]
    pub c_alpha: Option<f64>,
    /// Wavenumber for `--pair solution`
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, clap::Args)]
pub struct SolveCmd {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub ic: IcArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Diffusion coefficient c_α
    #[arg(long = "c-alpha")]
    pub c_alpha: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
    /// Skip the two-way t → 0⁺ limit check
    #[arg(long)]
    pub no_limit_check: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, clap::Args)]
pub struct ReproduceCmd {
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    error::finish(match cli.command {
        Command::Ml(a) => commands::ml(a),
        Command::Kernel(a) => commands::kernel(a),
        Command::Admit(a) => commands::admit(a),
        Command::Invert(a) => commands::invert(a),
        Command::Solve(a) => commands::solve(a),
        Command::ReproducePaper(a) => commands::reproduce(a),
    })
}
