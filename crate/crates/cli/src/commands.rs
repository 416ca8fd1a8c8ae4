use std::path::{Path, PathBuf};
use std::time::Instant;

use fracivp::admissibility::{
    full_report, reproduce_verdicts, Singularity, Verdict, VerdictRow, TABLE_ALPHAS, TABLE_FAMILIES,
};
use fracivp::diffusion::{
    deviation_limit, deviations, predicted_limit_deviation, solve as run_solve, Grid, Problem,
    SolutionField,
};
use fracivp::kernels::{KernelKind, KernelSpec};
use fracivp::specfun::{mittag_leffler, mittag_leffler_real, MlParams};
use fracivp::transforms::{
    invert_laplace, FnLaplace, InversionMethod, LimitStatus, CROSS_CHECK_TOLERANCE,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{check_times, FileConfig, Format, RunConfig, DEFAULT_TIMES};
use crate::error::{CliError, CliResult, EXIT_INADMISSIBLE};
use crate::output::{num, sink, write_csv, write_json};
use crate::{AdmitCmd, Domain, InvertCmd, KernelCmd, MlArgs, Pair, ReproduceCmd, SolveCmd};

pub fn ml(a: MlArgs) -> CliResult<u8> {
    let params = MlParams::new(a.alpha, a.beta, a.gamma_p)?;
    let z = Complex64::new(a.z, a.z_im);
    let value = if a.z_im == 0.0 {
        Complex64::new(mittag_leffler_real(params, a.z)?, 0.0)
    } else {
        mittag_leffler(params, z)?
    };
    match a.format.unwrap_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct MlOut {
                alpha: f64,
                beta: f64,
                gamma_p: f64,
                z_re: f64,
                z_im: f64,
                re: f64,
                im: f64,
            }
            write_json(
                std::io::stdout().lock(),
                &MlOut {
                    alpha: a.alpha,
                    beta: a.beta,
                    gamma_p: a.gamma_p,
                    z_re: a.z,
                    z_im: a.z_im,
                    re: value.re,
                    im: value.im,
                },
            )?;
        }
        Format::Csv if value.im == 0.0 => println!("{}", value.re),
        Format::Csv => println!("{} {}", value.re, value.im),
    }
    Ok(0)
}

fn kernel_from(config: Option<&Path>, flags: crate::config::KernelArgs) -> CliResult<KernelSpec> {
    let file = FileConfig::load(config)?;
    flags.or(file.kernel).build()
}

pub fn kernel(a: KernelCmd) -> CliResult<u8> {
    let file = FileConfig::load(a.config.as_deref())?;
    let spec = a.kernel.or(file.kernel).build()?;
    let output = a.output.or(file.output);
    let points = if a.at.is_empty() {
        let range = match a.domain {
            Domain::Time => -8..=1,
            Domain::Laplace => -2..=6,
        };
        range.map(|j| 10f64.powi(j)).collect()
    } else {
        a.at
    };
    if let Some(p) = points.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
        return Err(CliError::Config(format!(
            "evaluation points must be positive, got {p}"
        )));
    }

    #[derive(Serialize)]
    struct Point {
        at: f64,
        re: f64,
        im: f64,
    }
    let values = points
        .iter()
        .map(|&p| {
            Ok(match a.domain {
                Domain::Time => Point {
                    at: p,
                    re: spec.time(p)?,
                    im: 0.0,
                },
                Domain::Laplace => {
                    let v = spec.laplace(Complex64::new(p, 0.0))?;
                    Point {
                        at: p,
                        re: v.re,
                        im: v.im,
                    }
                }
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let out = sink(output.path.as_deref())?;
    match output.format.unwrap_or_default() {
        Format::Csv => {
            let rows: Vec<Vec<String>> = values
                .iter()
                .map(|v| match a.domain {
                    Domain::Time => vec![num(v.at), num(v.re)],
                    Domain::Laplace => vec![num(v.at), num(v.re), num(v.im)],
                })
                .collect();
            let header: &[&str] = match a.domain {
                Domain::Time => &["t", "psi"],
                Domain::Laplace => &["s", "psi_re", "psi_im"],
            };
            write_csv(out, header, &rows)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                kernel: KernelSpec,
                label: String,
                domain: &'static str,
                values: &'a [Point],
            }
            write_json(
                out,
                &Table {
                    kernel: spec,
                    label: spec.label(),
                    domain: match a.domain {
                        Domain::Time => "time",
                        Domain::Laplace => "laplace",
                    },
                    values: &values,
                },
            )
        }
    }?;
    Ok(0)
}

#[derive(Serialize)]
struct AdmitOut {
    kernel: KernelSpec,
    laplace_limit: f64,
    analytic_expectation: Option<f64>,
    verdict: Verdict,
    singularity: Singularity,
    consistent: bool,
    limit_status: LimitStatus,
    extrapolation_residual: f64,
    boundary_value: f64,
    slope: f64,
}

pub fn admit(a: AdmitCmd) -> CliResult<u8> {
    let spec = kernel_from(a.config.as_deref(), a.kernel)?;
    let r = full_report(&spec)?;
    let verdict = r.laplace_verdict;
    let out = AdmitOut {
        kernel: r.kernel,
        laplace_limit: r.laplace_limit.value,
        analytic_expectation: r.analytic_expectation,
        verdict,
        singularity: r.singularity_probe.class,
        consistent: r.consistent,
        limit_status: r.laplace_limit.status,
        extrapolation_residual: r.laplace_limit.extrapolation_residual,
        boundary_value: r.singularity_probe.boundary_value,
        slope: r.singularity_probe.slope,
    };
    write_json(sink(a.out.as_deref())?, &out)?;
    Ok(match verdict {
        Verdict::Admissible => 0,
        Verdict::Inadmissible => EXIT_INADMISSIBLE,
    })
}

type Transform = Box<dyn Fn(Complex64) -> fracivp::Result<Complex64> + Sync>;
type Exact = Box<dyn Fn(f64) -> fracivp::Result<f64>>;

pub fn invert(a: InvertCmd) -> CliResult<u8> {
    let file = FileConfig::load(a.config.as_deref())?;
    let kernel_args = a.kernel.or(file.kernel);
    let output = a.output.or(file.output);
    let times = if !a.times.is_empty() {
        a.times
    } else {
        file.times.unwrap_or_else(|| DEFAULT_TIMES.to_vec())
    };
    check_times(&times)?;

    let (describe, f, abscissa, exact): (String, Transform, f64, Option<Exact>) = match a.pair {
        Pair::Ml => {
            let alpha = kernel_args
                .alpha
                .ok_or_else(|| CliError::Config("--alpha is required".into()))?;
            let beta = kernel_args.beta.unwrap_or(1.0);
            let g = kernel_args.gamma_p.unwrap_or(1.0);
            let lambda = kernel_args.lambda.unwrap_or(-1.0);
            let params = MlParams::new(alpha, beta, g)?;
            let abscissa = if lambda > 0.0 {
                lambda.powf(1.0 / alpha)
            } else {
                0.0
            };
            (
                format!("s^(ag-b)/(s^a - l)^g, a={alpha}, b={beta}, g={g}, l={lambda}"),
                Box::new(move |s: Complex64| {
                    Ok(s.powf(alpha * g - beta) / (s.powf(alpha) - lambda).powf(g))
                }),
                abscissa,
                Some(Box::new(move |t: f64| {
                    Ok(t.powf(beta - 1.0) * mittag_leffler_real(params, lambda * t.powf(alpha))?)
                })),
            )
        }
        Pair::Kernel => {
            let spec = kernel_args.build()?;
            if spec.is_classical() {
                return Err(fracivp::Error::DistributionalKernel.into());
            }
            (
                format!("psi(s) of {}", spec.label()),
                Box::new(move |s| spec.laplace_continued(s)),
                0.0,
                Some(Box::new(move |t| spec.time(t))),
            )
        }
        Pair::Solution => {
            let spec = kernel_args.build()?;
            let ic = a.ic.or(file.ic).build()?;
            let problem = Problem::new(spec, ic, a.c_alpha.or(file.c_alpha).unwrap_or(1.0))?;
            let k = a.k;
            let rate = (problem.c_alpha * k).powi(2);
            let phi = ic.fourier(k);
            let exact: Option<Exact> = if spec.is_classical() {
                Some(Box::new(move |t| Ok(phi * (-rate * t).exp())))
            } else if spec.kind() == KernelKind::Caputo {
                let params = MlParams::classical(spec.alpha())?;
                let alpha = spec.alpha();
                Some(Box::new(move |t| {
                    Ok(phi * mittag_leffler_real(params, -rate * t.powf(alpha))?)
                }))
            } else {
                None
            };
            (
                format!("W~(k={k}, s) for {} with {}", spec.label(), ic.name()),
                Box::new(move |s| problem.transformed_hat(k, s)),
                0.0,
                exact,
            )
        }
    };
    let lf = FnLaplace::new(describe, f).with_abscissa(abscissa);

    let mut rows = Vec::with_capacity(times.len());
    for &t in &times {
        let talbot = invert_laplace(&lf, t, InversionMethod::Talbot)?;
        let stehfest = invert_laplace(&lf, t, InversionMethod::GaverStehfest);
        let exact_v = exact.as_ref().map(|e| e(t)).transpose()?;
        rows.push(InvertRow::new(t, talbot, stehfest.ok(), exact_v));
    }

    let out = sink(output.path.as_deref())?;
    match output.format.unwrap_or_default() {
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.t),
                        num(r.talbot),
                        opt(r.gaver_stehfest),
                        opt(r.relative_difference),
                        r.disagreement.to_string(),
                        opt(r.exact),
                        opt(r.talbot_error),
                    ]
                })
                .collect();
            write_csv(
                out,
                &[
                    "t",
                    "talbot",
                    "gaver_stehfest",
                    "relative_difference",
                    "disagreement",
                    "exact",
                    "talbot_error",
                ],
                &table,
            )?;
        }
        Format::Json => write_json(out, &rows)?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct InvertRow {
    t: f64,
    talbot: f64,
    gaver_stehfest: Option<f64>,
    relative_difference: Option<f64>,
    disagreement: bool,
    exact: Option<f64>,
    talbot_error: Option<f64>,
}

impl InvertRow {
    fn new(t: f64, talbot: f64, gaver_stehfest: Option<f64>, exact: Option<f64>) -> Self {
        let relative_difference =
            gaver_stehfest.map(|g| (talbot - g).abs() / talbot.abs().max(f64::MIN_POSITIVE));
        InvertRow {
            t,
            talbot,
            gaver_stehfest,
            relative_difference,
            disagreement: relative_difference.is_none_or(|d| d > CROSS_CHECK_TOLERANCE),
            exact,
            talbot_error: exact.map(|e| (talbot - e).abs()),
        }
    }
}

fn run_config(a: SolveCmd) -> CliResult<RunConfig> {
    let file = FileConfig::load(a.config.as_deref())?;
    let kernel = a.kernel.or(file.kernel).build()?;
    let ic = a.ic.or(file.ic).build()?;
    let grid = a.grid.or(file.grid).build()?;
    let times = if !a.times.is_empty() {
        a.times
    } else {
        file.times.unwrap_or_else(|| DEFAULT_TIMES.to_vec())
    };
    check_times(&times)?;
    let output = a.output.or(file.output);
    Ok(RunConfig {
        kernel,
        ic,
        grid,
        times,
        c_alpha: a.c_alpha.or(file.c_alpha).unwrap_or(1.0),
        out: output.path,
        format: output.format.unwrap_or_default(),
    })
}

pub fn solve(a: SolveCmd) -> CliResult<u8> {
    let limit_check = !a.no_limit_check;
    let cfg = run_config(a)?;
    let problem = Problem::new(cfg.kernel, cfg.ic, cfg.c_alpha)?;
    let grid = Grid::new(cfg.grid)?;
    let field = run_solve(&problem, &grid, &cfg.times)?;
    let ds = deviations(&problem, &grid, &field);

    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    write_field(&dir, cfg.format, &field, &ds)?;

    let (i_min, t_min) = cfg
        .times
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("times are non-empty");
    let mass_error = (0..field.times.len())
        .map(|i| (field.mass(i) - cfg.ic.mass()).abs())
        .fold(0.0_f64, f64::max);
    let mut summary = format!(
        "kernel={} ic={} t_min={} D(t_min)={}",
        cfg.kernel.label().replace(' ', ""),
        cfg.ic.name(),
        t_min,
        num(ds[i_min])
    );
    if cfg.ic.profile(0.0).is_none() {
        summary += " deviation_norm=fourier";
    }
    if matches!(
        cfg.kernel.kind(),
        KernelKind::CaputoFabrizio | KernelKind::AtanganaBaleanu
    ) && !cfg.kernel.is_classical()
    {
        summary += &format!(
            " predicted_limit={}",
            num(predicted_limit_deviation(&problem, &grid))
        );
    }
    summary += &format!(" mass_error={}", num(mass_error));
    println!("{summary}");

    if !limit_check {
        return Ok(0);
    }
    if !cfg.ic.is_smooth() {
        println!(
            "limit check skipped: a {} profile converges non-uniformly on a truncated grid",
            cfg.ic.name()
        );
        return Ok(0);
    }
    let lim = deviation_limit(&problem, &grid)?;
    println!(
        "limit extrapolated={} direct={} closed_form={}",
        num(lim.extrapolated),
        num(lim.direct),
        num(lim.closed_form)
    );
    Ok(0)
}

fn write_field(dir: &Path, format: Format, field: &SolutionField, ds: &[f64]) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut header = vec!["x".to_string()];
            header.extend(field.times.iter().map(|t| format!("t={}", num(*t))));
            let header_ref: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = field
                .x
                .iter()
                .enumerate()
                .map(|(j, &x)| {
                    std::iter::once(num(x))
                        .chain(field.w.iter().map(|row| num(row[j])))
                        .collect()
                })
                .collect();
            write_csv(sink(Some(&dir.join("solution.csv")))?, &header_ref, &rows)?;
            let dev_rows: Vec<Vec<String>> = field
                .times
                .iter()
                .zip(ds)
                .map(|(t, d)| vec![num(*t), num(*d)])
                .collect();
            write_csv(
                sink(Some(&dir.join("deviation.csv")))?,
                &["t", "D"],
                &dev_rows,
            )
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Solution<'a> {
                x: &'a [f64],
                times: &'a [f64],
                w: &'a [Vec<f64>],
            }
            #[derive(Serialize)]
            struct Deviation {
                t: f64,
                d: f64,
            }
            write_json(
                sink(Some(&dir.join("solution.json")))?,
                &Solution {
                    x: &field.x,
                    times: &field.times,
                    w: &field.w,
                },
            )?;
            let dev: Vec<Deviation> = field
                .times
                .iter()
                .zip(ds)
                .map(|(&t, &d)| Deviation { t, d })
                .collect();
            write_json(sink(Some(&dir.join("deviation.json")))?, &dev)
        }
    }
}

pub fn reproduce(a: ReproduceCmd) -> CliResult<u8> {
    let started = Instant::now();
    let rows = reproduce_verdicts()?;
    let elapsed = started.elapsed();

    let out = sink(a.output.path.as_deref())?;
    match a.output.format.unwrap_or_default() {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.family.clone(),
                        format!("{}", r.alpha),
                        num(r.laplace_limit),
                        r.converged.to_string(),
                        r.verdict.to_string(),
                        r.expected.to_string(),
                        r.singularity.to_string(),
                        num(r.boundary_value),
                        r.consistent.to_string(),
                    ]
                })
                .collect();
            write_csv(
                out,
                &[
                    "family",
                    "alpha",
                    "laplace_limit",
                    "converged",
                    "verdict",
                    "expected",
                    "singularity",
                    "boundary_value",
                    "consistent",
                ],
                &table,
            )?;
        }
        Format::Json => write_json(out, &rows)?,
    }

    eprint!("{}", matrix(&rows));
    let mismatched = rows.iter().filter(|r| r.verdict != r.expected).count();
    let inconsistent = rows.iter().filter(|r| !r.consistent).count();
    eprintln!(
        "{} rows in {:.3} s; {} differ from the closed form, {} inconsistent",
        rows.len(),
        elapsed.as_secs_f64(),
        mismatched,
        inconsistent
    );
    if mismatched + inconsistent > 0 {
        return Err(CliError::Mismatch(format!(
            "{mismatched} unexpected verdicts, {inconsistent} inconsistent rows"
        )));
    }
    Ok(0)
}

/// Family × α grid of `A` (admissible) / `I` (inadmissible), `!` marking
/// rows where the Laplace and time-side checks disagree.
fn matrix(rows: &[VerdictRow]) -> String {
    let width = TABLE_FAMILIES
        .iter()
        .map(|f| f.label().len())
        .max()
        .unwrap_or(0);
    let mut s = format!("{:width$}", "");
    for a in TABLE_ALPHAS {
        s += &format!(" {a:>4}");
    }
    s.push('\n');
    for family in TABLE_FAMILIES {
        let label = family.label();
        s += &format!("{label:width$}");
        for r in rows.iter().filter(|r| r.family == label) {
            let mark = match r.verdict {
                Verdict::Admissible => "A",
                Verdict::Inadmissible => "I",
            };
            let flag = if r.consistent { " " } else { "!" };
            s += &format!(" {mark:>3}{flag}");
        }
        s.push('\n');
    }
    s
}
