//! Fractional diffusion `D^α_t W = c² ∂²_x W`, `W(x, 0) = φ(x)`, solved in
//! Fourier–Laplace space:
//!
//! ```text
//! Ŵ̃(k, s) = ψ(s, α) φ̂(k) / (s ψ(s, α) + c² k²)
//! ```
//!
//! Each wavenumber is inverted in time on its own, then the spatial profile
//! comes from one inverse FFT per output time.

mod grid;
mod initial;

pub use grid::{Grid, GridParams};
pub use initial::InitialCondition;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{KernelKind, KernelSpec};
use crate::transforms::{
    initial_value_limit_with, invert_laplace, wynn_epsilon, FnLaplace, InversionMethod,
    LimitEstimate, LimitOptions,
};

/// `|φ(±L)|` must stay below this for the truncated domain to be valid.
pub const PROFILE_EDGE_TOLERANCE: f64 = 1e-12;
/// `|W(±L, t)|` must stay below this after the solve.
pub const SOLUTION_EDGE_TOLERANCE: f64 = 1e-8;
/// Edge-to-peak ratio accepted for non-smooth profiles.
pub const RIPPLE_EDGE_RATIO: f64 = 1e-6;
/// Largest accepted gap between the two `t → 0⁺` deviation estimates.
pub const LIMIT_AGREEMENT: f64 = 1e-4;
/// Probe times `10^{-1} .. 10^{-DEVIATION_DECADES}` for the extrapolated limit.
pub const DEVIATION_DECADES: i32 = 10;

/// A kernel, an initial profile and the diffusivity `c_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub kernel: KernelSpec,
    pub ic: InitialCondition,
    pub c_alpha: f64,
}

impl Problem {
    pub fn new(kernel: KernelSpec, ic: InitialCondition, c_alpha: f64) -> Result<Self> {
        if !(c_alpha > 0.0) || !c_alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "c_alpha must be > 0, got {c_alpha}"
            )));
        }
        Ok(Self {
            kernel,
            ic,
            c_alpha,
        })
    }

    fn c2k2(&self, k: f64) -> f64 {
        self.c_alpha * self.c_alpha * k * k
    }

    /// `Ŵ̃(k, s)`.
    pub fn transformed_hat(&self, k: f64, s: Complex64) -> Result<Complex64> {
        let psi = self.kernel.laplace_continued(s)?;
        Ok(psi * self.ic.fourier(k) / (s * psi + self.c2k2(k)))
    }

    /// `χ̃̂(k, s) = −c²k² φ̂(k) s⁻¹ / (ψ s + c²k²)` for `χ = W − φ`.
    pub fn chi_transformed_hat(&self, k: f64, s: Complex64) -> Result<Complex64> {
        let psi = self.kernel.laplace_continued(s)?;
        let c2k2 = self.c2k2(k);
        Ok(-c2k2 * self.ic.fourier(k) / (s * (psi * s + c2k2)))
    }

    /// `Ŵ(k, t)` by Talbot inversion of [`Problem::transformed_hat`].
    pub fn solution_hat(&self, k: f64, t: f64) -> Result<f64> {
        let f = FnLaplace::new("W~(k,s)", |s| self.transformed_hat(k, s));
        invert_laplace(&f, t, InversionMethod::Talbot).map_err(|e| wrap_k(k, e))
    }

    /// `χ̂(k, t)`.
    pub fn chi_hat(&self, k: f64, t: f64) -> Result<f64> {
        let f = FnLaplace::new("chi~(k,s)", |s| self.chi_transformed_hat(k, s));
        invert_laplace(&f, t, InversionMethod::Talbot).map_err(|e| wrap_k(k, e))
    }

    /// `lim_{t→0⁺} Ŵ(k, t)` via the initial-value theorem.
    ///
    /// The estimator runs on `Ŵ̃ / φ̂(k)` and the result is scaled back, so a
    /// vanishing `φ̂(k)` cannot push the samples into subnormal range.
    pub fn initial_profile_limit(&self, k: f64) -> Result<LimitEstimate> {
        let c2k2 = self.c2k2(k);
        let f = FnLaplace::new("W~(k,s)/phi^(k)", move |s: Complex64| {
            let psi = self.kernel.laplace_continued(s)?;
            Ok(psi / (s * psi + c2k2))
        });
        let opts = self.limit_options(k)?;
        let est = initial_value_limit_with(&f, opts).map_err(|e| wrap_k(k, e))?;
        Ok(scale_estimate(est, self.ic.fourier(k)))
    }

    /// `lim_{t→0⁺} χ̂(k, t)`, estimated like [`Problem::initial_profile_limit`].
    pub fn chi_initial_limit(&self, k: f64) -> Result<LimitEstimate> {
        let c2k2 = self.c2k2(k);
        let f = FnLaplace::new("chi~(k,s)/phi^(k)", move |s: Complex64| {
            let psi = self.kernel.laplace_continued(s)?;
            Ok(-c2k2 / (s * (psi * s + c2k2)))
        });
        let opts = self.limit_options(k)?;
        let est = initial_value_limit_with(&f, opts).map_err(|e| wrap_k(k, e))?;
        Ok(scale_estimate(est, self.ic.fourier(k)))
    }

    /// Start the limit grid where `s ψ(s)` has outgrown `c²k²`, unless
    /// `s ψ(s)` has stopped growing.
    fn limit_options(&self, k: f64) -> Result<LimitOptions> {
        let mut opts = LimitOptions::default();
        let target = 1e3 * self.c2k2(k);
        let sym = |s: f64| -> Result<f64> {
            let z = Complex64::new(s, 0.0);
            Ok((z * self.kernel.laplace_continued(z)?).norm())
        };
        let mut current = sym(opts.s0)?;
        while current < target && opts.s0 < 1e150 {
            let next = sym(opts.s0 * opts.ratio)?;
            if next < 1.05 * current {
                break;
            }
            opts.s0 *= opts.ratio;
            current = next;
        }
        Ok(opts)
    }

    /// `P = lim_{s→∞} s ψ(s, α)` in closed form (`+∞` for singular kernels).
    pub fn symbol_limit(&self) -> f64 {
        let spec = &self.kernel;
        if spec.is_classical() {
            return f64::INFINITY;
        }
        match spec.kind() {
            KernelKind::Caputo => f64::INFINITY,
            KernelKind::CaputoFabrizio | KernelKind::AtanganaBaleanu => {
                spec.m_norm() / (1.0 - spec.alpha())
            }
            KernelKind::Prabhakar => {
                let beta = spec.prabhakar_params().map_or(1.0, |p| p.beta);
                if beta < 1.0 {
                    f64::INFINITY
                } else if beta == 1.0 {
                    1.0 / (1.0 - spec.alpha())
                } else {
                    0.0
                }
            }
        }
    }

    /// Closed-form `lim_{t→0⁺} Ŵ(k, t) = φ̂(k) P / (P + c²k²)`.
    pub fn predicted_initial_hat(&self, k: f64) -> f64 {
        let p = self.symbol_limit();
        let phi = self.ic.fourier(k);
        let c2k2 = self.c2k2(k);
        if p.is_infinite() || c2k2 == 0.0 {
            phi
        } else {
            phi * p / (p + c2k2)
        }
    }

    fn check_profile_edges(&self, grid: &Grid) -> Result<()> {
        let l = grid.params().half_width;
        if let Some(edge) = self.ic.profile(l) {
            let edge = edge.max(self.ic.profile(-l).unwrap_or(0.0));
            if edge >= PROFILE_EDGE_TOLERANCE {
                return Err(Error::BoundaryDecay(format!(
                    "initial profile is {edge:e} at x = ±{l}; widen the domain (L > support)"
                )));
            }
        }
        if let InitialCondition::Box { halfwidth } = self.ic {
            if halfwidth >= l {
                return Err(Error::BoundaryDecay(format!(
                    "box half-width {halfwidth} reaches the domain edge L = {l}"
                )));
            }
        }
        Ok(())
    }
}

fn scale_estimate(mut est: LimitEstimate, factor: f64) -> LimitEstimate {
    let times = |v: f64| if factor == 0.0 { 0.0 } else { v * factor };
    est.value = times(est.value);
    est.extrapolation_residual = times(est.extrapolation_residual).abs();
    for sample in &mut est.samples {
        sample.1 = times(sample.1);
    }
    est
}

fn wrap_k(k: f64, e: Error) -> Error {
    match e {
        Error::WavenumberInversion { .. } => e,
        other => Error::WavenumberInversion {
            k,
            source: Box::new(other),
        },
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one output time is needed".into(),
        ));
    }
    if let Some(t) = times.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
        return Err(Error::Domain(format!("output times must be > 0, got {t}")));
    }
    Ok(())
}

/// `W(x, t)` on the grid, with the spectrum it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionField {
    pub x: Vec<f64>,
    /// Non-negative wavenumbers; `Ŵ(−k) = conj Ŵ(k)`.
    pub k: Vec<f64>,
    pub times: Vec<f64>,
    /// `w_hat[i][m] = Ŵ(k_m, t_i)`.
    pub w_hat: Vec<Vec<Complex64>>,
    /// `w[i][j] = W(x_j, t_i)`.
    pub w: Vec<Vec<f64>>,
    pub c_alpha: f64,
    /// Largest imaginary part left by the inverse FFT.
    pub imag_residue: f64,
}

impl SolutionField {
    /// Trapezoid mass `∫ W(x, t_i) dx`.
    pub fn mass(&self, i: usize) -> f64 {
        let dx = self.x[1] - self.x[0];
        dx * self.w[i].iter().sum::<f64>()
    }
}

fn spectrum_at(
    grid: &Grid,
    t: f64,
    eval: &(dyn Fn(f64, f64) -> Result<f64> + Sync),
) -> Result<Vec<f64>> {
    grid.k().par_iter().map(|&k| eval(k, t)).collect()
}

fn assemble(
    grid: &Grid,
    times: &[f64],
    c_alpha: f64,
    eval: &(dyn Fn(f64, f64) -> Result<f64> + Sync),
) -> Result<SolutionField> {
    let mut w_hat = Vec::with_capacity(times.len());
    let mut w = Vec::with_capacity(times.len());
    let mut imag_residue = 0.0_f64;
    for &t in times {
        let spectrum = spectrum_at(grid, t, eval)?;
        let (field, imag) = grid.inverse_even(&spectrum);
        imag_residue = imag_residue.max(imag);
        w_hat.push(
            spectrum
                .into_iter()
                .map(|v| Complex64::new(v, 0.0))
                .collect(),
        );
        w.push(field);
    }
    Ok(SolutionField {
        x: grid.x().to_vec(),
        k: grid.k().to_vec(),
        times: times.to_vec(),
        w_hat,
        w,
        c_alpha,
        imag_residue,
    })
}

/// Smooth profiles must reach `SOLUTION_EDGE_TOLERANCE` at `x = ±L`. The
/// delta and the box leave a truncation ripple across the whole grid, so
/// for them the edge is compared with the peak instead.
fn check_solution_edges(field: &SolutionField, smooth: bool) -> Result<()> {
    for (t, row) in field.times.iter().zip(&field.w) {
        let edge = row[0].abs().max(row[row.len() - 1].abs());
        let allowed = if smooth {
            SOLUTION_EDGE_TOLERANCE
        } else {
            let peak = row.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            SOLUTION_EDGE_TOLERANCE.max(RIPPLE_EDGE_RATIO * peak)
        };
        if edge > allowed {
            return Err(Error::BoundaryDecay(format!(
                "|W| = {edge:e} at the domain edge for t = {t}; widen the domain"
            )));
        }
    }
    Ok(())
}

/// Solve on the grid at each requested time.
pub fn solve(problem: &Problem, grid: &Grid, times: &[f64]) -> Result<SolutionField> {
    check_times(times)?;
    problem.check_profile_edges(grid)?;
    let field = assemble(grid, times, problem.c_alpha, &|k, t| {
        problem.solution_hat(k, t)
    })?;
    check_solution_edges(&field, problem.ic.is_smooth())?;
    Ok(field)
}

fn profile_on(problem: &Problem, grid: &Grid) -> Option<Vec<f64>> {
    grid.x().iter().map(|&x| problem.ic.profile(x)).collect()
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |m, (u, v)| m.max((u - v).abs()))
}

/// `D(t)` from a solved field: `max_x |W − φ|`, or `max_k |Ŵ − φ̂|` for
/// the delta profile.
pub fn deviations(problem: &Problem, grid: &Grid, field: &SolutionField) -> Vec<f64> {
    match profile_on(problem, grid) {
        Some(phi) => field.w.iter().map(|row| max_gap(row, &phi)).collect(),
        None => {
            let phi_hat: Vec<f64> = grid.k().iter().map(|&k| problem.ic.fourier(k)).collect();
            field
                .w_hat
                .iter()
                .map(|row| {
                    let re: Vec<f64> = row.iter().map(|z| z.re).collect();
                    max_gap(&re, &phi_hat)
                })
                .collect()
        }
    }
}

/// `D(t)` at a single time.
pub fn deviation(problem: &Problem, grid: &Grid, t: f64) -> Result<f64> {
    let field = solve(problem, grid, &[t])?;
    Ok(deviations(problem, grid, &field)[0])
}

/// `(t, D(t))` for each time.
pub fn deviation_curve(problem: &Problem, grid: &Grid, times: &[f64]) -> Result<Vec<(f64, f64)>> {
    let field = solve(problem, grid, times)?;
    Ok(times
        .iter()
        .copied()
        .zip(deviations(problem, grid, &field))
        .collect())
}

fn deviation_of_spectrum(problem: &Problem, grid: &Grid, spectrum: &[f64]) -> f64 {
    match profile_on(problem, grid) {
        Some(phi) => max_gap(&grid.inverse_even(spectrum).0, &phi),
        None => {
            let phi_hat: Vec<f64> = grid.k().iter().map(|&k| problem.ic.fourier(k)).collect();
            max_gap(spectrum, &phi_hat)
        }
    }
}

/// `lim_{t→0⁺} D(t)` from the closed-form filter `P / (P + c²k²)`.
pub fn predicted_limit_deviation(problem: &Problem, grid: &Grid) -> f64 {
    let spectrum: Vec<f64> = grid
        .k()
        .iter()
        .map(|&k| problem.predicted_initial_hat(k))
        .collect();
    deviation_of_spectrum(problem, grid, &spectrum)
}

/// The `t → 0⁺` deviation reached two ways.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationLimit {
    /// Wynn extrapolation of `D(10^{−j})`.
    pub extrapolated: f64,
    pub extrapolation_residual: f64,
    /// From the per-wavenumber initial-value limits.
    pub direct: f64,
    /// From the closed-form filter.
    pub closed_form: f64,
    pub curve: Vec<(f64, f64)>,
}

/// Estimate `lim_{t→0⁺} D(t)` by extrapolation and by the initial-value
/// theorem; fails if they differ by more than [`LIMIT_AGREEMENT`].
pub fn deviation_limit(problem: &Problem, grid: &Grid) -> Result<DeviationLimit> {
    let times: Vec<f64> = (1..=DEVIATION_DECADES).map(|j| 10f64.powi(-j)).collect();
    let curve = deviation_curve(problem, grid, &times)?;
    let ds: Vec<f64> = curve.iter().map(|&(_, d)| d).collect();
    let (extrapolated, extrapolation_residual) = wynn_epsilon(&ds);

    let spectrum = grid
        .k()
        .par_iter()
        .map(|&k| {
            let est = problem.initial_profile_limit(k)?;
            if est.converged {
                Ok(est.value)
            } else {
                Err(Error::WavenumberInversion {
                    k,
                    source: Box::new(Error::NonConvergence {
                        what: "initial-value limit",
                        detail: format!(
                            "{:?} with residual {:e}",
                            est.status, est.extrapolation_residual
                        ),
                    }),
                })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let direct = deviation_of_spectrum(problem, grid, &spectrum);
    let closed_form = predicted_limit_deviation(problem, grid);
    if (extrapolated - direct).abs() > LIMIT_AGREEMENT {
        return Err(Error::LimitDisagreement {
            extrapolated,
            direct,
        });
    }
    Ok(DeviationLimit {
        extrapolated,
        extrapolation_residual,
        direct,
        closed_form,
        curve,
    })
}

/// Output of the shifted formulation `χ = W − φ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformedSolution {
    /// `χ` and `χ̂` in the field slots.
    pub chi: SolutionField,
    /// `W = χ + φ` on the grid.
    pub w: Vec<Vec<f64>>,
}

/// Solve for `χ = W − φ` and rebuild `W`. Needs a smooth profile.
pub fn solve_transformed(
    problem: &Problem,
    grid: &Grid,
    times: &[f64],
) -> Result<TransformedSolution> {
    if !problem.ic.is_smooth() {
        return Err(Error::NonSmoothInitialCondition(problem.ic.name()));
    }
    check_times(times)?;
    problem.check_profile_edges(grid)?;
    let chi = assemble(grid, times, problem.c_alpha, &|k, t| problem.chi_hat(k, t))?;
    let phi = profile_on(problem, grid).expect("smooth profiles are grid functions");
    let w = chi
        .w
        .iter()
        .map(|row| row.iter().zip(&phi).map(|(c, p)| c + p).collect())
        .collect();
    Ok(TransformedSolution { chi, w })
}
