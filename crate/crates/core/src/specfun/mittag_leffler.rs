//! One-, two- and three-parameter (Prabhakar) Mittag-Leffler functions
//!
//! ```text
//! E^γ_{α,β}(z) = Σ_{k≥0} (γ)_k z^k / (k! Γ(αk + β))
//! ```
//!
//! Evaluation dispatches between two regimes:
//!
//! * a power series with term-ratio stopping, accepted only when the
//!   cancellation it suffers (ratio of the sum of |terms| to |sum|) leaves
//!   the requested accuracy intact;
//! * the inverse Laplace representation
//!   `E^γ_{α,β}(z) = (1/2πi) ∫ e^s s^{αγ−β} (s^α − z)^{−γ} ds`
//!   evaluated with the trapezoidal rule on an optimally parameterised
//!   parabolic contour. For γ = 1 the contour may pass between the poles
//!   `s* = z^{1/α}` (their residues are added back); otherwise it stays to the
//!   right of every branch point.
//!
//! For α = 1 and Re z < 0 the Kummer transformation
//! `E^γ_{1,β}(z) = e^z E^{β−γ}_{1,β}(−z)` turns an alternating series into a
//! well-conditioned one.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::{ln_gamma_signed, rgamma};
use crate::error::{Error, Result};

/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Stop once the next term is below this fraction of the partial sum.
const SERIES_STOP_RATIO: f64 = 1e-16;

/// Per-term relative error assumed when certifying a series result.
const TERM_ROUNDING: f64 = 1e-15;

/// Accuracy the dispatcher aims for.
const TARGET_ACCURACY: f64 = 1e-12;

/// Accuracy below which the dispatcher gives up.
const CERTIFIED_ACCURACY: f64 = 1e-10;

/// ln(2^-52).
const LOG_EPS_MACH: f64 = -36.043_653_389_117_154;

/// Parameters `(α, β, γ)` of `E^γ_{α,β}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct MlParams {
    alpha: f64,
    beta: f64,
    gamma_p: f64,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: f64,
    #[serde(default = "one")]
    beta: f64,
    #[serde(default = "one")]
    gamma_p: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawParams> for MlParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        MlParams::new(raw.alpha, raw.beta, raw.gamma_p)
    }
}

impl MlParams {
    /// Three-parameter form. Requires `α > 0`, `γ > 0`, finite `β`.
    pub fn new(alpha: f64, beta: f64, gamma_p: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Mittag-Leffler alpha must be > 0, got {alpha}"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Mittag-Leffler beta must be finite, got {beta}"
            )));
        }
        if !(gamma_p > 0.0) || !gamma_p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Prabhakar exponent gamma must be > 0, got {gamma_p}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            gamma_p,
        })
    }

    /// Classical `E_α`.
    pub fn classical(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0, 1.0)
    }

    /// Two-parameter `E_{α,β}`.
    pub fn two(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma_p(&self) -> f64 {
        self.gamma_p
    }
}

/// Which regime produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `E_1(z) = e^z`, returned directly.
    Elementary,
    Series,
    KummerSeries,
    Contour,
}

/// Result of a series summation together with its cancellation estimate.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: Complex64,
    /// Sum of term magnitudes; `abs_sum / |value|` bounds the amplification of
    /// per-term rounding.
    pub abs_sum: f64,
    pub terms: usize,
}

impl SeriesSum {
    /// Estimated relative error from rounding in the individual terms.
    pub fn relative_error_estimate(&self) -> f64 {
        let mag = self.value.norm();
        if mag == 0.0 {
            return if self.abs_sum == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
        }
        TERM_ROUNDING * self.abs_sum / mag
    }
}

/// `E^γ_{α,β}(z)` for complex `z`.
///
/// ```
/// use fracivp::specfun::{mittag_leffler, MlParams};
/// use num_complex::Complex64;
/// let e = mittag_leffler(MlParams::classical(1.0).unwrap(), Complex64::new(1.0, 0.0)).unwrap();
/// assert!((e.re - std::f64::consts::E).abs() < 1e-14);
/// ```
pub fn mittag_leffler(params: MlParams, z: Complex64) -> Result<Complex64> {
    mittag_leffler_with_regime(params, z).map(|(v, _)| v)
}

/// `E^γ_{α,β}(x)` for real `x`.
pub fn mittag_leffler_real(params: MlParams, x: f64) -> Result<f64> {
    mittag_leffler(params, Complex64::new(x, 0.0)).map(|v| v.re)
}

/// Like [`mittag_leffler`] but also reports the regime that was used.
pub fn mittag_leffler_with_regime(params: MlParams, z: Complex64) -> Result<(Complex64, Regime)> {
    let MlParams {
        alpha,
        beta,
        gamma_p,
    } = params;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!(
            "Mittag-Leffler argument must be finite, got {z}"
        )));
    }
    if z.norm() == 0.0 {
        return Ok((Complex64::new(rgamma(beta), 0.0), Regime::Series));
    }

    if alpha == 1.0 && beta == 1.0 && gamma_p == 1.0 {
        return Ok((z.exp(), Regime::Elementary));
    }

    let real_input = z.im == 0.0;
    let finish = |v: Complex64| {
        if real_input {
            Complex64::new(v.re, 0.0)
        } else {
            v
        }
    };

    if alpha == 1.0 && z.re < 0.0 {
        if let Ok(s) = series(alpha, beta, beta - gamma_p, -z) {
            if s.relative_error_estimate() <= TARGET_ACCURACY {
                return Ok((finish(z.exp() * s.value), Regime::KummerSeries));
            }
        }
    }

    let series_result = if series_is_affordable(alpha, z.norm()) {
        Some(series(alpha, beta, gamma_p, z))
    } else {
        None
    };
    if let Some(Ok(s)) = &series_result {
        if s.relative_error_estimate() <= TARGET_ACCURACY {
            return Ok((finish(s.value), Regime::Series));
        }
    }

    match contour(alpha, beta, gamma_p, z) {
        Ok(v) => Ok((finish(v), Regime::Contour)),
        Err(contour_err) => match series_result {
            Some(Ok(s)) if s.relative_error_estimate() <= CERTIFIED_ACCURACY => {
                Ok((finish(s.value), Regime::Series))
            }
            _ => Err(contour_err),
        },
    }
}

/// Rough index of the largest series term; beyond the cap the series is not tried.
fn series_is_affordable(alpha: f64, abs_z: f64) -> bool {
    let peak = abs_z.powf(1.0 / alpha) / alpha;
    peak.is_finite() && peak < (MAX_SERIES_TERMS / 2) as f64
}

/// Power series `Σ (g)_k z^k / (k! Γ(αk+β))` with an arbitrary real `g`.
///
/// The rising factorial ratio `(g)_k / k!` is carried iteratively.
pub fn series(alpha: f64, beta: f64, g: f64, z: Complex64) -> Result<SeriesSum> {
    let ln_z = z.ln();
    let mut coeff = 1.0_f64;
    let mut zpow = Complex64::new(1.0, 0.0);
    let mut use_log = false;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0_f64;
    let mut prev_mag = f64::INFINITY;

    for k in 0..MAX_SERIES_TERMS {
        let arg = alpha * k as f64 + beta;
        if !use_log && (arg > 170.0 || zpow.norm() > 1e250) {
            use_log = true;
        }
        let term = if coeff == 0.0 {
            Complex64::new(0.0, 0.0)
        } else if use_log {
            let (lg, sign) = ln_gamma_signed(arg);
            if lg.is_infinite() {
                Complex64::new(0.0, 0.0)
            } else {
                let mag_ln = k as f64 * ln_z + (coeff.abs().ln() - lg);
                mag_ln.exp() * (sign * coeff.signum())
            }
        } else {
            zpow * (coeff * rgamma(arg))
        };
        if !term.re.is_finite() || !term.im.is_finite() {
            return Err(Error::NonConvergence {
                what: "Mittag-Leffler series",
                detail: format!("term {k} overflowed for z = {z}"),
            });
        }
        sum += term;
        let mag = term.norm();
        abs_sum += mag;

        if k > 0 && arg > 0.0 && mag <= SERIES_STOP_RATIO * sum.norm() && mag <= prev_mag {
            return Ok(SeriesSum {
                value: sum,
                abs_sum,
                terms: k + 1,
            });
        }
        prev_mag = mag;
        coeff *= (g + k as f64) / (k + 1) as f64;
        if coeff == 0.0 && k as f64 + 1.0 > -g {
            // (g)_k vanished: g is a non-positive integer and the series is a polynomial.
            return Ok(SeriesSum {
                value: sum,
                abs_sum,
                terms: k + 1,
            });
        }
        if !use_log {
            zpow *= z;
        }
    }
    Err(Error::NonConvergence {
        what: "Mittag-Leffler series",
        detail: format!("no convergence within {MAX_SERIES_TERMS} terms for z = {z}"),
    })
}

/// Contour parameters for the trapezoidal rule on `s(u) = μ(iu + 1)²`.
#[derive(Debug, Clone, Copy)]
struct ContourParams {
    mu: f64,
    h: f64,
    n: usize,
}

/// Inverse-Laplace evaluation on an optimal parabolic contour.
pub fn contour(alpha: f64, beta: f64, g: f64, z: Complex64) -> Result<Complex64> {
    let theta = z.arg();
    let k_min = (-alpha / 2.0 - theta / (2.0 * PI)).ceil() as i64;
    let k_max = (alpha / 2.0 - theta / (2.0 * PI)).floor() as i64;
    let radius = z.norm().powf(1.0 / alpha);

    let simple_poles = g == 1.0;
    let raw_poles: Vec<Complex64> = (k_min..=k_max)
        .map(|k| Complex64::from_polar(radius, (theta + 2.0 * k as f64 * PI) / alpha))
        .collect();
    // Branch points (γ ≠ 1) must stay left of the contour. Shifting the
    // contour origin to the rightmost one keeps the round-off threshold
    // relative to the size of the result, e^{Re s*}.
    let shift = if simple_poles {
        0.0
    } else {
        raw_poles.iter().map(|s| s.re).fold(0.0, f64::max)
    };
    let phi_of = |s: Complex64| {
        let w = s - shift;
        (w.re + w.norm()) / 2.0
    };
    let mut poles: Vec<(f64, Complex64)> = raw_poles
        .into_iter()
        .map(|s| (phi_of(s), s))
        .filter(|(phi, _)| *phi > 1e-15)
        .collect();
    poles.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Singularities: the branch point at the origin first, then the poles by
    // increasing φ.
    let mut s_star = vec![Complex64::new(0.0, 0.0)];
    let mut phi = vec![0.0];
    for (p, s) in &poles {
        s_star.push(*s);
        phi.push(*p);
    }
    let n_sing = s_star.len();
    phi.push(f64::INFINITY);

    let mut p_strength = vec![g; n_sing];
    p_strength[0] = (-2.0 * (alpha * g - beta + 1.0)).max(0.0);
    let mut q_strength = vec![g; n_sing];
    q_strength[n_sing - 1] = f64::INFINITY;

    let mut log_eps = (1e-15_f64).ln();
    let limit_log_eps = CERTIFIED_ACCURACY.ln();

    let (region, params) = loop {
        let threshold = log_eps - LOG_EPS_MACH;
        let mut best: Option<(usize, ContourParams)> = None;
        for j in 0..n_sing {
            let admissible = phi[j] < threshold && phi[j] < phi[j + 1];
            if !admissible || (!simple_poles && j != n_sing - 1) {
                continue;
            }
            let candidate = if j < n_sing - 1 {
                optimal_param_bounded(phi[j], phi[j + 1], p_strength[j], q_strength[j], log_eps)
            } else {
                optimal_param_unbounded(phi[j], p_strength[j], log_eps)
            };
            if let Some(c) = candidate {
                if best.is_none_or(|(_, b)| c.n < b.n) {
                    best = Some((j, c));
                }
            }
        }
        match best {
            Some((j, c)) if c.n <= 200 => break (j, c),
            _ => {
                log_eps += 10f64.ln();
                if log_eps > limit_log_eps {
                    return Err(Error::NonConvergence {
                        what: "Mittag-Leffler contour",
                        detail: format!(
                            "no admissible contour for alpha = {alpha}, beta = {beta}, gamma = {g}, z = {z}"
                        ),
                    });
                }
            }
        }
    };

    let ContourParams { mu, h, n } = params;
    let exponent = alpha * g - beta;
    let mut acc = Complex64::new(0.0, 0.0);
    let i = Complex64::i();
    for k in -(n as i64)..=(n as i64) {
        let u = h * k as f64;
        let s = shift + mu * (i * u + 1.0).powi(2);
        let ds = Complex64::new(-2.0 * mu * u, 2.0 * mu);
        let ln_s = s.ln();
        let s_alpha = (alpha * ln_s).exp();
        let ln_term = s + exponent * ln_s - g * (s_alpha - z).ln();
        acc += ln_term.exp() * ds;
    }
    let integral = acc * h / (2.0 * PI * i);

    let mut residues = Complex64::new(0.0, 0.0);
    for s in &s_star[region + 1..] {
        residues += s.powc(Complex64::new(1.0 - beta, 0.0)) * s.exp() / alpha;
    }
    let value = integral + residues;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonConvergence {
            what: "Mittag-Leffler contour",
            detail: format!("value overflowed for z = {z}"),
        });
    }
    Ok(value)
}

fn optimal_param_bounded(
    phi_j: f64,
    phi_j1: f64,
    p: f64,
    q: f64,
    log_eps: f64,
) -> Option<ContourParams> {
    const FAC: f64 = 1.01;
    let f_max = (log_eps - LOG_EPS_MACH).exp();
    let sq_phi_j = phi_j.sqrt();
    let threshold = 2.0 * (log_eps - LOG_EPS_MACH).sqrt();
    let sq_phi_j1 = phi_j1.sqrt().min(threshold - sq_phi_j);

    let (sq_bar_j, sq_bar_j1, f_bar) = if p < 1e-14 && q < 1e-14 {
        (sq_phi_j, sq_phi_j1, 1.0)
    } else if p < 1e-14 {
        let f_min = if sq_phi_j > 0.0 {
            FAC * (sq_phi_j / (sq_phi_j1 - sq_phi_j)).powf(q)
        } else {
            FAC
        };
        if f_min >= f_max {
            return None;
        }
        let f_bar = f_min + f_min / f_max * (f_max - f_min);
        let fq = f_bar.powf(-1.0 / q);
        (
            sq_phi_j,
            (2.0 * sq_phi_j1 - fq * sq_phi_j) / (2.0 + fq),
            f_bar,
        )
    } else if q < 1e-14 {
        let f_min = FAC * (sq_phi_j1 / (sq_phi_j1 - sq_phi_j)).powf(p);
        if f_min >= f_max {
            return None;
        }
        let f_bar = f_min + f_min / f_max * (f_max - f_min);
        let fp = f_bar.powf(-1.0 / p);
        (
            (2.0 * sq_phi_j + fp * sq_phi_j1) / (2.0 - fp),
            sq_phi_j1,
            f_bar,
        )
    } else {
        let mut f_min = FAC * (sq_phi_j + sq_phi_j1) / (sq_phi_j1 - sq_phi_j).powf(p.max(q));
        if f_min >= f_max {
            return None;
        }
        f_min = f_min.max(1.5);
        let f_bar = f_min + f_min / f_max * (f_max - f_min);
        let fp = f_bar.powf(-1.0 / p);
        let fq = f_bar.powf(-1.0 / q);
        let w = -phi_j1 / log_eps;
        let den = 2.0 + w - (1.0 + w) * fp + fq;
        let bar_j = ((2.0 + w + fq) * sq_phi_j + fp * sq_phi_j1) / den;
        let bar_j1 = (-(1.0 + w) * fq * sq_phi_j + (2.0 + w - (1.0 + w) * fp) * sq_phi_j1) / den;
        (bar_j, bar_j1, f_bar)
    };

    let log_eps = log_eps - f_bar.ln();
    let w = -sq_bar_j1 * sq_bar_j1 / log_eps;
    let mu = (((1.0 + w) * sq_bar_j + sq_bar_j1) / (2.0 + w)).powi(2);
    let h = -2.0 * PI / log_eps * (sq_bar_j1 - sq_bar_j) / ((1.0 + w) * sq_bar_j + sq_bar_j1);
    let n = ((1.0 - log_eps / mu).sqrt() / h).ceil();
    if !(mu > 0.0) || !(h > 0.0) || !n.is_finite() {
        return None;
    }
    Some(ContourParams {
        mu,
        h,
        n: n as usize,
    })
}

fn optimal_param_unbounded(phi_j: f64, p: f64, log_eps: f64) -> Option<ContourParams> {
    let sq_phi_j = phi_j.sqrt();
    let mut phi_bar = if phi_j > 0.0 { phi_j * 1.01 } else { 0.01 };
    let mut sq_phi_bar = phi_bar.sqrt();
    const F_MIN: f64 = 1.0;
    const F_MAX: f64 = 10.0;
    const F_TAR: f64 = 5.0;

    let mut n;
    let mut a;
    let mut sq_mu;
    let mut iterations = 0;
    loop {
        let log_eps_phi = log_eps / phi_bar;
        n = (phi_bar / PI * (1.0 - 3.0 * log_eps_phi / 2.0 + (1.0 - 2.0 * log_eps_phi).sqrt()))
            .ceil();
        a = PI * n / phi_bar;
        sq_mu = sq_phi_bar * (4.0 - a).abs() / (7.0 - (1.0 + 12.0 * a).sqrt()).abs();
        let f_bar = ((sq_phi_bar - sq_phi_j) / sq_mu).powf(-p);
        let done = p < 1e-14 || (F_MIN < f_bar && f_bar < F_MAX);
        iterations += 1;
        if done || iterations > 100 {
            break;
        }
        sq_phi_bar = F_TAR.powf(-1.0 / p) * sq_mu + sq_phi_j;
        phi_bar = sq_phi_bar * sq_phi_bar;
    }
    let mut mu = sq_mu * sq_mu;
    let mut h = (-3.0 * a - 2.0 + 2.0 * (1.0 + 12.0 * a).sqrt()) / (4.0 - a) / n;

    let threshold = log_eps - LOG_EPS_MACH;
    if mu > threshold {
        let q = if p.abs() < 1e-14 {
            0.0
        } else {
            F_TAR.powf(-1.0 / p) * mu.sqrt()
        };
        let phi_bar = (q + sq_phi_j).powi(2);
        if phi_bar < threshold {
            let w = (LOG_EPS_MACH / (LOG_EPS_MACH - log_eps)).sqrt();
            let u = (-phi_bar / LOG_EPS_MACH).sqrt();
            mu = threshold;
            n = (w * log_eps / 2.0 / PI / (u * w - 1.0)).ceil();
            h = w / n;
        } else {
            return None;
        }
    }
    if !(mu > 0.0) || !(h > 0.0) || !n.is_finite() || n < 1.0 {
        return None;
    }
    Some(ContourParams {
        mu,
        h,
        n: n as usize,
    })
}
