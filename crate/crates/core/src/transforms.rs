//! Numerical inverse Laplace transform and the initial-value-theorem limit.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Laplace-domain function `F(s)`, analytic for `Re s > abscissa()`.
///
/// Inversion contours may also visit the left half-plane, so
/// implementations should evaluate their analytic continuation there and
/// only refuse points on the negative real axis.
pub trait LaplaceFunction: Sync {
    fn eval(&self, s: Complex64) -> Result<Complex64>;

    fn abscissa(&self) -> f64 {
        0.0
    }

    fn describe(&self) -> String;
}

/// A [`LaplaceFunction`] built from a closure.
pub struct FnLaplace<F> {
    f: F,
    abscissa: f64,
    meta: String,
}

impl<F> FnLaplace<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    pub fn new(meta: impl Into<String>, f: F) -> Self {
        Self {
            f,
            abscissa: 0.0,
            meta: meta.into(),
        }
    }

    pub fn with_abscissa(mut self, abscissa: f64) -> Self {
        self.abscissa = abscissa;
        self
    }
}

impl<F> LaplaceFunction for FnLaplace<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        (self.f)(s)
    }

    fn abscissa(&self) -> f64 {
        self.abscissa
    }

    fn describe(&self) -> String {
        self.meta.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InversionMethod {
    Talbot,
    GaverStehfest,
}

impl std::str::FromStr for InversionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "talbot" => Ok(Self::Talbot),
            "gaver-stehfest" | "stehfest" => Ok(Self::GaverStehfest),
            other => Err(Error::InvalidParameter(format!(
                "unknown inversion method '{other}'"
            ))),
        }
    }
}

/// Nodes on the fixed Talbot contour.
pub const TALBOT_NODES: usize = 32;
/// Order of the Gaver–Stehfest sum (even).
pub const STEHFEST_ORDER: usize = 14;
/// Relative gap above which the two inverters are flagged as disagreeing.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-4;

fn check_value(v: Complex64, s: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Inversion(format!("F is not finite at s = {s}")))
    }
}

/// `f(t)` from `F(s)` by the selected method.
pub fn invert_laplace<F>(f: &F, t: f64, method: InversionMethod) -> Result<f64>
where
    F: LaplaceFunction + ?Sized,
{
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("inversion needs t > 0, got {t}")));
    }
    match method {
        InversionMethod::Talbot => talbot(f, t),
        InversionMethod::GaverStehfest => gaver_stehfest(f, t),
    }
}

/// Fixed Talbot contour `s(θ) = r θ (cot θ + i)`, `r = 2M/(5t)`.
fn talbot<F>(f: &F, t: f64) -> Result<f64>
where
    F: LaplaceFunction + ?Sized,
{
    let shift = f.abscissa().max(0.0);
    let m = TALBOT_NODES;
    let r = 2.0 * m as f64 / (5.0 * t);

    let s0 = Complex64::new(r + shift, 0.0);
    let f0 = check_value(f.eval(s0)?, s0)?;
    let mut acc = 0.5 * (f0 * (r * t).exp()).re;
    for k in 1..m {
        let theta = k as f64 * PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let arg = s + shift;
        let v = f
            .eval(arg)
            .map_err(|e| Error::Inversion(format!("Talbot node {k} (s = {arg}): {e}")))?;
        let v = check_value(v, arg)?;
        acc += ((s * t).exp() * v * Complex64::new(1.0, sigma)).re;
    }
    Ok((shift * t).exp() * r / m as f64 * acc)
}

fn stehfest_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    let fact = |k: usize| (1..=k).fold(1.0_f64, |a, j| a * j as f64);
    (1..=n)
        .map(|k| {
            let lo = k.div_ceil(2);
            let hi = k.min(half);
            let sum: f64 = (lo..=hi)
                .map(|j| {
                    (j as f64).powi(half as i32) * fact(2 * j)
                        / (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k))
                })
                .sum();
            if (k + half).is_multiple_of(2) {
                sum
            } else {
                -sum
            }
        })
        .collect()
}

/// Gaver–Stehfest sum on the positive real axis.
fn gaver_stehfest<F>(f: &F, t: f64) -> Result<f64>
where
    F: LaplaceFunction + ?Sized,
{
    let a = LN_2 / t;
    let mut acc = 0.0;
    for (k, w) in stehfest_weights(STEHFEST_ORDER).iter().enumerate() {
        let s = Complex64::new((k + 1) as f64 * a, 0.0);
        let v = f
            .eval(s)
            .map_err(|e| Error::Inversion(format!("Stehfest node {} (s = {s}): {e}", k + 1)))?;
        acc += w * check_value(v, s)?.re;
    }
    Ok(a * acc)
}

/// Talbot value plus a Gaver–Stehfest cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckedInversion {
    pub value: f64,
    pub cross_check: f64,
    pub relative_difference: f64,
    pub disagreement: bool,
}

pub fn invert_checked<F>(f: &F, t: f64) -> Result<CheckedInversion>
where
    F: LaplaceFunction + ?Sized,
{
    let value = invert_laplace(f, t, InversionMethod::Talbot)?;
    let cross_check = invert_laplace(f, t, InversionMethod::GaverStehfest)?;
    let relative_difference = (value - cross_check).abs() / value.abs().max(f64::MIN_POSITIVE);
    Ok(CheckedInversion {
        value,
        cross_check,
        relative_difference,
        disagreement: relative_difference > CROSS_CHECK_TOLERANCE,
    })
}

/// How the samples `s F(s)` behaved as `s` grew.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitStatus {
    Converged,
    Divergent,
    Oscillating,
}

/// Estimate of `lim_{s→∞} s F(s)` along the positive real axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub converged: bool,
    pub status: LimitStatus,
    pub samples: Vec<(f64, f64)>,
    pub extrapolation_residual: f64,
}

/// Sampling grid and stopping tolerance for [`initial_value_limit_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    pub s0: f64,
    pub ratio: f64,
    pub points: usize,
    pub tolerance: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self {
            s0: 1e2,
            ratio: 10.0,
            points: 8,
            tolerance: 1e-8,
        }
    }
}

/// `lim_{s→∞} s F(s)` with the default grid `s_j = 10² · 10^j`, 8 points.
pub fn initial_value_limit<F>(f: &F) -> Result<LimitEstimate>
where
    F: LaplaceFunction + ?Sized,
{
    initial_value_limit_with(f, LimitOptions::default())
}

pub fn initial_value_limit_with<F>(f: &F, opts: LimitOptions) -> Result<LimitEstimate>
where
    F: LaplaceFunction + ?Sized,
{
    if opts.points < 4 || !(opts.s0 > 0.0) || !(opts.ratio > 1.0) || !(opts.tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bad limit options {opts:?}"
        )));
    }
    let samples = (0..opts.points)
        .map(|j| {
            let s = opts.s0 * opts.ratio.powi(j as i32);
            let v = f.eval(Complex64::new(s, 0.0))?;
            Ok((s, s * v.re))
        })
        .collect::<Result<Vec<_>>>()?;
    let ys: Vec<f64> = samples.iter().map(|&(_, y)| y).collect();

    if ys.iter().any(|y| !y.is_finite()) || diverges(&ys) {
        let last = *ys.last().expect("at least four samples");
        return Ok(LimitEstimate {
            value: if last < 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            },
            converged: false,
            status: LimitStatus::Divergent,
            samples,
            extrapolation_residual: f64::INFINITY,
        });
    }

    let scale = ys.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    if scale < f64::MIN_POSITIVE {
        // every sample is zero or subnormal
        return Ok(LimitEstimate {
            value: 0.0,
            converged: true,
            status: LimitStatus::Converged,
            samples,
            extrapolation_residual: scale,
        });
    }
    let unit: Vec<f64> = ys.iter().map(|y| y / scale).collect();
    let (value, residual) = wynn_epsilon(&unit);
    let (value, residual) = (value * scale, residual * scale);
    let converged = settles(&unit) && residual < opts.tolerance * value.abs().max(1.0);
    Ok(LimitEstimate {
        value,
        converged,
        status: if converged {
            LimitStatus::Converged
        } else {
            LimitStatus::Oscillating
        },
        samples,
        extrapolation_residual: residual,
    })
}

/// Growth without bound: the last three samples each more than double, or
/// the last four grow monotonically in magnitude with non-shrinking steps
/// (slow power-law growth that a geometric extrapolator would misread).
fn diverges(ys: &[f64]) -> bool {
    let n = ys.len();
    let mags: Vec<f64> = ys.iter().map(|y| y.abs()).collect();
    let doubling = mags[n - 4..].windows(2).all(|w| w[1] > 2.0 * w[0]);
    let tail = &ys[n - 4..];
    let same_sign = tail.iter().all(|y| *y > 0.0) || tail.iter().all(|y| *y < 0.0);
    let steps: Vec<f64> = mags[n - 4..].windows(2).map(|w| w[1] - w[0]).collect();
    let accelerating = steps.iter().all(|d| *d > 0.0) && steps.windows(2).all(|w| w[1] >= w[0]);
    doubling || (same_sign && accelerating)
}

/// The raw steps shrink over the tail, or have already vanished. A sequence
/// that keeps swinging is not extrapolated, even when Wynn's table returns
/// a finite anti-limit.
fn settles(ys: &[f64]) -> bool {
    let n = ys.len();
    let scale = ys.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    let steps: Vec<f64> = ys[n - 4..]
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .collect();
    steps.iter().all(|d| *d <= 1e-13 * scale) || steps.windows(2).all(|w| w[1] < w[0])
}

/// Wynn's epsilon algorithm. Returns the last entry of the highest even
/// column reached and the gap to the entry above it.
pub fn wynn_epsilon(seq: &[f64]) -> (f64, f64) {
    let scale = seq.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    let tiny = 1e-13 * scale.max(f64::MIN_POSITIVE);
    let mut prev = vec![0.0; seq.len() + 1];
    let mut cur = seq.to_vec();
    let mut best = cur.clone();
    let mut k = 0;
    while cur.len() >= 2 {
        if cur.windows(2).any(|w| (w[1] - w[0]).abs() <= tiny) {
            break;
        }
        let next: Vec<f64> = (0..cur.len() - 1)
            .map(|i| prev[i + 1] + 1.0 / (cur[i + 1] - cur[i]))
            .collect();
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 {
            if cur.len() < 2 {
                break;
            }
            best = cur.clone();
        }
    }
    let n = best.len();
    let residual = if n >= 2 {
        (best[n - 1] - best[n - 2]).abs()
    } else {
        f64::INFINITY
    };
    (best[n - 1], residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stehfest_weights_sum_to_zero() {
        let w = stehfest_weights(STEHFEST_ORDER);
        let sum: f64 = w.iter().sum();
        assert!(sum.abs() < 1e-6 * w.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    }

    #[test]
    fn wynn_handles_exact_geometric_tail() {
        let seq: Vec<f64> = (0..8).map(|j| 0.5 + 0.3 * 0.1f64.powi(j)).collect();
        let (v, r) = wynn_epsilon(&seq);
        assert!((v - 0.5).abs() < 1e-14 && r < 1e-14);
        let two: Vec<f64> = (0..8)
            .map(|j| 1.0 + 0.7 * 0.9f64.powi(j) - 0.2 * 0.3f64.powi(j))
            .collect();
        let (v, r) = wynn_epsilon(&two);
        assert!((v - 1.0).abs() < 1e-10, "{v} {r}");
    }

    #[test]
    fn divergence_rules() {
        assert!(diverges(&[1.0, 2.0, 3.0, 5.0, 11.0, 23.0, 47.0, 95.0]));
        let slow: Vec<f64> = (0..8).map(|j| 10f64.powf(0.05 * (2 + j) as f64)).collect();
        assert!(diverges(&slow));
        let settling: Vec<f64> = (0..8).map(|j| 1.0 - 0.5f64.powi(j)).collect();
        assert!(!diverges(&settling));
    }

    #[test]
    fn rejects_bad_time() {
        let f = FnLaplace::new("1/s", |s: Complex64| Ok(1.0 / s));
        assert!(invert_laplace(&f, 0.0, InversionMethod::Talbot).is_err());
    }
}
