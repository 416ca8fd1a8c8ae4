//! Can a kernel honor an arbitrary initial condition?
//!
//! Two independent tests are run. On the Laplace side the limit
//! `lim_{s→∞} [s ψ(s, α)]⁻¹` must vanish; on the time side the kernel must
//! blow up as `t → 0⁺`. The two verdicts are expected to agree.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernels::{KernelKind, KernelSpec};
use crate::transforms::{initial_value_limit, FnLaplace, LimitEstimate};

/// `|limit| < ZERO_TOLERANCE` (and converged) counts as a vanishing limit.
pub const ZERO_TOLERANCE: f64 = 1e-8;
/// Tail log-log slope below which a kernel is called singular.
pub const SINGULAR_SLOPE: f64 = -0.01;
/// Probe times `10^{-1} .. 10^{-PROBE_DECADES}`.
pub const PROBE_DECADES: i32 = 12;
const SLOPE_FIT_POINTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Admissible,
    Inadmissible,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Admissible => "admissible",
            Verdict::Inadmissible => "inadmissible",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Singularity {
    Singular,
    Bounded,
}

impl std::fmt::Display for Singularity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Singularity::Singular => "singular",
            Singularity::Bounded => "bounded",
        })
    }
}

/// Outcome of sampling `Ψ(t)` towards `t = 0⁺`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityProbe {
    pub class: Singularity,
    /// `Ψ` at the smallest probe time (`+∞` for the delta kernel).
    pub boundary_value: f64,
    /// Least-squares slope of `ln Ψ` against `ln t` over the last probe points.
    pub slope: f64,
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub kernel: KernelSpec,
    pub laplace_limit: LimitEstimate,
    pub laplace_verdict: Verdict,
    pub analytic_expectation: Option<f64>,
    pub singularity_probe: SingularityProbe,
    pub consistent: bool,
}

/// `lim_{s→∞} [s ψ(s, α)]⁻¹`, estimated as the initial value of
/// `F(s) = 1 / (s² ψ(s, α))`.
pub fn check_laplace_condition(spec: &KernelSpec) -> Result<LimitEstimate> {
    let spec = *spec;
    let f = FnLaplace::new(
        format!("[s psi]^-1 / s for {}", spec.label()),
        move |s: Complex64| Ok(1.0 / (s * s * spec.laplace_continued(s)?)),
    );
    initial_value_limit(&f)
}

/// Closed-form value of `lim_{s→∞} [s ψ]⁻¹` where one is known.
pub fn analytic_expectation(spec: &KernelSpec) -> Option<f64> {
    if spec.is_classical() {
        return Some(0.0);
    }
    let alpha = spec.alpha();
    match spec.kind() {
        KernelKind::Caputo => Some(0.0),
        KernelKind::CaputoFabrizio | KernelKind::AtanganaBaleanu => {
            Some((1.0 - alpha) / spec.m_norm())
        }
        KernelKind::Prabhakar => {
            let beta = spec.prabhakar_params()?.beta;
            if beta < 1.0 {
                Some(0.0)
            } else if beta == 1.0 {
                Some(1.0 - alpha)
            } else {
                Some(f64::INFINITY)
            }
        }
    }
}

pub fn laplace_verdict(limit: &LimitEstimate) -> Verdict {
    if limit.converged && limit.value.abs() < ZERO_TOLERANCE {
        Verdict::Admissible
    } else {
        Verdict::Inadmissible
    }
}

/// Sample `Ψ(t_j)`, `t_j = 10^{−j}`, `j = 1..12`, and classify the growth.
pub fn probe_singularity(spec: &KernelSpec) -> Result<SingularityProbe> {
    if spec.is_classical() {
        return Ok(SingularityProbe {
            class: Singularity::Singular,
            boundary_value: f64::INFINITY,
            slope: f64::NEG_INFINITY,
            samples: Vec::new(),
        });
    }
    let samples = (1..=PROBE_DECADES)
        .map(|j| {
            let t = 10f64.powi(-j);
            Ok((t, spec.time(t)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = &samples[samples.len() - SLOPE_FIT_POINTS..];
    let slope = log_log_slope(tail);
    let first = tail[0].1;
    let boundary_value = tail[tail.len() - 1].1;
    let grows = boundary_value > first;
    let class = if slope < SINGULAR_SLOPE && grows {
        Singularity::Singular
    } else {
        Singularity::Bounded
    };
    Ok(SingularityProbe {
        class,
        boundary_value,
        slope,
        samples,
    })
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    if points.iter().any(|&(_, v)| !(v > 0.0)) {
        return f64::NAN;
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Both checks together.
pub fn full_report(spec: &KernelSpec) -> Result<AdmissibilityReport> {
    let laplace_limit = check_laplace_condition(spec)?;
    let laplace_verdict = laplace_verdict(&laplace_limit);
    let singularity_probe = probe_singularity(spec)?;
    let consistent = (laplace_verdict == Verdict::Admissible)
        == (singularity_probe.class == Singularity::Singular);
    Ok(AdmissibilityReport {
        kernel: *spec,
        laplace_limit,
        laplace_verdict,
        analytic_expectation: analytic_expectation(spec),
        singularity_probe,
        consistent,
    })
}

/// One kernel family of the verdict table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Caputo,
    CaputoFabrizio,
    AtanganaBaleanu,
    /// `γ = 1`, `λ = −κ_α` (the choice that turns `β = 1` into AB).
    Prabhakar {
        beta: f64,
    },
}

impl Family {
    pub fn spec(self, alpha: f64) -> Result<KernelSpec> {
        match self {
            Family::Caputo => KernelSpec::caputo(alpha),
            Family::CaputoFabrizio => KernelSpec::caputo_fabrizio(alpha),
            Family::AtanganaBaleanu => KernelSpec::atangana_baleanu(alpha),
            Family::Prabhakar { beta } => KernelSpec::prabhakar_ab_aligned(alpha, beta, 1.0, 1.0),
        }
    }

    pub fn label(self) -> String {
        match self {
            Family::Caputo => "caputo".into(),
            Family::CaputoFabrizio => "caputo-fabrizio".into(),
            Family::AtanganaBaleanu => "atangana-baleanu".into(),
            Family::Prabhakar { beta } => format!("prabhakar(beta={beta})"),
        }
    }

    /// Verdict predicted by the closed-form limit.
    pub fn expected(self) -> Verdict {
        match self {
            Family::Caputo => Verdict::Admissible,
            Family::Prabhakar { beta } if beta < 1.0 => Verdict::Admissible,
            _ => Verdict::Inadmissible,
        }
    }
}

pub const TABLE_FAMILIES: [Family; 7] = [
    Family::Caputo,
    Family::CaputoFabrizio,
    Family::AtanganaBaleanu,
    Family::Prabhakar { beta: 0.5 },
    Family::Prabhakar { beta: 0.8 },
    Family::Prabhakar { beta: 1.0 },
    Family::Prabhakar { beta: 1.5 },
];

pub const TABLE_ALPHAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub family: String,
    pub alpha: f64,
    pub laplace_limit: f64,
    pub converged: bool,
    pub verdict: Verdict,
    pub expected: Verdict,
    pub singularity: Singularity,
    pub boundary_value: f64,
    pub consistent: bool,
}

/// Full report for every `(family, α)` pair, rows in family-major order.
pub fn verdict_table(families: &[Family], alphas: &[f64]) -> Result<Vec<VerdictRow>> {
    let cells: Vec<(Family, f64)> = families
        .iter()
        .flat_map(|&f| alphas.iter().map(move |&a| (f, a)))
        .collect();
    cells
        .par_iter()
        .map(|&(family, alpha)| {
            let report = full_report(&family.spec(alpha)?)?;
            Ok(VerdictRow {
                family: family.label(),
                alpha,
                laplace_limit: report.laplace_limit.value,
                converged: report.laplace_limit.converged,
                verdict: report.laplace_verdict,
                expected: family.expected(),
                singularity: report.singularity_probe.class,
                boundary_value: report.singularity_probe.boundary_value,
                consistent: report.consistent,
            })
        })
        .collect()
}

/// The headline table: every family in [`TABLE_FAMILIES`] at α = 0.1, …, 0.9.
pub fn reproduce_verdicts() -> Result<Vec<VerdictRow>> {
    verdict_table(&TABLE_FAMILIES, &TABLE_ALPHAS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (1..=6)
            .map(|j| {
                let t = 10f64.powi(-j);
                (t, 3.0 * t.powf(-0.4))
            })
            .collect();
        assert!((log_log_slope(&pts) + 0.4).abs() < 1e-12);
    }

    #[test]
    fn classical_is_trivially_admissible() {
        let ab = KernelSpec::atangana_baleanu(1.0).unwrap();
        let r = full_report(&ab).unwrap();
        assert_eq!(r.laplace_verdict, Verdict::Admissible);
        assert_eq!(r.singularity_probe.class, Singularity::Singular);
        assert!(r.consistent);
    }
}
