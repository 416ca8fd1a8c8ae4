//! Fractional-derivative kernels in the time and Laplace domains.
//!
//! A derivative of Caputo type is `D^α f = Ψ(·, α) ∗ f′`. The four kernels
//! provided here are
//!
//! | kind               | Ψ(t, α)                                   | ψ(s, α)                                   |
//! |--------------------|-------------------------------------------|-------------------------------------------|
//! | Caputo             | t^{−α} / Γ(1−α)                           | s^{α−1}                                   |
//! | Caputo–Fabrizio    | M/(1−α) · exp(−κ t/τ)                     | M / ((1−α)s + α/τ)                        |
//! | Atangana–Baleanu   | M/(1−α) · E_α(−κ (t/τ)^α)                 | M s^{−1} / ((1−α) + α (sτ)^{−α})          |
//! | Prabhakar          | t^{β−1} E^γ_{α,β}(λ t^α) / (1−α)          | s^{αγ−β} / ((1−α)(s^α − λ)^γ)             |
//!
//! with `κ = α/(1−α)`. At `α = 1` every kernel is treated as the classical
//! first derivative: `ψ(s, 1) = 1` and the time-domain kernel is the Dirac
//! delta, which has no pointwise value.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::tanh_sinh;
use crate::specfun::{mittag_leffler_real, rgamma, MlParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    Caputo,
    #[serde(alias = "cf")]
    CaputoFabrizio,
    #[serde(alias = "ab")]
    AtanganaBaleanu,
    Prabhakar,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [
        KernelKind::Caputo,
        KernelKind::CaputoFabrizio,
        KernelKind::AtanganaBaleanu,
        KernelKind::Prabhakar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Caputo => "caputo",
            KernelKind::CaputoFabrizio => "caputo-fabrizio",
            KernelKind::AtanganaBaleanu => "atangana-baleanu",
            KernelKind::Prabhakar => "prabhakar",
        }
    }
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "caputo" => Ok(KernelKind::Caputo),
            "caputo-fabrizio" | "cf" => Ok(KernelKind::CaputoFabrizio),
            "atangana-baleanu" | "ab" => Ok(KernelKind::AtanganaBaleanu),
            "prabhakar" => Ok(KernelKind::Prabhakar),
            other => Err(Error::InvalidParameter(format!(
                "unknown kernel kind '{other}'"
            ))),
        }
    }
}

/// Extra parameters of the Prabhakar kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrabhakarParams {
    pub beta: f64,
    pub gamma_p: f64,
    pub lambda: f64,
}

/// An immutable, validated kernel description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelConfig", into = "KernelConfig")]
pub struct KernelSpec {
    kind: KernelKind,
    alpha: f64,
    tau: f64,
    m_norm: f64,
    prabhakar: Option<PrabhakarParams>,
}

/// Flat, serializable form of a [`KernelSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub kind: KernelKind,
    pub alpha: f64,
    #[serde(default = "default_one")]
    pub tau: f64,
    #[serde(default = "default_one")]
    pub m_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

fn default_one() -> f64 {
    1.0
}

impl TryFrom<KernelConfig> for KernelSpec {
    type Error = Error;

    fn try_from(c: KernelConfig) -> Result<Self> {
        let base = match c.kind {
            KernelKind::Prabhakar => {
                let beta = c
                    .beta
                    .ok_or_else(|| Error::InvalidParameter("prabhakar kernel needs beta".into()))?;
                let lambda = c.lambda.ok_or_else(|| {
                    Error::InvalidParameter("prabhakar kernel needs lambda".into())
                })?;
                KernelSpec::prabhakar(c.alpha, beta, c.gamma_p.unwrap_or(1.0), lambda)?
            }
            kind => {
                if c.beta.is_some() || c.gamma_p.is_some() || c.lambda.is_some() {
                    return Err(Error::InvalidParameter(format!(
                        "beta/gamma_p/lambda only apply to the prabhakar kernel, not {kind}"
                    )));
                }
                KernelSpec::new(kind, c.alpha)?
            }
        };
        base.with_tau(c.tau)?.with_m_norm(c.m_norm)
    }
}

impl From<KernelSpec> for KernelConfig {
    fn from(k: KernelSpec) -> Self {
        KernelConfig {
            kind: k.kind,
            alpha: k.alpha,
            tau: k.tau,
            m_norm: k.m_norm,
            beta: k.prabhakar.map(|p| p.beta),
            gamma_p: k.prabhakar.map(|p| p.gamma_p),
            lambda: k.prabhakar.map(|p| p.lambda),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "derivative order alpha must lie in (0, 1], got {alpha}"
        )))
    }
}

impl KernelSpec {
    /// Kernel of the given kind with default `τ = 1`, `M = 1`.
    ///
    /// Prabhakar kernels need their extra parameters; use
    /// [`KernelSpec::prabhakar`].
    pub fn new(kind: KernelKind, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if kind == KernelKind::Prabhakar {
            return Err(Error::InvalidParameter(
                "use KernelSpec::prabhakar to supply beta, gamma and lambda".into(),
            ));
        }
        Ok(Self {
            kind,
            alpha,
            tau: 1.0,
            m_norm: 1.0,
            prabhakar: None,
        })
    }

    pub fn caputo(alpha: f64) -> Result<Self> {
        Self::new(KernelKind::Caputo, alpha)
    }

    pub fn caputo_fabrizio(alpha: f64) -> Result<Self> {
        Self::new(KernelKind::CaputoFabrizio, alpha)
    }

    pub fn atangana_baleanu(alpha: f64) -> Result<Self> {
        Self::new(KernelKind::AtanganaBaleanu, alpha)
    }

    /// Prabhakar kernel `t^{β−1} E^γ_{α,β}(λ t^α) / (1−α)`.
    ///
    /// `β > 0` is required so that the kernel is locally integrable and its
    /// Laplace transform exists.
    pub fn prabhakar(alpha: f64, beta: f64, gamma_p: f64, lambda: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "prabhakar beta must be > 0, got {beta}"
            )));
        }
        if !(gamma_p > 0.0) || !gamma_p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "prabhakar gamma must be > 0, got {gamma_p}"
            )));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "prabhakar lambda must be finite, got {lambda}"
            )));
        }
        Ok(Self {
            kind: KernelKind::Prabhakar,
            alpha,
            tau: 1.0,
            m_norm: 1.0,
            prabhakar: Some(PrabhakarParams {
                beta,
                gamma_p,
                lambda,
            }),
        })
    }

    /// Prabhakar kernel with `λ = −κ_α τ^{−α}`, the value under which
    /// `β = γ = 1` reproduces the Atangana–Baleanu kernel (up to `M`).
    pub fn prabhakar_ab_aligned(alpha: f64, beta: f64, gamma_p: f64, tau: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if alpha >= 1.0 {
            return Self::prabhakar(alpha, beta, gamma_p, 0.0)?.with_tau(tau);
        }
        let kappa = alpha / (1.0 - alpha);
        Self::prabhakar(alpha, beta, gamma_p, -kappa * tau.powf(-alpha))?.with_tau(tau)
    }

    pub fn with_tau(mut self, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tau must be > 0, got {tau}"
            )));
        }
        self.tau = tau;
        Ok(self)
    }

    pub fn with_m_norm(mut self, m_norm: f64) -> Result<Self> {
        if !(m_norm > 0.0) || !m_norm.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "normalization M must be > 0, got {m_norm}"
            )));
        }
        self.m_norm = m_norm;
        Ok(self)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn m_norm(&self) -> f64 {
        self.m_norm
    }

    pub fn prabhakar_params(&self) -> Option<PrabhakarParams> {
        self.prabhakar
    }

    /// `α = 1`: the classical first derivative.
    pub fn is_classical(&self) -> bool {
        self.alpha == 1.0
    }

    /// `κ_α = α / (1 − α)`, defined only for `α < 1`.
    pub fn kappa(&self) -> Option<f64> {
        (self.alpha < 1.0).then(|| self.alpha / (1.0 - self.alpha))
    }

    /// `M / (1 − α)`: the value of the CF and AB kernels at `t = 0⁺`.
    pub fn plateau(&self) -> Option<f64> {
        match self.kind {
            KernelKind::CaputoFabrizio | KernelKind::AtanganaBaleanu if self.alpha < 1.0 => {
                Some(self.m_norm / (1.0 - self.alpha))
            }
            _ => None,
        }
    }

    /// Short human-readable label, e.g. `prabhakar(alpha=0.5, beta=0.8, ...)`.
    pub fn label(&self) -> String {
        match self.prabhakar {
            Some(p) => format!(
                "{}(alpha={}, beta={}, gamma={}, lambda={:.6})",
                self.kind, self.alpha, p.beta, p.gamma_p, p.lambda
            ),
            None => match self.kind {
                KernelKind::Caputo => format!("{}(alpha={})", self.kind, self.alpha),
                _ => format!(
                    "{}(alpha={}, M={}, tau={})",
                    self.kind, self.alpha, self.m_norm, self.tau
                ),
            },
        }
    }

    /// Time-domain kernel `Ψ(t, α)` for `t > 0`.
    pub fn time(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!(
                "kernel time argument must be > 0, got {t}"
            )));
        }
        if self.is_classical() {
            return Err(Error::DistributionalKernel);
        }
        let alpha = self.alpha;
        let kappa = alpha / (1.0 - alpha);
        match self.kind {
            KernelKind::Caputo => Ok(t.powf(-alpha) * rgamma(1.0 - alpha)),
            KernelKind::CaputoFabrizio => {
                Ok(self.m_norm / (1.0 - alpha) * (-kappa * t / self.tau).exp())
            }
            KernelKind::AtanganaBaleanu => {
                let arg = -kappa * (t / self.tau).powf(alpha);
                let e = mittag_leffler_real(MlParams::classical(alpha)?, arg)?;
                Ok(self.m_norm / (1.0 - alpha) * e)
            }
            KernelKind::Prabhakar => {
                let p = self.prabhakar.expect("prabhakar parameters present");
                let ml = MlParams::new(alpha, p.beta, p.gamma_p)?;
                let e = mittag_leffler_real(ml, p.lambda * t.powf(alpha))?;
                Ok(t.powf(p.beta - 1.0) * e / (1.0 - alpha))
            }
        }
    }

    /// Laplace-domain kernel `ψ(s, α)` for `Re s > 0`.
    pub fn laplace(&self, s: Complex64) -> Result<Complex64> {
        if !(s.re > 0.0) {
            return Err(Error::Domain(format!(
                "Laplace-domain kernel needs Re s > 0, got s = {s}"
            )));
        }
        self.laplace_continued(s)
    }

    /// Closed-form `ψ(s, α)` continued analytically (principal branch) to the
    /// whole plane cut along `s ≤ 0`. Inversion contours that bend into the
    /// left half-plane evaluate the kernel through this.
    pub fn laplace_continued(&self, s: Complex64) -> Result<Complex64> {
        if s.im == 0.0 && s.re <= 0.0 {
            return Err(Error::BranchCut(s));
        }
        if self.is_classical() {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let alpha = self.alpha;
        let one_minus = 1.0 - alpha;
        let value = match self.kind {
            KernelKind::Caputo => s.powf(alpha - 1.0),
            KernelKind::CaputoFabrizio => self.m_norm / (one_minus * s + alpha / self.tau),
            KernelKind::AtanganaBaleanu => {
                let st_neg_alpha = (s * self.tau).powf(-alpha);
                self.m_norm / (s * (one_minus + alpha * st_neg_alpha))
            }
            KernelKind::Prabhakar => {
                let p = self.prabhakar.expect("prabhakar parameters present");
                let ln_s = s.ln();
                let s_alpha = (alpha * ln_s).exp();
                let base = s_alpha - p.lambda;
                if base.norm() <= 1e-14 * p.lambda.abs().max(f64::MIN_POSITIVE) {
                    return Err(Error::LaplacePole(s));
                }
                ((alpha * p.gamma_p - p.beta) * ln_s - p.gamma_p * base.ln()).exp() / one_minus
            }
        };
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::LaplacePole(s));
        }
        Ok(value)
    }
}

/// `Ψ(t, α)` for the given kernel.
pub fn kernel_time(spec: &KernelSpec, t: f64) -> Result<f64> {
    spec.time(t)
}

/// `ψ(s, α)` for the given kernel, `Re s > 0`.
pub fn kernel_laplace(spec: &KernelSpec, s: Complex64) -> Result<Complex64> {
    spec.laplace(s)
}

/// Gelfand–Shilov distribution `G_ν(t) = t^{ν−1} H(t) / Γ(ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GelfandShilov {
    pub nu: f64,
}

impl GelfandShilov {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "nu must be finite, got {nu}"
            )));
        }
        Ok(Self { nu })
    }

    /// Pointwise value; only defined as a function for `ν > 0`.
    pub fn time(&self, t: f64) -> Result<f64> {
        if !(self.nu > 0.0) {
            return Err(Error::DistributionalKernel);
        }
        if t < 0.0 {
            return Ok(0.0);
        }
        if t == 0.0 {
            return Ok(match self.nu {
                nu if nu > 1.0 => 0.0,
                1.0 => 1.0,
                _ => f64::INFINITY,
            });
        }
        Ok(t.powf(self.nu - 1.0) * rgamma(self.nu))
    }

    /// `s^{−ν}` on the principal branch.
    pub fn laplace(&self, s: Complex64) -> Result<Complex64> {
        if s.im == 0.0 && s.re <= 0.0 {
            return Err(Error::BranchCut(s));
        }
        if self.nu == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        Ok(s.powf(-self.nu))
    }
}

/// `L[G_ν](s) = s^{−ν}`.
pub fn gelfand_shilov_laplace(g: GelfandShilov, s: Complex64) -> Result<Complex64> {
    g.laplace(s)
}

/// Required accuracy of [`convolve_gs`].
pub const CONVOLUTION_TOLERANCE: f64 = 1e-8;

/// `(G_μ ∗ G_ν)(t) = ∫_0^t G_μ(τ) G_ν(t − τ) dτ` by tanh-sinh quadrature.
///
/// Should equal `G_{μ+ν}(t)`; fails if the quadrature cannot certify
/// [`CONVOLUTION_TOLERANCE`].
pub fn convolve_gs(mu: f64, nu: f64, t: f64) -> Result<f64> {
    if !(mu > 0.0) || !(nu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "convolution orders must be > 0, got mu = {mu}, nu = {nu}"
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("convolution needs t > 0, got {t}")));
    }
    let scale = rgamma(mu) * rgamma(nu);
    let r = tanh_sinh(0.0, t, 1e-13, |a, b| a.powf(mu - 1.0) * b.powf(nu - 1.0))?;
    let value = r.value * scale;
    let err = r.error_estimate * scale;
    if err > CONVOLUTION_TOLERANCE * value.abs().max(1.0) {
        return Err(Error::Quadrature {
            tolerance: CONVOLUTION_TOLERANCE,
            estimate: err,
        });
    }
    Ok(value)
}
