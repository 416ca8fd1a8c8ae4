//! Gamma function on the real line and in the complex plane.
//!
//! Both paths share a 15-term Lanczos sum (g = 607/128). Positive integers
//! below 171 come from an exact factorial table, negative arguments go
//! through the reflection formula with an exactly reduced `sin(πx)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G_HALF: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest argument for which `Γ(x)` is finite in double precision.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn lanczos_sum(x: f64) -> f64 {
    let mut ser = LANCZOS_C0;
    for (j, c) in LANCZOS.iter().enumerate() {
        ser += c / (x + (j + 1) as f64);
    }
    ser
}

fn lanczos_sum_complex(z: Complex64) -> Complex64 {
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    for (j, c) in LANCZOS.iter().enumerate() {
        ser += *c / (z + (j + 1) as f64);
    }
    ser
}

/// `sin(πx)` with the argument reduced modulo 2 before scaling, so that
/// values near integers keep full relative accuracy.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]; fold onto [-1/2, 1/2] where sin is well conditioned.
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn factorial(n: usize) -> f64 {
    let mut acc = 1.0_f64;
    for k in 2..=n {
        acc *= k as f64;
    }
    acc
}

/// Γ(x) for x ≥ 1/2 via Lanczos, split so the power cannot overflow early.
fn gamma_lanczos(x: f64) -> f64 {
    let t = x + LANCZOS_G_HALF;
    let half_pow = t.powf(0.5 * (x + 0.5));
    SQRT_2PI * lanczos_sum(x) / x * half_pow * (half_pow * (-t).exp())
}

/// Real gamma function.
///
/// Returns [`Error::Pole`] at non-positive integers.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::InvalidParameter("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if (1.0..171.0).contains(&x) && x == x.floor() {
        return Ok(factorial(x as usize - 1));
    }
    if x > GAMMA_MAX_ARG {
        return Ok(f64::INFINITY);
    }
    if x >= 0.5 {
        Ok(gamma_lanczos(x))
    } else {
        // Γ(x)Γ(1−x) = π / sin(πx)
        let g = gamma_lanczos(1.0 - x);
        Ok(PI / (sin_pi(x) * g))
    }
}

/// Reciprocal gamma `1/Γ(x)`, which is entire: zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if (1.0..171.0).contains(&x) && x == x.floor() {
        return 1.0 / factorial(x as usize - 1);
    }
    if x > GAMMA_MAX_ARG {
        let (lg, _) = ln_gamma_signed(x);
        return (-lg).exp();
    }
    if x >= 0.5 {
        1.0 / gamma_lanczos(x)
    } else {
        sin_pi(x) * gamma_lanczos(1.0 - x) / PI
    }
}

/// `ln|Γ(x)|` together with the sign of `Γ(x)`.
///
/// At the poles the magnitude is `+∞` and the sign is reported as `+1`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 1.0);
    }
    if x >= 0.5 {
        let t = x + LANCZOS_G_HALF;
        let lg = (x + 0.5) * t.ln() - t + (SQRT_2PI * lanczos_sum(x) / x).ln();
        (lg, 1.0)
    } else {
        let s = sin_pi(x);
        let (lg1, _) = ln_gamma_signed(1.0 - x);
        (PI.ln() - s.abs().ln() - lg1, s.signum())
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma needs x > 0, got {x}")));
    }
    Ok(ln_gamma_signed(x).0)
}

/// Complex gamma function on the principal sheet.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return gamma(z.re).map(|v| Complex64::new(v, 0.0));
    }
    if z.re >= 0.5 {
        let t = z + LANCZOS_G_HALF;
        let ln_part = (z + 0.5) * t.ln() - t + LN_SQRT_2PI;
        Ok(ln_part.exp() * lanczos_sum_complex(z) / z)
    } else {
        let reflected = gamma_complex(Complex64::new(1.0, 0.0) - z)?;
        Ok(PI / ((PI * z).sin() * reflected))
    }
}

/// Argument of the gamma function, either on the real axis or off it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaArg {
    Real(f64),
    Complex(Complex64),
}

impl From<f64> for GammaArg {
    fn from(x: f64) -> Self {
        GammaArg::Real(x)
    }
}

impl From<Complex64> for GammaArg {
    fn from(z: Complex64) -> Self {
        GammaArg::Complex(z)
    }
}

/// Gamma function accepting either a real or a complex argument.
///
/// ```
/// use fracivp::specfun::gamma_fn;
/// let g = gamma_fn(0.5).unwrap();
/// assert!((g.re - std::f64::consts::PI.sqrt()).abs() < 1e-15);
/// assert!(gamma_fn(-2.0).is_err());
/// ```
pub fn gamma_fn(x: impl Into<GammaArg>) -> Result<Complex64> {
    match x.into() {
        GammaArg::Real(x) => gamma(x).map(|v| Complex64::new(v, 0.0)),
        GammaArg::Complex(z) => gamma_complex(z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poles_are_rejected() {
        for x in [0.0, -1.0, -2.0, -50.0] {
            assert!(matches!(gamma(x), Err(Error::Pole(_))));
            assert_eq!(rgamma(x), 0.0);
        }
        assert!(gamma_complex(Complex64::new(-3.0, 0.0)).is_err());
    }

    #[test]
    fn integers_are_exact() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert_eq!(gamma(11.0).unwrap(), 3_628_800.0);
    }

    #[test]
    fn sin_pi_near_integers() {
        assert_eq!(sin_pi(3.0), 0.0);
        let x = -169.000_1_f64;
        // x = -169 + d with d exact, so sin(πx) = -sin(πd)
        let d = x + 169.0;
        let expect = -(PI * d).sin();
        assert!((sin_pi(x) - expect).abs() <= 1e-15 * expect.abs());
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for x in [0.1, 0.7, 3.3, 20.5, 150.25] {
            let direct = gamma(x).unwrap().ln();
            assert!((ln_gamma(x).unwrap() - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
        let (lg, sign) = ln_gamma_signed(-0.5);
        assert_eq!(sign, -1.0);
        assert!((lg - (2.0 * PI.sqrt()).ln()).abs() < 1e-14);
    }

    #[test]
    fn large_arguments() {
        assert!(gamma(171.0).unwrap().is_finite());
        assert!(gamma(172.0).unwrap().is_infinite());
        assert!(rgamma(171.7) > 0.0 && rgamma(171.7) < 1e-308);
        assert_eq!(rgamma(200.0), 0.0);
    }
}
