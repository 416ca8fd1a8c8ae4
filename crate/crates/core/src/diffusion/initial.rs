use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Initial profile `φ(x)` with its Fourier transform `φ̂(k) = ∫ φ(x) e^{−ikx} dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawInitial")]
pub enum InitialCondition {
    Delta,
    /// Unit-mass Gaussian of standard deviation `sigma0`.
    Gaussian {
        sigma0: f64,
    },
    /// Indicator of `[−halfwidth, halfwidth]`.
    Box {
        halfwidth: f64,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawInitial {
    Delta,
    Gaussian {
        #[serde(default = "one")]
        sigma0: f64,
    },
    Box {
        halfwidth: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawInitial> for InitialCondition {
    type Error = Error;

    fn try_from(raw: RawInitial) -> Result<Self> {
        match raw {
            RawInitial::Delta => Ok(Self::Delta),
            RawInitial::Gaussian { sigma0 } => Self::gaussian(sigma0),
            RawInitial::Box { halfwidth } => Self::boxcar(halfwidth),
        }
    }
}

impl InitialCondition {
    pub fn gaussian(sigma0: f64) -> Result<Self> {
        if !(sigma0 > 0.0) || !sigma0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma0 must be > 0, got {sigma0}"
            )));
        }
        Ok(Self::Gaussian { sigma0 })
    }

    pub fn boxcar(halfwidth: f64) -> Result<Self> {
        if !(halfwidth > 0.0) || !halfwidth.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "box halfwidth must be > 0, got {halfwidth}"
            )));
        }
        Ok(Self::Box { halfwidth })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Delta => "delta",
            Self::Gaussian { .. } => "gaussian",
            Self::Box { .. } => "box",
        }
    }

    /// `φ̂(k)`; real because every profile here is even.
    pub fn fourier(&self, k: f64) -> f64 {
        match *self {
            Self::Delta => 1.0,
            Self::Gaussian { sigma0 } => (-0.5 * sigma0 * sigma0 * k * k).exp(),
            Self::Box { halfwidth } => {
                if k == 0.0 {
                    2.0 * halfwidth
                } else {
                    2.0 * (k * halfwidth).sin() / k
                }
            }
        }
    }

    /// `∫ φ dx = φ̂(0)`.
    pub fn mass(&self) -> f64 {
        self.fourier(0.0)
    }

    /// Pointwise `φ(x)`; `None` for the delta. The box takes the midpoint
    /// value `1/2` on its edges.
    pub fn profile(&self, x: f64) -> Option<f64> {
        match *self {
            Self::Delta => None,
            Self::Gaussian { sigma0 } => {
                let z = x / sigma0;
                Some((-0.5 * z * z).exp() / (sigma0 * (2.0 * PI).sqrt()))
            }
            Self::Box { halfwidth } => Some(match x.abs() {
                a if a < halfwidth => 1.0,
                a if a == halfwidth => 0.5,
                _ => 0.0,
            }),
        }
    }

    /// Twice differentiable, as the shifted formulation `χ = W − φ` needs.
    pub fn is_smooth(&self) -> bool {
        matches!(self, Self::Gaussian { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masses() {
        assert_eq!(InitialCondition::Delta.mass(), 1.0);
        assert_eq!(InitialCondition::gaussian(0.3).unwrap().mass(), 1.0);
        assert_eq!(InitialCondition::boxcar(1.5).unwrap().mass(), 3.0);
    }

    #[test]
    fn validation() {
        assert!(InitialCondition::gaussian(0.0).is_err());
        assert!(InitialCondition::boxcar(-1.0).is_err());
        let bad: std::result::Result<InitialCondition, _> =
            serde_json::from_str(r#"{"kind":"box","halfwidth":0}"#);
        assert!(bad.is_err());
        let g: InitialCondition = serde_json::from_str(r#"{"kind":"gaussian"}"#).unwrap();
        assert_eq!(g, InitialCondition::Gaussian { sigma0: 1.0 });
    }
}
