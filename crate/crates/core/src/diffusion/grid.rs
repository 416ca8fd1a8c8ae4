use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric spatial grid `x_j = −L + j·dx`, `dx = 2L/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    #[serde(rename = "L", alias = "half_width")]
    pub half_width: f64,
    #[serde(rename = "N", alias = "points")]
    pub points: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            half_width: 40.0,
            points: 4096,
        }
    }
}

impl GridParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0) || !self.half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid half-width L must be > 0, got {}",
                self.half_width
            )));
        }
        if self.points < 8 || !self.points.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid size N must be a power of two >= 8, got {}",
                self.points
            )));
        }
        Ok(())
    }
}

/// Spatial grid with its conjugate wavenumbers `k_m = mπ/L`, `m = 0..=N/2`.
#[derive(Clone)]
pub struct Grid {
    params: GridParams,
    x: Vec<f64>,
    k: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid")
            .field("params", &self.params)
            .finish()
    }
}

impl Grid {
    pub fn new(params: GridParams) -> Result<Self> {
        params.validate()?;
        let n = params.points;
        let l = params.half_width;
        let dx = 2.0 * l / n as f64;
        let x = (0..n).map(|j| -l + j as f64 * dx).collect();
        let k = (0..=n / 2).map(|m| m as f64 * PI / l).collect();
        let fft = FftPlanner::new().plan_fft_inverse(n);
        Ok(Self { params, x, k, fft })
    }

    pub fn params(&self) -> GridParams {
        self.params
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Non-negative wavenumbers; negative ones follow by symmetry.
    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.params.half_width / self.params.points as f64
    }

    pub fn dk(&self) -> f64 {
        PI / self.params.half_width
    }

    /// `f(x_j) = (1/2π) ∫ f̂(k) e^{ikx_j} dk` for an even spectrum given on
    /// `k ≥ 0`. Returns the real part and the largest imaginary residue.
    pub fn inverse_even(&self, half_spectrum: &[f64]) -> (Vec<f64>, f64) {
        let n = self.params.points;
        assert_eq!(
            half_spectrum.len(),
            n / 2 + 1,
            "spectrum length must be N/2 + 1"
        );
        let mut buf: Vec<Complex64> = (0..n)
            .map(|m| {
                let v = half_spectrum[if m <= n / 2 { m } else { n - m }];
                // e^{i k_m x_j} = (−1)^m e^{2πi mj/N} since x_0 = −L
                Complex64::new(if m % 2 == 0 { v } else { -v }, 0.0)
            })
            .collect();
        self.fft.process(&mut buf);
        let scale = self.dk() / (2.0 * PI);
        let imag = buf.iter().fold(0.0_f64, |m, z| m.max((z.im * scale).abs()));
        (buf.into_iter().map(|z| z.re * scale).collect(), imag)
    }

    /// Trapezoid `∫ f dx` on the periodic grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.dx() * values.iter().sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(GridParams {
            half_width: 10.0,
            points: 100
        })
        .is_err());
        assert!(Grid::new(GridParams {
            half_width: 0.0,
            points: 64
        })
        .is_err());
    }

    #[test]
    fn gaussian_round_trip() {
        let grid = Grid::new(GridParams {
            half_width: 20.0,
            points: 512,
        })
        .unwrap();
        let spec: Vec<f64> = grid.k().iter().map(|k| (-0.5 * k * k).exp()).collect();
        let (f, imag) = grid.inverse_even(&spec);
        assert!(imag < 1e-14);
        for (x, v) in grid.x().iter().zip(&f) {
            let want = (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
            assert!((v - want).abs() < 1e-14);
        }
        assert!((grid.integrate(&f) - 1.0).abs() < 1e-14);
    }
}
