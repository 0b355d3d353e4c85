//! Even test-function pairs (Phi, Phihat) with Phihat compactly
//! supported in [-nu, nu], plus the handful of integrals the prediction
//! formulas consume.

use crate::{quad, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Fejer,
    CosineSquared,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fejer" => Ok(Family::Fejer),
            "cosine-squared" | "cosine_squared" | "cos2" => Ok(Family::CosineSquared),
            other => Err(Error::InvalidInput(format!("unknown family '{other}'"))),
        }
    }
}

/// An even Schwartz pair with compactly supported transform.
///
/// Fejer: Phihat(u) = max(0, 1 - |u|/nu), Phi(x) = nu sinc^2(pi nu x).
/// CosineSquared: Phihat(u) = cos^2(pi u / (2 nu)) on [-nu, nu],
/// Phi(x) = nu sin(pi t)/(pi t (1 - t^2)) with t = 2 nu x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub family: Family,
    pub nu: f64,
}

impl TestFunction {
    pub fn new(family: Family, nu: f64) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::InvalidInput(format!("nu must be positive, got {nu}")));
        }
        Ok(TestFunction { family, nu })
    }

    /// Phihat(u): even, continuous, identically zero outside [-nu, nu].
    pub fn phi_hat(&self, u: f64) -> f64 {
        let a = u.abs();
        if a > self.nu {
            return 0.0;
        }
        match self.family {
            Family::Fejer => 1.0 - a / self.nu,
            Family::CosineSquared => {
                let c = (PI * a / (2.0 * self.nu)).cos();
                c * c
            }
        }
    }

    /// Phi(x), closed form for both families.
    pub fn phi(&self, x: f64) -> f64 {
        match self.family {
            Family::Fejer => {
                let y = PI * self.nu * x;
                self.nu * sinc(y) * sinc(y)
            }
            Family::CosineSquared => {
                let t = 2.0 * self.nu * x.abs();
                self.nu * cosine_window_kernel(t)
            }
        }
    }

    /// Phi(x) by numerical Fourier inversion of Phihat, for cross-checks.
    pub fn phi_by_inversion(&self, x: f64) -> f64 {
        let panels = 8 + (self.nu * x.abs()).ceil() as usize * 4;
        2.0 * quad::integrate(|u| self.phi_hat(u) * (2.0 * PI * x * u).cos(), 0.0, self.nu, panels)
    }
}

fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-8 {
        1.0 - y * y / 6.0
    } else {
        y.sin() / y
    }
}

/// sin(pi t) / (pi t (1 - t^2)) with the removable points t = 0 (value 1)
/// and t = 1 (value 1/2) handled by local rewriting.
fn cosine_window_kernel(t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if (t - 1.0).abs() < 0.5 {
        // sin(pi t) = -sin(pi h) with h = t - 1, denominator = -pi h (1 + h)(2 + h)
        let h = t - 1.0;
        sinc(PI * h) / ((1.0 + h) * (2.0 + h))
    } else {
        sinc(PI * t) / (1.0 - t * t)
    }
}

/// The integrals feeding the two-level and variance predictions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairIntegrals {
    pub phihat1_0: f64,
    pub phihat2_0: f64,
    pub phi1_0: f64,
    pub phi2_0: f64,
    /// 2 int |u| Phihat1(u) Phihat2(u) du
    pub sigma12: f64,
    /// int Phi1 Phi2 dx, computed in the Fourier domain as
    /// int Phihat1 Phihat2 du (Parseval over compact support)
    pub prodhat0: f64,
}

pub fn pair_integrals(tf1: &TestFunction, tf2: &TestFunction) -> PairIntegrals {
    let m = tf1.nu.min(tf2.nu);
    let sigma12 = 4.0 * quad::integrate(|u| u * tf1.phi_hat(u) * tf2.phi_hat(u), 0.0, m, 64);
    let prodhat0 = 2.0 * quad::integrate(|u| tf1.phi_hat(u) * tf2.phi_hat(u), 0.0, m, 64);
    PairIntegrals {
        phihat1_0: tf1.phi_hat(0.0),
        phihat2_0: tf2.phi_hat(0.0),
        phi1_0: tf1.phi(0.0),
        phi2_0: tf2.phi(0.0),
        sigma12,
        prodhat0,
    }
}

/// Max over the grid of |Phi(x) - int Phihat(u) cos(2 pi x u) du|.
pub fn fourier_pair_check(tf: &TestFunction, grid: &[f64]) -> Result<f64> {
    if grid.iter().any(|&x| x.abs() > 20.0) {
        return Err(Error::InvalidInput("fourier_pair_check grid must lie in [-20, 20]".into()));
    }
    Ok(grid
        .iter()
        .map(|&x| (tf.phi(x) - tf.phi_by_inversion(x)).abs())
        .fold(0.0, f64::max))
}
