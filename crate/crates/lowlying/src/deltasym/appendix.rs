//! Appendix toolbox: a smooth dyadic partition of unity on powers of
//! sqrt(2), the geometric dyadic-sum envelopes, and the Picard-style
//! divisor-weighted Bessel sum monitor.

use super::bessel::bessel_j;
use crate::arith::divisor_count;
use crate::{Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// C^infinity ramp s(t): 0 for t <= 0, 1 for t >= 1, built from
/// exp(-1/t).
fn ramp(t: f64) -> f64 {
    let f = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let a = f(t);
    let b = f(1.0 - t);
    a / (a + b)
}

/// psi(x): 1 for x <= 1, 0 for x >= sqrt(2), smooth in between.
fn psi(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= SQRT2 {
        0.0
    } else {
        1.0 - ramp((x - 1.0) / (SQRT2 - 1.0))
    }
}

/// rho(x) = psi(x/sqrt(2)) - psi(x), compactly supported in [1, 2].
pub fn rho(x: f64) -> f64 {
    psi(x / SQRT2) - psi(x)
}

/// The active scales of the partition at x: pairs (a, rho(x / sqrt(2)^a))
/// with nonzero weight. The weights telescope to 1.
pub fn smooth_partition(x: f64) -> Result<Vec<(i64, f64)>> {
    if !(x > 0.0) {
        return Err(Error::InvalidInput(format!("smooth_partition requires x > 0, got {x}")));
    }
    // rho(x / sqrt(2)^a) != 0 needs 1 < x / sqrt(2)^a < 2, i.e.
    // a in (log_sqrt2(x) - 2, log_sqrt2(x))
    let la = x.ln() / SQRT2.ln();
    let lo = (la - 2.0).floor() as i64 - 1;
    let hi = la.ceil() as i64 + 1;
    let mut out = Vec::new();
    for a in lo..=hi {
        let w = rho(x / SQRT2.powi(a as i32));
        if w != 0.0 {
            out.push((a, w));
        }
    }
    Ok(out)
}

/// Max over the grid of |sum_a rho(x / sqrt(2)^a) - 1|.
pub fn partition_check(grid: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &x in grid {
        let total: f64 = smooth_partition(x)?.iter().map(|&(_, w)| w).sum();
        worst = worst.max((total - 1.0).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyadicDirection {
    /// sum of M^alpha over powers of sqrt(2) with 1 <= M <= bound
    UpTo,
    /// sum of M^{-alpha} over powers of sqrt(2) with M >= bound
    From,
}

/// Geometric sums over the sqrt(2)-dyadic grid, with the closed-form
/// envelope bound^{+-alpha} / (1 - 2^{-alpha/2}) asserted internally.
pub fn dyadic_sum(alpha: f64, bound: f64, direction: DyadicDirection) -> Result<f64> {
    if !(alpha > 0.0) || !(bound > 0.0) {
        return Err(Error::InvalidInput("dyadic_sum requires alpha > 0 and bound > 0".into()));
    }
    let envelope_factor = 1.0 / (1.0 - 2f64.powf(-alpha / 2.0));
    match direction {
        DyadicDirection::UpTo => {
            let mut acc = 0.0;
            let mut m = 1.0f64;
            while m <= bound * (1.0 + 1e-12) {
                acc += m.powf(alpha);
                m *= SQRT2;
            }
            debug_assert!(acc <= bound.powf(alpha) * envelope_factor * (1.0 + 1e-12));
            Ok(acc)
        }
        DyadicDirection::From => {
            // smallest power of sqrt(2) that is >= bound
            let k = (bound.ln() / SQRT2.ln()).ceil().max(0.0);
            let start = SQRT2.powf(k);
            // exact geometric series sum_{j >= 0} (start * sqrt(2)^j)^{-alpha}
            let acc = start.powf(-alpha) * envelope_factor;
            debug_assert!(acc <= bound.powf(-alpha) * envelope_factor * (1.0 + 1e-12));
            Ok(acc)
        }
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PicardRecord {
    pub x: f64,
    pub kappa: u32,
    pub lhs: f64,
    pub rhs_shape: f64,
    pub ratio: f64,
}

/// lhs = sum_{d <= D} tau(d)/sqrt(d) |J_kappa(X/d)| with D certified by
/// the small-argument Bessel tail; rhs_shape = sqrt(X) log X for X > 1,
/// X^kappa otherwise. The ratio is recorded, never asserted.
pub fn picard_monitor(x: f64, kappa: u32) -> Result<PicardRecord> {
    if !(x > 0.0) || x > 1e4 {
        return Err(Error::InvalidInput(format!(
            "picard_monitor requires 0 < X <= 10^4, got {x}"
        )));
    }
    if kappa < 1 {
        return Err(Error::InvalidInput("picard_monitor requires kappa >= 1".into()));
    }
    // term bound tau(d)/sqrt(d) (X/2d)^kappa / kappa! <= 2 (X/2d)^kappa / kappa!
    // (tau(d) <= 2 sqrt(d)); truncate once it falls below 1e-8:
    // D = (X/2) (2 / (kappa! 1e-8))^{1/kappa}
    let mut log_fact = 0.0;
    for k in 1..=kappa {
        log_fact += (k as f64).ln();
    }
    let kf = kappa as f64;
    let log_d = (x / 2.0).ln() + ((2.0f64).ln() - log_fact - (1e-8f64).ln()) / kf;
    let d_max = (log_d.exp().ceil() as u64).clamp(1, 10_000_000);
    // sieved divisor counts up to d_max
    let mut tau = vec![0u32; d_max as usize + 1];
    for d in 1..=d_max as usize {
        let mut m = d;
        while m <= d_max as usize {
            tau[m] += 1;
            m += d;
        }
    }
    let mut lhs = 0.0;
    for d in 1..=d_max {
        let df = d as f64;
        lhs += tau[d as usize] as f64 / df.sqrt() * bessel_j(kappa, x / df).abs();
    }
    debug_assert_eq!(tau.get(1).copied(), Some(divisor_count(1)? as u32));
    let rhs_shape = if x > 1.0 {
        x.sqrt() * x.ln().max(1e-12)
    } else {
        x.powi(kappa as i32)
    };
    Ok(PicardRecord {
        x,
        kappa,
        lhs,
        rhs_shape,
        ratio: lhs / rhs_shape,
    })
}
