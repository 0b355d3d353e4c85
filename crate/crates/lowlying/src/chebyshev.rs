//! Chebyshev polynomials of the second kind as the Hecke-eigenvalue
//! algebra: evaluation, multiplicative extension to all integers, and
//! exact linearization coefficients x(varpi, r, j) of X_r^varpi in the
//! X_j basis.

use crate::arith::Factorization;
use crate::{quad, Error, Result};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// X_r(x) by the three-term recurrence X_0 = 1, X_1 = x,
/// X_{k+1} = x X_k - X_{k-1}.
pub fn chebyshev_eval(r: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if r == 0 {
        return prev;
    }
    let mut cur = x;
    for _ in 1..r {
        (prev, cur) = (cur, x * cur - prev);
    }
    cur
}

/// A Hecke eigenvalue system: values a_p = lambda(p) at primes, with an
/// excluded level prime. Prime powers extend via lambda(p^r) = X_r(a_p)
/// and the extension is multiplicative over coprime factors.
#[derive(Debug, Clone)]
pub struct HeckeSystem {
    prime_values: BTreeMap<u64, f64>,
    level: u64,
}

impl HeckeSystem {
    pub fn new(level: u64) -> Self {
        HeckeSystem {
            prime_values: BTreeMap::new(),
            level,
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn set_prime(&mut self, p: u64, a_p: f64) {
        self.prime_values.insert(p, a_p);
    }

    pub fn prime_value(&self, p: u64) -> Option<f64> {
        self.prime_values.get(&p).copied()
    }

    /// lambda(n) for n coprime to the level, multiplicative over the
    /// factorization of n.
    pub fn extend(&self, n: u64) -> Result<f64> {
        let f = Factorization::of(n)?;
        let mut acc = 1.0;
        for &(p, e) in &f.factors {
            let a_p = self
                .prime_values
                .get(&p)
                .copied()
                .ok_or(Error::MissingPrime(p))?;
            acc *= chebyshev_eval(e, a_p);
        }
        Ok(acc)
    }
}

pub fn hecke_extend(sys: &HeckeSystem, n: u64) -> Result<f64> {
    sys.extend(n)
}

/// Exact integer expansion X_r^varpi = sum_j coeffs[j] X_j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizationTable {
    pub varpi: u32,
    pub r: u32,
    pub coeffs: Vec<u128>,
}

impl LinearizationTable {
    pub fn coeff(&self, j: usize) -> u128 {
        self.coeffs.get(j).copied().unwrap_or(0)
    }
}

/// Product in the X-basis: X_a X_b = sum_{k=0}^{min(a,b)} X_{a+b-2k}.
fn basis_mul(a: &[u128], b: &[u128]) -> Result<Vec<u128>> {
    let deg = a.len() + b.len();
    let mut out = vec![0u128; deg.max(1)];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            let prod = ca.checked_mul(cb).ok_or(Error::Overflow("linearization"))?;
            for k in 0..=i.min(j) {
                let idx = i + j - 2 * k;
                out[idx] = out[idx]
                    .checked_add(prod)
                    .ok_or(Error::Overflow("linearization"))?;
            }
        }
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    Ok(out)
}

/// Exact integer linearization table for X_r^varpi, computed by repeated
/// application of the product rule.
pub fn linearization_table(varpi: u32, r: u32) -> Result<LinearizationTable> {
    if (r as u64) * (varpi as u64) > 10_000 {
        return Err(Error::SizeGuard(format!(
            "linearization table size r * varpi = {} exceeds 10^4",
            (r as u64) * (varpi as u64)
        )));
    }
    let mut unit = vec![0u128; r as usize + 1];
    unit[r as usize] = 1;
    let mut acc = vec![1u128]; // X_0
    for _ in 0..varpi {
        acc = basis_mul(&acc, &unit)?;
    }
    Ok(LinearizationTable {
        varpi,
        r,
        coeffs: acc,
    })
}

/// x(varpi, r, j) by numerical quadrature of
/// (2/pi) int_0^pi sin^varpi((r+1)t) sin((j+1)t) / sin^{varpi-1}(t) dt.
/// The removable sin denominator is cancelled analytically through
/// sin((r+1)t)/sin(t) = X_r(2 cos t).
pub fn linearization_quadrature(varpi: u32, r: u32, j: u32) -> Result<f64> {
    if varpi < 1 {
        return Err(Error::InvalidInput("linearization_quadrature: varpi >= 1".into()));
    }
    let integrand = |t: f64| {
        let xr = chebyshev_eval(r, 2.0 * t.cos());
        xr.powi(varpi as i32 - 1)
            * ((r as f64 + 1.0) * t).sin()
            * ((j as f64 + 1.0) * t).sin()
    };
    // 64-node panels of width pi/8
    Ok(2.0 / PI * quad::integrate64(integrand, 0.0, PI, 8 + (r as usize * varpi as usize) / 4))
}
