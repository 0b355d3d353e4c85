//! The Delta_q(m,n) symbol of the Petersson trace formula, with a
//! certified truncation of the sum of Kloosterman sums, and the
//! validation suite against the Ramanujan tau oracle.

use super::bessel::bessel_j;
use super::tau::TauTable;
use crate::arith::{gcd, kloosterman};
use crate::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeltaParams {
    /// level: 1 or a prime
    pub q: u64,
    /// even weight >= 4
    pub kappa: u32,
    /// absolute tail budget of the truncated c-sum
    pub tol: f64,
}

impl DeltaParams {
    pub fn new(q: u64, kappa: u32, tol: f64) -> Result<Self> {
        if q == 0 || (q != 1 && !crate::arith::is_prime(q)) {
            return Err(Error::InvalidInput(format!("q must be 1 or prime, got {q}")));
        }
        if kappa % 2 != 0 || kappa < 4 {
            return Err(Error::InvalidInput(format!(
                "kappa must be even and >= 4, got {kappa}"
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidInput("tol must be positive".into()));
        }
        Ok(DeltaParams { q, kappa, tol })
    }
}

/// Smallest truncation modulus so the proven tail bound is below tol:
/// each term obeys |S(m,n;c)/c J_{kappa-1}(4 pi sqrt(mn)/c)| <=
/// 2 sqrt(gcd(m,n)) (2 pi sqrt(mn))^{kappa-1} / (kappa-1)! c^{1-kappa}
/// via tau(c) <= 2 sqrt(c), gcd(m,n,c) <= gcd(m,n) and the global
/// small-argument Bessel bound; summing the integral comparison gives
/// tail(C) <= 4 pi sqrt(g) A^{kappa-1} / ((kappa-1)! (kappa-2)) C^{2-kappa}.
pub fn c_max(dp: &DeltaParams, m: u64, n: u64) -> Result<u64> {
    let g = gcd(m, n) as f64;
    let a = 2.0 * PI * ((m as f64) * (n as f64)).sqrt();
    let kappa = dp.kappa as f64;
    let mut log_fact = 0.0;
    for k in 1..dp.kappa {
        log_fact += (k as f64).ln();
    }
    // log of the tail prefactor 4 pi sqrt(g) A^{kappa-1} / ((kappa-1)!(kappa-2))
    let log_pref =
        (4.0 * PI).ln() + 0.5 * g.ln() + (kappa - 1.0) * a.ln() - log_fact - (kappa - 2.0).ln();
    let log_c = (log_pref - dp.tol.ln()) / (kappa - 2.0);
    let c = log_c.exp().ceil();
    if !c.is_finite() || c > 1e7 {
        let achievable = (log_pref - (kappa - 2.0) * (1e7f64).ln()).exp();
        return Err(Error::TailBudget {
            requested: dp.tol,
            achievable,
            c_limit: 10_000_000,
        });
    }
    Ok((c as u64).max(1))
}

/// Delta_q(m,n) = delta_{m,n} + 2 pi i^kappa sum_{q | c <= C_max}
/// S(m,n;c)/c J_{kappa-1}(4 pi sqrt(mn)/c), with i^kappa = (-1)^{kappa/2}
/// kept real throughout.
pub fn delta_symbol(dp: &DeltaParams, m: u64, n: u64) -> Result<f64> {
    if m == 0 || n == 0 || m * n > 1_000_000 {
        return Err(Error::InvalidInput(format!(
            "delta_symbol requires 1 <= m*n <= 10^6, got m = {m}, n = {n}"
        )));
    }
    let cmax = c_max(dp, m, n)?;
    let i_kappa = if dp.kappa % 4 == 0 { 1.0 } else { -1.0 };
    let arg_num = 4.0 * PI * ((m as f64) * (n as f64)).sqrt();
    let mut sum = 0.0;
    let mut c = dp.q;
    while c <= cmax {
        let s = kloosterman(m, n, c);
        if s != 0.0 {
            sum += s / c as f64 * bessel_j(dp.kappa - 1, arg_num / c as f64);
        }
        c += dp.q;
    }
    let delta = if m == n { 1.0 } else { 0.0 };
    Ok(delta + 2.0 * PI * i_kappa * sum)
}

#[derive(Debug, Clone, Serialize)]
pub struct PeterssonReport {
    pub kappa: u32,
    pub n_max: u64,
    pub max_deviation: f64,
    pub failures: Vec<(u64, u64, f64)>,
    pub pass: bool,
}

/// kappa = 10: the empty cusp space forces Delta_1(m,n) = 0 grid-wide.
/// kappa = 12: the rank-one spectrum makes Delta_1(n,1)/Delta_1(1,1) the
/// normalized eigenvalue tau(n)/n^{11/2}, and factorizes the two-index
/// symbol as Delta_1(m,n) Delta_1(1,1) = Delta_1(m,1) Delta_1(n,1).
pub fn petersson_ratio_suite(kappa: u32, n_max: u64) -> Result<PeterssonReport> {
    if n_max > 30 {
        return Err(Error::SizeGuard("petersson_ratio_suite requires n_max <= 30".into()));
    }
    if kappa != 10 && kappa != 12 {
        return Err(Error::InvalidInput("petersson_ratio_suite expects kappa in {10, 12}".into()));
    }
    let dp = DeltaParams::new(1, kappa, 1e-8)?;
    let mut max_dev = 0.0f64;
    let mut failures = Vec::new();
    if kappa == 10 {
        for m in 1..=n_max {
            for n in 1..=n_max {
                let v = delta_symbol(&dp, m, n)?;
                let dev = (v - if m == n { 0.0 } else { 0.0 }).abs();
                max_dev = max_dev.max(dev);
                if dev >= 1e-6 {
                    failures.push((m, n, v));
                }
            }
        }
    } else {
        let tau = TauTable::new(n_max as usize)?;
        let d11 = delta_symbol(&dp, 1, 1)?;
        for n in 1..=n_max {
            let ratio = delta_symbol(&dp, n, 1)? / d11;
            let dev = (ratio - tau.lambda(n as usize)?).abs();
            max_dev = max_dev.max(dev);
            if dev >= 1e-6 {
                failures.push((n, 1, ratio));
            }
        }
        // rank-one factorization on coprime pairs
        for m in 1..=n_max {
            for n in 1..=n_max {
                if gcd(m, n) != 1 {
                    continue;
                }
                let lhs = delta_symbol(&dp, m, n)? * d11;
                let rhs = delta_symbol(&dp, m, 1)? * delta_symbol(&dp, n, 1)?;
                let dev = (lhs - rhs).abs();
                max_dev = max_dev.max(dev);
                if dev >= 1e-6 {
                    failures.push((m, n, lhs - rhs));
                }
            }
        }
    }
    Ok(PeterssonReport {
        kappa,
        n_max,
        max_deviation: max_dev,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(DeltaParams::new(1, 10, 1e-8).is_ok());
        assert!(DeltaParams::new(11, 12, 1e-8).is_ok());
        assert!(DeltaParams::new(12, 12, 1e-8).is_err()); // composite level
        assert!(DeltaParams::new(1, 9, 1e-8).is_err());
        assert!(DeltaParams::new(1, 2, 1e-8).is_err());
        assert!(DeltaParams::new(1, 10, 0.0).is_err());
    }

    #[test]
    fn truncation_is_certified() {
        // brute-force the tail beyond C_max with the term bound and
        // confirm it is below tol; also check halving tol only moves
        // Delta by less than the sum of both budgets
        let dp = DeltaParams::new(1, 8, 1e-6).unwrap();
        let (m, n) = (6u64, 10u64);
        let cmax = c_max(&dp, m, n).unwrap();
        let a = 2.0 * PI * ((m * n) as f64).sqrt();
        let mut log_fact = 0.0;
        for k in 1..dp.kappa {
            log_fact += (k as f64).ln();
        }
        let mut tail = 0.0;
        for c in (cmax + 1)..(cmax + 200_000) {
            let cf = c as f64;
            let g = gcd(gcd(m, n), c) as f64;
            // |S|/c <= sqrt(g) tau(c) sqrt(c)/c <= 2 sqrt(g), Bessel small-argument bound
            let term =
                2.0 * g.sqrt() * ((dp.kappa as f64 - 1.0) * (a / cf).ln() - log_fact).exp();
            tail += 2.0 * PI * term;
        }
        assert!(tail < dp.tol, "tail {tail} exceeds tol {}", dp.tol);

        let fine = DeltaParams::new(1, 8, 5e-7).unwrap();
        let v1 = delta_symbol(&dp, m, n).unwrap();
        let v2 = delta_symbol(&fine, m, n).unwrap();
        assert!((v1 - v2).abs() < dp.tol + fine.tol);
    }

    #[test]
    fn tail_budget_error_reports_achievable() {
        let dp = DeltaParams::new(1, 4, 1e-14).unwrap();
        match c_max(&dp, 900, 900) {
            Err(Error::TailBudget { achievable, c_limit, .. }) => {
                assert!(achievable > 1e-14);
                assert_eq!(c_limit, 10_000_000);
            }
            other => panic!("expected TailBudget, got {other:?}"),
        }
    }

    #[test]
    fn kappa10_vanishing_sample() {
        let dp = DeltaParams::new(1, 10, 1e-8).unwrap();
        for (m, n) in [(1u64, 1u64), (2, 3), (5, 5), (7, 12)] {
            let v = delta_symbol(&dp, m, n).unwrap();
            assert!(v.abs() < 1e-6, "Delta_1({m},{n}) = {v}");
        }
    }

    #[test]
    fn kappa12_tau_ratio_sample() {
        let dp = DeltaParams::new(1, 12, 1e-8).unwrap();
        let d11 = delta_symbol(&dp, 1, 1).unwrap();
        let ratio = delta_symbol(&dp, 2, 1).unwrap() / d11;
        let expect = -24.0 / 2f64.powf(5.5); // tau(2)/2^{11/2} = -0.530330...
        assert!((ratio - expect).abs() < 1e-6, "{ratio} vs {expect}");
        assert!((expect + 0.53033).abs() < 1e-5);
    }

    #[test]
    fn diagonal_at_large_level() {
        // q large, kappa = 10: the c-sum starts at c = q with a tiny
        // Bessel argument, so Delta_q(m,m) is 1 up to the tail budget
        let dp = DeltaParams::new(997, 10, 1e-8).unwrap();
        for m in [1u64, 4, 9] {
            let v = delta_symbol(&dp, m, m).unwrap();
            assert!((v - 1.0).abs() < 1e-6, "Delta_q({m},{m}) = {v}");
        }
    }

    #[test]
    fn suite_passes() {
        let r10 = petersson_ratio_suite(10, 8).unwrap();
        assert!(r10.pass, "kappa 10 failures: {:?}", r10.failures);
        let r12 = petersson_ratio_suite(12, 8).unwrap();
        assert!(r12.pass, "kappa 12 failures: {:?}", r12.failures);
        assert!(r12.max_deviation < 1e-6);
        assert!(petersson_ratio_suite(12, 31).is_err());
        assert!(petersson_ratio_suite(14, 5).is_err());
    }
}
