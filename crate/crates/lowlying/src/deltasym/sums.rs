//! The prime sums P1 and P2 of the explicit formula, the old-form
//! correction over l | q^infinity, and the large-sieve bilinear form as
//! a recorded monitor.

use super::bessel::bessel_j;
use super::delta::{delta_symbol, DeltaParams};
use crate::arith::kloosterman;
use crate::chebyshev::HeckeSystem;
use crate::testfn::TestFunction;
use crate::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Primes up to limit by a plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut is_comp = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !is_comp[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                is_comp[m] = true;
                m += p;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeSumMode {
    New,
    Old,
    HarmonicAverage,
}

/// P1[Phi; r] = -2/log(q^r) sum_{p <= q^{r nu}, p != q}
/// (Delta_q(p^r, 1) - delta) (log p / sqrt p) Phihat(log p / log q^r).
///
/// `Old` replaces the Delta-weight by the l | q^infinity old-form
/// correction (1/q) sum_l Delta_1(p^r l^2, 1)/l; `HarmonicAverage` is
/// New minus that correction.
pub fn prime_sum_first(
    q: u64,
    kappa: u32,
    r: u32,
    tf: &TestFunction,
    mode: PrimeSumMode,
) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidInput("prime_sum_first requires r >= 1".into()));
    }
    let log_qr = r as f64 * (q as f64).ln();
    let x = (log_qr * tf.nu).exp();
    if x > 1e6 {
        return Err(Error::SizeGuard(format!(
            "prime range q^(r nu) = {x:.3e} exceeds 10^6"
        )));
    }
    let primes = primes_up_to(x.floor() as u64);
    let dp_q = DeltaParams::new(q, kappa, 1e-8)?;
    let dp_1 = DeltaParams::new(1, kappa, 1e-8)?;
    let mut new_sum = 0.0;
    let mut old_sum = 0.0;
    for &p in &primes {
        if p == q {
            continue;
        }
        let pf = p as f64;
        let weight = pf.ln() / pf.sqrt() * tf.phi_hat(pf.ln() / log_qr);
        if weight == 0.0 {
            continue;
        }
        let pr = (p as u128).pow(r);
        if pr > 1_000_000 {
            return Err(Error::SizeGuard(format!(
                "p^r = {pr} exceeds the 10^6 delta_symbol range"
            )));
        }
        let pr = pr as u64;
        if mode != PrimeSumMode::Old {
            new_sum += delta_symbol(&dp_q, pr, 1)? * weight;
        }
        if mode != PrimeSumMode::New {
            old_sum += old_form_weight(&dp_1, q, pr)? * weight;
        }
    }
    let scale = -2.0 / log_qr;
    Ok(match mode {
        PrimeSumMode::New => scale * new_sum,
        PrimeSumMode::Old => scale * old_sum,
        PrimeSumMode::HarmonicAverage => scale * (new_sum - old_sum),
    })
}

/// (1/q) sum_{l | q^inf} Delta_1(m l^2, 1)/l, truncated at l <= q^8, at
/// the delta_symbol range boundary, or when the term envelope
/// tau(l^2)/l drops below the tail budget -- whichever comes first.
fn old_form_weight(dp_1: &DeltaParams, q: u64, m: u64) -> Result<f64> {
    if q == 1 {
        return Ok(delta_symbol(dp_1, m, 1)?);
    }
    let mut acc = 0.0;
    let mut l: u64 = 1;
    let mut power = 0u32;
    while power <= 8 {
        let ml2 = m.checked_mul(l * l);
        match ml2 {
            Some(v) if v <= 1_000_000 => acc += delta_symbol(dp_1, v, 1)? / l as f64,
            _ => break,
        }
        // divisor-bound envelope tau(l^2)/l = (2 power + 1)/q^power
        if ((2.0 * f64::from(power) + 1.0) / l as f64) < dp_1.tol {
            break;
        }
        l = l.saturating_mul(q);
        power += 1;
    }
    Ok(acc / q as f64)
}

/// Source of Hecke eigenvalues for P2.
pub enum EigenSource<'a> {
    Hecke(&'a HeckeSystem),
    Delta(DeltaParams),
}

impl EigenSource<'_> {
    fn lambda(&self, n: u64) -> Result<f64> {
        match self {
            EigenSource::Hecke(sys) => sys.extend(n),
            EigenSource::Delta(dp) => Ok(delta_symbol(dp, n, 1)? / delta_symbol(dp, 1, 1)?),
        }
    }
}

/// P2[Phi; r, m] = -2/log(q^r) sum_p lambda(p^{2(r-m)}) (log p / p)
/// Phihat(2 log p / log q^r).
pub fn prime_sum_second(
    q: u64,
    r: u32,
    m: u32,
    tf: &TestFunction,
    eigen: &EigenSource,
) -> Result<f64> {
    if r == 0 || m >= r {
        return Err(Error::InvalidInput(format!(
            "prime_sum_second requires 0 <= m < r, got r = {r}, m = {m}"
        )));
    }
    let log_qr = r as f64 * (q as f64).ln();
    let x = (log_qr * tf.nu / 2.0).exp();
    if x > 1e6 {
        return Err(Error::SizeGuard(format!(
            "prime range q^(r nu / 2) = {x:.3e} exceeds 10^6"
        )));
    }
    let mut acc = 0.0;
    for p in primes_up_to(x.floor() as u64) {
        if p == q {
            continue;
        }
        let pf = p as f64;
        let weight = pf.ln() / pf * tf.phi_hat(2.0 * pf.ln() / log_qr);
        if weight == 0.0 {
            continue;
        }
        let power = (p as u128).pow(2 * (r - m));
        if power > u64::MAX as u128 {
            return Err(Error::Overflow("prime_sum_second power"));
        }
        acc += eigen.lambda(power as u64)? * weight;
    }
    Ok(-2.0 / log_qr * acc)
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveRecord {
    pub lhs: f64,
    pub rhs_envelope: f64,
    /// |lhs| / rhs_envelope; recorded, never asserted (the implied
    /// constant of the sieve inequality is unspecified)
    pub ratio: f64,
}

/// The bilinear Kloosterman form of the large sieve:
/// lhs = sum_{q | c <= C} (1/c) sum_m sum_n a_m b_n S(m, +/-n; c)
///        J_{k1-1}(4 pi sqrt(mn)/c) Phihat(log(mn)/log q^2),
/// sign + iff k1 = k2 mod 4; envelope (C^2/MN)^theta
/// (1+M/q)^{1/2} (1+N/q)^{1/2} |a| |b|.
pub fn sieve_form_monitor(
    q: u64,
    k1: u32,
    k2: u32,
    a: &[f64],
    b: &[f64],
    tf: &TestFunction,
    theta: f64,
) -> Result<SieveRecord> {
    if a.len() > 1000 || b.len() > 1000 {
        return Err(Error::SizeGuard("sieve coefficient ranges exceed 10^3".into()));
    }
    let mcap = a.len() as u64;
    let ncap = b.len() as u64;
    if mcap == 0 || ncap == 0 {
        return Ok(SieveRecord { lhs: 0.0, rhs_envelope: 0.0, ratio: 0.0 });
    }
    let sign = if (k1 % 4) == (k2 % 4) { 1.0 } else { -1.0 };
    let cmax = (4.0 * PI * ((mcap * ncap) as f64).sqrt()).ceil() as u64;
    let log_q2 = 2.0 * (q.max(2) as f64).ln();
    let mut lhs = 0.0;
    let mut c = q;
    while c <= cmax.max(q) {
        let cf = c as f64;
        let mut inner = 0.0;
        for (mi, &am) in a.iter().enumerate() {
            if am == 0.0 {
                continue;
            }
            let m = mi as u64 + 1;
            for (ni, &bn) in b.iter().enumerate() {
                if bn == 0.0 {
                    continue;
                }
                let n = ni as u64 + 1;
                let g = bessel_j(k1 - 1, 4.0 * PI * ((m * n) as f64).sqrt() / cf)
                    * tf.phi_hat(((m * n) as f64).ln() / log_q2);
                if g == 0.0 {
                    continue;
                }
                inner += am * bn * sign * kloosterman(m, n, c) * g;
            }
        }
        lhs += inner / cf;
        c += q;
    }
    let norm_a = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_b = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let cf = cmax as f64;
    let rhs = (cf * cf / (mcap * ncap) as f64).powf(theta)
        * (1.0 + mcap as f64 / q as f64).sqrt()
        * (1.0 + ncap as f64 / q as f64).sqrt()
        * norm_a
        * norm_b;
    let ratio = if rhs > 0.0 { lhs.abs() / rhs } else { 0.0 };
    Ok(SieveRecord { lhs, rhs_envelope: rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::Family;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fejer(nu: f64) -> TestFunction {
        TestFunction::new(Family::Fejer, nu).unwrap()
    }

    #[test]
    fn sieve_of_eratosthenes() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(100_000).len(), 9592);
    }

    #[test]
    fn empty_prime_range_is_zero() {
        // nu so small that q^{r nu} < 2
        let tf = fejer(0.01);
        let v = prime_sum_first(11, 12, 1, &tf, PrimeSumMode::New).unwrap();
        assert_eq!(v, 0.0);
        let sys = HeckeSystem::new(11);
        let v2 = prime_sum_second(11, 1, 0, &tf, &EigenSource::Hecke(&sys)).unwrap();
        assert_eq!(v2, 0.0);
    }

    #[test]
    fn new_part_is_small() {
        // q = 11, kappa = 12, r = 1, Fejer(0.5): primes {2, 3} with
        // near-vanishing Delta_11(p, 1)
        let tf = fejer(0.5);
        let v = prime_sum_first(11, 12, 1, &tf, PrimeSumMode::New).unwrap();
        assert!(v.abs() < 0.05, "P1_new = {v}");
        let h = prime_sum_first(11, 12, 1, &tf, PrimeSumMode::HarmonicAverage).unwrap();
        let o = prime_sum_first(11, 12, 1, &tf, PrimeSumMode::Old).unwrap();
        assert!((h - (v - o)).abs() < 1e-12);
    }

    #[test]
    fn old_part_envelope_monitor() {
        let tf = fejer(0.5);
        for q in [101u64, 997] {
            let v = prime_sum_first(q, 12, 1, &tf, PrimeSumMode::Old).unwrap();
            let envelope = (q as f64).powf(0.5 * tf.nu - 1.0);
            assert!(
                v.abs() <= 10.0 * envelope,
                "q = {q}: old part {v} vs envelope {envelope}"
            );
        }
    }

    #[test]
    fn range_guard() {
        let tf = fejer(1.0);
        assert!(matches!(
            prime_sum_first(1009, 12, 3, &tf, PrimeSumMode::New),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn second_sum_truncation_stability() {
        // doubling the prime range only moves the value by the tail of
        // sum log p / p * Phihat, which vanishes here (compact support)
        let mut sys = HeckeSystem::new(9973);
        let tau = super::super::tau::TauTable::new(1000).unwrap();
        for p in primes_up_to(1000) {
            sys.set_prime(p, tau.lambda(p as usize).unwrap());
        }
        let tf_half = fejer(0.5);
        let v1 = prime_sum_second(9973, 1, 0, &tf_half, &EigenSource::Hecke(&sys)).unwrap();
        assert!(v1.is_finite() && v1 != 0.0);
        // recompute over a doubled prime range: the extra terms carry
        // Phihat = 0, so the truncated value is already exact
        let q = 9973u64;
        let log_qr = (q as f64).ln();
        let x = (log_qr * tf_half.nu / 2.0).exp();
        let mut v2 = 0.0;
        for p in primes_up_to((2.0 * x).floor() as u64) {
            let pf = p as f64;
            let weight = pf.ln() / pf * tf_half.phi_hat(2.0 * pf.ln() / log_qr);
            v2 += sys.extend(p * p).unwrap() * weight;
        }
        v2 *= -2.0 / log_qr;
        assert!((v1 - v2).abs() < 1e-15);
    }

    #[test]
    fn alternating_sum_reindexes() {
        // sum_{m=0}^{r-1} (-1)^m P2[Phi; r, m] equals the same prime sum
        // with the weight sum_{j=1}^{r} (-1)^{r-j} lambda(p^{2j})
        let mut sys = HeckeSystem::new(9973);
        let tau = super::super::tau::TauTable::new(200).unwrap();
        for p in primes_up_to(200) {
            sys.set_prime(p, tau.lambda(p as usize).unwrap());
        }
        // nu small enough that the prime range q^{r nu / 2} stays within
        // the seeded primes (<= 200)
        let tf = fejer(0.3);
        let q = 9973u64;
        let r = 3u32;
        let mut alt = 0.0;
        for m in 0..r {
            let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
            alt += sgn * prime_sum_second(q, r, m, &tf, &EigenSource::Hecke(&sys)).unwrap();
        }
        let log_qr = r as f64 * (q as f64).ln();
        let x = (log_qr * tf.nu / 2.0).exp().floor() as u64;
        let mut direct = 0.0;
        for p in primes_up_to(x) {
            let pf = p as f64;
            let weight = pf.ln() / pf * tf.phi_hat(2.0 * pf.ln() / log_qr);
            let mut lam = 0.0;
            for j in 1..=r {
                let sgn = if (r - j) % 2 == 0 { 1.0 } else { -1.0 };
                lam += sgn * sys.extend((p as u64).pow(2 * j)).unwrap();
            }
            direct += lam * weight;
        }
        direct *= -2.0 / log_qr;
        assert!((alt - direct).abs() < 1e-12, "{alt} vs {direct}");
    }

    #[test]
    fn sieve_monitor_basics() {
        let tf = fejer(0.9);
        // zero coefficients -> zero form
        let z = sieve_form_monitor(101, 12, 12, &[0.0; 4], &[0.0; 4], &tf, 7.0 / 64.0).unwrap();
        assert_eq!(z.lhs, 0.0);
        // single-term a, b equals the directly computed term
        let mut a = vec![0.0; 3];
        let mut b = vec![0.0; 3];
        a[1] = 1.0; // m = 2
        b[2] = 1.0; // n = 3
        let rec = sieve_form_monitor(5, 12, 12, &a, &b, &tf, 7.0 / 64.0).unwrap();
        let log_q2 = 2.0 * 5f64.ln();
        let mut expect = 0.0;
        let cmax = (4.0 * PI * 9f64.sqrt()).ceil() as u64;
        let mut c = 5;
        while c <= cmax {
            expect += kloosterman(2, 3, c) / c as f64
                * bessel_j(11, 4.0 * PI * 6f64.sqrt() / c as f64)
                * tf.phi_hat(6f64.ln() / log_q2);
            c += 5;
        }
        assert!((rec.lhs - expect).abs() < 1e-12);
        // random unit-norm coefficients: finite recorded ratio
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut a: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
        let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        a.iter_mut().for_each(|x| *x /= na);
        let rec = sieve_form_monitor(101, 12, 10, &a, &a.clone(), &tf, 7.0 / 64.0).unwrap();
        assert!(rec.ratio.is_finite());
        assert!(rec.rhs_envelope > 0.0);
    }
}
