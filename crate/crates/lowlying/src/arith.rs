//! Exact arithmetic primitives: factorization, divisor counts, the
//! multiplicative function nu(n) = n * prod_{p|n} (1 + 1/p), modular
//! inverses and Kloosterman sums together with their identities.

use crate::{Error, Result};
use std::f64::consts::TAU;

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Trial-division factorization.
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("factorize(0)".into()));
        }
        let mut factors = Vec::new();
        let mut m = n;
        let mut p: u64 = 2;
        while p.saturating_mul(p) <= m {
            if m % p == 0 {
                let mut e = 0u32;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            factors.push((m, 1));
        }
        Ok(Factorization { n, factors })
    }

    /// tau(n), the number of divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| (e as u64) + 1).product()
    }

    /// nu(n) = n * prod_{p|n} (1 + 1/p) = prod p^{e-1}(p+1); always an integer.
    pub fn nu_mult(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e - 1) * (p + 1))
            .product()
    }
}

pub fn divisor_count(n: u64) -> Result<u64> {
    Ok(Factorization::of(n)?.divisor_count())
}

pub fn nu_mult(n: u64) -> Result<u64> {
    Ok(Factorization::of(n)?.nu_mult())
}

pub fn is_prime(n: u64) -> bool {
    match Factorization::of(n) {
        Ok(f) => f.factors.len() == 1 && f.factors[0].1 == 1,
        Err(_) => false,
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` (extended Euclid), or None if gcd(a, m) > 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Kloosterman sum S(m, n; c) = sum over x mod c, (x,c)=1 of
/// e((m x + n xbar)/c), accumulated as real cosines: the x <-> c - x
/// pairing makes the imaginary part vanish identically.
pub fn kloosterman(m: u64, n: u64, c: u64) -> f64 {
    kloosterman_complex(m, n, c).0
}

/// Full complex accumulation; the imaginary part is retained for the
/// realness invariant test.
pub fn kloosterman_complex(m: u64, n: u64, c: u64) -> (f64, f64) {
    if c == 1 {
        // empty congruence convention: the single residue x = 0
        return (1.0, 0.0);
    }
    let mr = m % c;
    let nr = n % c;
    let mut re = 0.0;
    let mut im = 0.0;
    for x in 1..c {
        if gcd(x, c) != 1 {
            continue;
        }
        let xinv = mod_inverse(x, c).expect("x invertible");
        let num = (mr * x + nr * xinv) % c;
        let phase = TAU * (num as f64) / (c as f64);
        re += phase.cos();
        im += phase.sin();
    }
    (re, im)
}

/// The Weil-Estermann envelope sqrt(gcd(m,n,c)) * tau(c) * sqrt(c).
pub fn weil_bound(m: u64, n: u64, c: u64) -> f64 {
    let g = gcd(gcd(m, n), c);
    let tau = Factorization::of(c).map(|f| f.divisor_count()).unwrap_or(1);
    (g as f64).sqrt() * (tau as f64) * (c as f64).sqrt()
}

/// Chinese-remainder factorization of S(m, n; qr) for coprime q, r:
/// S(m qbar^2, n; r) * S(m rbar^2, n; q).
pub fn kloosterman_crt(m: u64, n: u64, q: u64, r: u64) -> Result<f64> {
    if gcd(q, r) != 1 {
        return Err(Error::InvalidInput(format!(
            "kloosterman_crt requires gcd(q, r) = 1, got q = {q}, r = {r}"
        )));
    }
    let factor = |modulus: u64, other: u64| -> f64 {
        if modulus == 1 {
            return 1.0;
        }
        let inv = mod_inverse(other % modulus, modulus).expect("coprime");
        let twist = (m % modulus) * ((inv * inv) % modulus) % modulus;
        kloosterman(twist, n, modulus)
    };
    Ok(factor(r, q) * factor(q, r))
}

/// S(p^gamma q, 1; qr) for primes p, q: equals -S(p^gamma qbar, 1; r)
/// when gcd(q, r) = 1 and 0 when q | r.
pub fn kloosterman_special(p: u64, gamma: u32, q: u64, r: u64) -> f64 {
    if r % q == 0 {
        return 0.0;
    }
    if r == 1 {
        return -1.0;
    }
    let pg = pow_mod(p, gamma, r);
    let qbar = mod_inverse(q % r, r).expect("gcd(q, r) = 1");
    -kloosterman(pg * qbar % r, 1, r)
}

fn pow_mod(mut a: u64, mut e: u32, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    acc
}

/// Direct-definition evaluation of S(p^gamma q, 1; qr), the left-hand
/// side of the special identity, for cross-checking.
pub fn kloosterman_special_direct(p: u64, gamma: u32, q: u64, r: u64) -> f64 {
    let c = q * r;
    let m = pow_mod(p, gamma, c) * (q % c) % c;
    kloosterman(m, 1, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factorization_basics() {
        let f = Factorization::of(12).unwrap();
        assert_eq!(f.factors, vec![(2, 2), (3, 1)]);
        assert_eq!(f.divisor_count(), 6);
        assert_eq!(f.nu_mult(), 24); // 12 * (3/2) * (4/3)
        assert_eq!(nu_mult(7).unwrap(), 8);
        assert_eq!(divisor_count(1).unwrap(), 1);
        assert!(Factorization::of(0).is_err());
    }

    #[test]
    fn kloosterman_small_values() {
        assert_eq!(kloosterman(1, 1, 1), 1.0);
        assert!((kloosterman(1, 1, 2) - 1.0).abs() < 1e-12);
        assert!((kloosterman(1, 1, 3) + 1.0).abs() < 1e-12);
        assert!((kloosterman(1, 1, 6) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn kloosterman_is_real_and_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let m = rng.random_range(1..100u64);
            let n = rng.random_range(1..100u64);
            let c = rng.random_range(1..500u64);
            let (re, im) = kloosterman_complex(m, n, c);
            assert!(im.abs() < 1e-10 * c as f64, "imag {im} at c = {c}");
            let sym = kloosterman(n, m, c);
            assert!((re - sym).abs() < 1e-9, "S({m},{n};{c}) != S({n},{m};{c})");
        }
    }

    #[test]
    fn kloosterman_weil_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..60 {
            let m = rng.random_range(1..50u64);
            let n = rng.random_range(1..50u64);
            let c = rng.random_range(1..300u64);
            let s = kloosterman(m, n, c).abs();
            assert!(
                s <= weil_bound(m, n, c) + 1e-9,
                "Weil violated at ({m},{n},{c})"
            );
        }
    }

    #[test]
    fn crt_identity() {
        assert!((kloosterman_crt(1, 1, 2, 3).unwrap() + 1.0).abs() < 1e-12);
        // q = 1 factor is trivial
        assert!((kloosterman_crt(5, 7, 1, 36).unwrap() - kloosterman(5, 7, 36)).abs() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut done = 0;
        while done < 40 {
            let q = rng.random_range(2..50u64);
            let r = rng.random_range(2..50u64);
            if gcd(q, r) != 1 {
                continue;
            }
            let m = rng.random_range(1..30u64);
            let n = rng.random_range(1..30u64);
            let lhs = kloosterman_crt(m, n, q, r).unwrap();
            let rhs = kloosterman(m, n, q * r);
            let scale = rhs.abs().max(1.0);
            assert!(
                (lhs - rhs).abs() < 1e-10 * scale,
                "CRT failed at ({m},{n},{q},{r}): {lhs} vs {rhs}"
            );
            done += 1;
        }
        assert!(kloosterman_crt(1, 1, 4, 6).is_err());
    }

    #[test]
    fn special_identity() {
        // q | r branch
        assert_eq!(kloosterman_special(2, 1, 3, 3), 0.0);
        assert!(kloosterman_special_direct(2, 1, 3, 3).abs() < 1e-9);
        // gcd(q, r) = 1 branch against direct summation
        for &(p, gamma, q, r) in &[(2u64, 1u32, 3u64, 2u64), (2, 2, 5, 1), (3, 1, 7, 4), (5, 3, 3, 8)] {
            let formula = kloosterman_special(p, gamma, q, r);
            let direct = kloosterman_special_direct(p, gamma, q, r);
            assert!(
                (formula - direct).abs() < 1e-9,
                "special identity failed at ({p},{gamma},{q},{r}): {formula} vs {direct}"
            );
        }
        assert_eq!(kloosterman_special(2, 2, 5, 1), -1.0);
    }
}
