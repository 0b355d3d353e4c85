//! Exact Ramanujan tau oracle from the eta product:
//! q prod_{k>=1} (1 - q^k)^24 = sum tau(n) q^n, all arithmetic in i128.

use crate::{Error, Result};

/// tau(n) for n <= max_n, exact integers.
#[derive(Debug, Clone)]
pub struct TauTable {
    pub max_n: usize,
    values: Vec<i128>, // values[n - 1] = tau(n)
}

impl TauTable {
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n < 1 || max_n > 10_000 {
            return Err(Error::SizeGuard(format!(
                "TauTable requires 1 <= max_n <= 10^4, got {max_n}"
            )));
        }
        // Euler product prod (1 - q^k) up to degree max_n via pentagonal
        // numbers, then the 24th power as 16 * 8 by repeated squaring.
        let deg = max_n; // tau(n) is the coefficient of q^{n-1} in eta^24 / q^... shifted
        let mut euler = vec![0i128; deg];
        euler[0] = 1;
        let mut k: i64 = 1;
        loop {
            // generalized pentagonal exponents k(3k - 1)/2 and k(3k + 1)/2
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 as usize >= deg && g2 as usize >= deg {
                break;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            for g in [g1, g2] {
                if (g as usize) < deg {
                    euler[g as usize] += sign;
                }
            }
            k += 1;
        }
        let p2 = poly_mul(&euler, &euler, deg);
        let p4 = poly_mul(&p2, &p2, deg);
        let p8 = poly_mul(&p4, &p4, deg);
        let p16 = poly_mul(&p8, &p8, deg);
        let p24 = poly_mul(&p16, &p8, deg);
        Ok(TauTable {
            max_n,
            values: p24,
        })
    }

    /// Exact tau(n), 1 <= n <= max_n.
    pub fn tau(&self, n: usize) -> Result<i128> {
        if n < 1 || n > self.max_n {
            return Err(Error::InvalidInput(format!(
                "tau({n}) outside table range 1..={}",
                self.max_n
            )));
        }
        Ok(self.values[n - 1])
    }

    /// Arithmetically normalized eigenvalue lambda(n) = tau(n) / n^{11/2}.
    pub fn lambda(&self, n: usize) -> Result<f64> {
        Ok(self.tau(n)? as f64 / (n as f64).powf(5.5))
    }
}

/// Convenience wrapper: tau(n) from a freshly built table.
pub fn ramanujan_tau(n: usize) -> Result<i128> {
    TauTable::new(n)?.tau(n)
}

fn poly_mul(a: &[i128], b: &[i128], deg: usize) -> Vec<i128> {
    let mut out = vec![0i128; deg];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if i + j >= deg {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let t = TauTable::new(30).unwrap();
        let expect: [(usize, i128); 10] = [
            (1, 1),
            (2, -24),
            (3, 252),
            (4, -1472),
            (5, 4830),
            (6, -6048),
            (7, -16744),
            (8, 84480),
            (9, -113643),
            (10, -115920),
        ];
        for (n, v) in expect {
            assert_eq!(t.tau(n).unwrap(), v, "tau({n})");
        }
        assert!(t.tau(31).is_err());
        assert!(TauTable::new(0).is_err());
    }

    #[test]
    fn multiplicativity_and_hecke_recursion() {
        let t = TauTable::new(400).unwrap();
        // multiplicativity on coprime pairs
        for (a, b) in [(2usize, 3usize), (2, 5), (3, 5), (4, 9), (8, 25), (7, 11)] {
            assert_eq!(
                t.tau(a * b).unwrap(),
                t.tau(a).unwrap() * t.tau(b).unwrap(),
                "tau({a}*{b})"
            );
        }
        // tau(p^2) = tau(p)^2 - p^11
        for p in [2usize, 3, 5, 7, 11, 13, 17, 19] {
            assert_eq!(
                t.tau(p * p).unwrap(),
                t.tau(p).unwrap().pow(2) - (p as i128).pow(11),
                "p = {p}"
            );
        }
        assert_eq!(t.tau(2).unwrap().pow(2) - t.tau(4).unwrap(), 1 << 11);
    }

    #[test]
    fn congruence_mod_691() {
        // tau(n) = sigma_11(n) mod 691
        let t = TauTable::new(50).unwrap();
        for n in 1..=50usize {
            let sigma11: i128 = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| (d as i128).pow(11) % 691)
                .sum();
            let lhs = t.tau(n).unwrap().rem_euclid(691);
            assert_eq!(lhs, sigma11.rem_euclid(691), "n = {n}");
        }
    }

    #[test]
    fn deligne_bound_on_lambda() {
        let t = TauTable::new(200).unwrap();
        for n in 1..=200usize {
            let tau_div = crate::arith::divisor_count(n as u64).unwrap() as f64;
            assert!(
                t.lambda(n).unwrap().abs() <= tau_div + 1e-9,
                "n = {n}"
            );
        }
    }
}
