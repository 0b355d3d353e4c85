//! Set-partition combinatorics for the moment computation: restricted
//! growth surjections P(alpha, s), multiplicity profiles, the filtered
//! classes P^{>=2} and P^2, and the index-reordering identity.

use crate::{Error, Result};

/// A surjection sigma: {1..alpha} -> {1..s} in restricted-growth form:
/// sigma(1) = 1 and each new label exceeds the running maximum by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RGSurjection {
    pub alpha: u32,
    pub s: u32,
    pub labels: Vec<u32>,
}

impl RGSurjection {
    /// Multiplicity profile varpi_u = #sigma^{-1}({u}), u = 1..s.
    pub fn profile(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.s as usize];
        for &l in &self.labels {
            counts[(l - 1) as usize] += 1;
        }
        counts
    }

    pub fn is_restricted_growth(&self) -> bool {
        let mut max = 0u32;
        for &l in &self.labels {
            if l == 0 || l > max + 1 {
                return false;
            }
            max = max.max(l);
        }
        max == self.s && self.labels.len() == self.alpha as usize
    }
}

/// All restricted-growth surjections onto {1..s}, generated depth-first
/// while tracking the running maximum label.
pub fn enumerate_rg(alpha: u32, s: u32) -> Result<Vec<RGSurjection>> {
    if s < 1 || s > alpha || alpha > 12 {
        return Err(Error::SizeGuard(format!(
            "enumerate_rg requires 1 <= s <= alpha <= 12, got alpha = {alpha}, s = {s}"
        )));
    }
    let mut out = Vec::new();
    let mut labels = Vec::with_capacity(alpha as usize);
    fn rec(alpha: u32, s: u32, max: u32, labels: &mut Vec<u32>, out: &mut Vec<RGSurjection>) {
        let pos = labels.len() as u32;
        if pos == alpha {
            if max == s {
                out.push(RGSurjection {
                    alpha,
                    s,
                    labels: labels.clone(),
                });
            }
            return;
        }
        // cannot reach s labels if too few positions remain
        let remaining = alpha - pos;
        let top = (max + 1).min(s);
        for l in 1..=top {
            let new_max = max.max(l);
            if s - new_max <= remaining - 1 {
                labels.push(l);
                rec(alpha, s, new_max, labels, out);
                labels.pop();
            }
        }
    }
    rec(alpha, s, 0, &mut labels, &mut out);
    Ok(out)
}

/// Stirling number of the second kind by the standard recurrence.
pub fn stirling2(n: u32, k: u32) -> u128 {
    if k == 0 {
        return u128::from(n == 0);
    }
    if k > n {
        return 0;
    }
    let mut row = vec![0u128; k as usize + 1];
    row[0] = 1; // S(0, 0)
    for _ in 1..=n {
        for j in (1..=k as usize).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k as usize]
}

/// Keep the surjections whose every multiplicity satisfies `pred`.
pub fn filter_profile(list: &[RGSurjection], pred: impl Fn(u32) -> bool) -> Vec<RGSurjection> {
    list.iter()
        .filter(|s| s.profile().iter().all(|&m| pred(m)))
        .cloned()
        .collect()
}

/// P^2(alpha, s): every block has size exactly 2.
pub fn p_exactly_two(alpha: u32, s: u32) -> Result<Vec<RGSurjection>> {
    Ok(filter_profile(&enumerate_rg(alpha, s)?, |m| m == 2))
}

/// P^{>=2}(alpha, s): every block has size at least 2.
pub fn p_at_least_two(alpha: u32, s: u32) -> Result<Vec<RGSurjection>> {
    Ok(filter_profile(&enumerate_rg(alpha, s)?, |m| m >= 2))
}

/// alpha! / (2^{alpha/2} (alpha/2)!), the number of pair partitions of a
/// set of even size alpha, in exact integers.
pub fn count_pair_partitions(alpha: u32) -> Result<u128> {
    if alpha % 2 != 0 || alpha > 20 {
        return Err(Error::InvalidInput(format!(
            "count_pair_partitions requires even alpha <= 20, got {alpha}"
        )));
    }
    let half = alpha / 2;
    let mut num: u128 = 1;
    for k in 1..=alpha as u128 {
        num *= k;
    }
    let mut den: u128 = 1 << half;
    for k in 1..=half as u128 {
        den *= k;
    }
    Ok(num / den)
}

/// Both sides of the reordering identity: the full m-fold sum of
/// g(x_{j_1}, ..., x_{j_m}) versus its regrouping over P(m, s) with
/// distinct outer indices.
pub fn reorder_check(
    m: u32,
    g: &dyn Fn(&[f64]) -> f64,
    xs: &[f64],
) -> Result<(f64, f64)> {
    if m == 0 || m > 5 || xs.len() > 8 {
        return Err(Error::SizeGuard(
            "reorder_check requires 1 <= m <= 5 and at most 8 points".into(),
        ));
    }
    let n = xs.len();
    // lhs: all index tuples
    let mut lhs = 0.0;
    let mut args = vec![0.0; m as usize];
    let mut idx = vec![0usize; m as usize];
    loop {
        for (a, &i) in args.iter_mut().zip(idx.iter()) {
            *a = xs[i];
        }
        lhs += g(&args);
        // odometer
        let mut pos = 0;
        loop {
            if pos == m as usize {
                break;
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == m as usize {
            break;
        }
    }

    // rhs: sum over s, sigma in P(m, s), distinct i_1..i_s
    let mut rhs = 0.0;
    for s in 1..=m {
        if (s as usize) > n {
            continue;
        }
        for sigma in enumerate_rg(m, s)? {
            let mut chosen = vec![0usize; s as usize];
            let mut used = vec![false; n];
            rhs += distinct_sum(&sigma, xs, &mut chosen, &mut used, 0, g);
        }
    }
    Ok((lhs, rhs))
}

fn distinct_sum(
    sigma: &RGSurjection,
    xs: &[f64],
    chosen: &mut Vec<usize>,
    used: &mut Vec<bool>,
    depth: usize,
    g: &dyn Fn(&[f64]) -> f64,
) -> f64 {
    if depth == sigma.s as usize {
        let args: Vec<f64> = sigma
            .labels
            .iter()
            .map(|&l| xs[chosen[(l - 1) as usize]])
            .collect();
        return g(&args);
    }
    let mut acc = 0.0;
    for i in 0..xs.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        chosen[depth] = i;
        acc += distinct_sum(sigma, xs, chosen, used, depth + 1, g);
        used[i] = false;
    }
    acc
}
