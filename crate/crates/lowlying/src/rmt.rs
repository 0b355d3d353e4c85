//! Haar sampling from the classical compact ensembles SO(2N), SO(2N+1),
//! O (fair mixture) and USp(2N), eigenphase extraction, and Monte Carlo
//! estimation of the one- and two-level linear statistics.
//!
//! Dictionary between the family and the ensemble: scaled zeros are
//! x = theta * M / (2 pi) with M the matrix dimension, so the mean
//! spacing of low-lying zeros is 1; M plays the role of log(q^r).

use crate::kernels::SymmetryClass;
use crate::testfn::TestFunction;
use crate::{Error, Result};
use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Either a real orthogonal matrix or a complex unitary-symplectic one.
#[derive(Debug, Clone)]
pub enum SampledMatrix {
    Orthogonal(DMatrix<f64>),
    Symplectic(DMatrix<Complex<f64>>),
}

impl SampledMatrix {
    pub fn dim(&self) -> usize {
        match self {
            SampledMatrix::Orthogonal(m) => m.nrows(),
            SampledMatrix::Symplectic(m) => m.nrows(),
        }
    }
}

/// Haar sample: SOeven -> SO(2N), SOodd -> SO(2N+1), O -> fair coin
/// between the two, Sp -> USp(2N) embedded as a 2N x 2N complex matrix.
pub fn sample_matrix(class: SymmetryClass, n: usize, rng: &mut impl Rng) -> Result<SampledMatrix> {
    if n < 2 {
        return Err(Error::InvalidInput("sample_matrix requires N >= 2".into()));
    }
    match class {
        SymmetryClass::SOeven => Ok(SampledMatrix::Orthogonal(haar_so(2 * n, rng))),
        SymmetryClass::SOodd => Ok(SampledMatrix::Orthogonal(haar_so(2 * n + 1, rng))),
        SymmetryClass::O => {
            let m = if rng.random_bool(0.5) { 2 * n } else { 2 * n + 1 };
            Ok(SampledMatrix::Orthogonal(haar_so(m, rng)))
        }
        SymmetryClass::Sp => Ok(SampledMatrix::Symplectic(haar_usp(n, rng))),
    }
}

/// Haar SO(m): QR of a Gaussian matrix with the triangular diagonal made
/// positive (Haar on O(m)), then a fixed reflection onto the det = +1
/// component when needed.
fn haar_so(m: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for i in 0..m {
        if r[(i, i)] < 0.0 {
            for k in 0..m {
                q[(k, i)] = -q[(k, i)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for k in 0..m {
            q[(0, k)] = -q[(0, k)];
        }
    }
    q
}

type Quat = [f64; 4];

fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qconj(a: Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Haar USp(2N): modified Gram-Schmidt over the quaternions on a
/// Gaussian quaternion matrix, then the standard 2 x 2 complex block
/// embedding a + bi + cj + dk -> [[a+bi, c+di], [-c+di, a-bi]].
fn haar_usp(n: usize, rng: &mut impl Rng) -> DMatrix<Complex<f64>> {
    let mut cols: Vec<Vec<Quat>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    [
                        rng.sample::<f64, _>(StandardNormal),
                        rng.sample::<f64, _>(StandardNormal),
                        rng.sample::<f64, _>(StandardNormal),
                        rng.sample::<f64, _>(StandardNormal),
                    ]
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        for j in 0..k {
            // quaternion inner product <u_j, v_k> = sum conj(u_ij) v_ik
            let mut ip = [0.0; 4];
            for i in 0..n {
                let t = qmul(qconj(cols[j][i]), cols[k][i]);
                for c in 0..4 {
                    ip[c] += t[c];
                }
            }
            for i in 0..n {
                let t = qmul(cols[j][i], ip);
                for c in 0..4 {
                    cols[k][i][c] -= t[c];
                }
            }
        }
        let norm: f64 = cols[k]
            .iter()
            .map(|q| q.iter().map(|x| x * x).sum::<f64>())
            .sum::<f64>()
            .sqrt();
        for i in 0..n {
            for c in 0..4 {
                cols[k][i][c] /= norm;
            }
        }
    }
    let mut u = DMatrix::from_element(2 * n, 2 * n, Complex::new(0.0, 0.0));
    for (col, column) in cols.iter().enumerate() {
        for (row, &q) in column.iter().enumerate() {
            let alpha = Complex::new(q[0], q[1]);
            let beta = Complex::new(q[2], q[3]);
            u[(2 * row, 2 * col)] = alpha;
            u[(2 * row, 2 * col + 1)] = beta;
            u[(2 * row + 1, 2 * col)] = -beta.conj();
            u[(2 * row + 1, 2 * col + 1)] = alpha.conj();
        }
    }
    u
}

/// The scaled low-lying zeros of one sample. The signed list is the
/// symmetric closure of `positive` plus an exact zero when
/// `forced_zero` is set (odd orthogonal matrices).
#[derive(Debug, Clone, Serialize)]
pub struct ZeroSample {
    pub class: SymmetryClass,
    /// matrix dimension M
    pub dim: usize,
    /// the positive half of the zeros, ascending
    pub positive: Vec<f64>,
    pub forced_zero: bool,
}

impl ZeroSample {
    /// The full signed list, length = dim.
    pub fn signed_zeros(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.positive.iter().rev().map(|&x| -x).collect();
        if self.forced_zero {
            out.push(0.0);
        }
        out.extend(self.positive.iter().copied());
        out
    }
}

/// Eigenphases via the Hermitian part (U + U^H)/2, whose eigenvalues are
/// cos(theta) in exact +/- pairs; zeros x_j = theta_j M / (2 pi).
pub fn eigenphases_to_zeros(u: &SampledMatrix, class: SymmetryClass) -> Result<ZeroSample> {
    let (cosines, dim) = match u {
        SampledMatrix::Orthogonal(m) => {
            let h = (m + m.transpose()) * 0.5;
            (h.symmetric_eigenvalues().as_slice().to_vec(), m.nrows())
        }
        SampledMatrix::Symplectic(m) => {
            let h = (m + m.adjoint()) * Complex::new(0.5, 0.0);
            (h.symmetric_eigenvalues().as_slice().to_vec(), m.nrows())
        }
    };
    let mut c = cosines;
    c.sort_by(f64::total_cmp);
    let odd = dim % 2 == 1;
    let tol = 1e-6;
    let mut paired = Vec::with_capacity(dim / 2);
    let mut singleton: Option<f64> = None;
    let mut i = 0;
    while i < c.len() {
        if i + 1 < c.len() && (c[i + 1] - c[i]).abs() < tol {
            paired.push(0.5 * (c[i] + c[i + 1]));
            i += 2;
        } else if odd && singleton.is_none() {
            singleton = Some(c[i]);
            i += 1;
        } else {
            return Err(Error::PairingFailure(format!(
                "unpaired eigenvalue {} in dimension {dim}",
                c[i]
            )));
        }
    }
    if odd {
        // the forced eigenvalue 1 of an odd special orthogonal matrix
        let s = singleton.ok_or_else(|| {
            Error::PairingFailure("odd dimension but no singleton eigenvalue".into())
        })?;
        if (s - 1.0).abs() > tol {
            return Err(Error::PairingFailure(format!(
                "singleton eigenvalue {s} is not the forced eigenvalue 1"
            )));
        }
    }
    let scale = dim as f64 / (2.0 * std::f64::consts::PI);
    let mut positive: Vec<f64> = paired
        .iter()
        .map(|&cv| cv.clamp(-1.0, 1.0).acos() * scale)
        .collect();
    positive.sort_by(f64::total_cmp);
    Ok(ZeroSample {
        class,
        dim,
        positive,
        forced_zero: odd,
    })
}

/// D1 = sum over all signed zeros (and the forced zero) of Phi(x_j).
pub fn one_level_stat(zs: &ZeroSample, tf: &TestFunction) -> f64 {
    let mut acc = if zs.forced_zero { tf.phi(0.0) } else { 0.0 };
    for &x in &zs.positive {
        acc += 2.0 * tf.phi(x);
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoLevelMethod {
    Direct,
    ViaIdentity,
}

/// D2 = sum over ordered index pairs j1 != +/- j2 of Phi1(x_{j1}) Phi2(x_{j2}).
///
/// Direct: honest double sum over pair indices (each pair index stands
/// for the two slots +/-j, the forced zero is its own index).
/// ViaIdentity: D1(Phi1) D1(Phi2) - 2 D1(Phi1 Phi2) + 1_{forced} Phi1(0) Phi2(0).
pub fn two_level_stat(
    zs: &ZeroSample,
    tf1: &TestFunction,
    tf2: &TestFunction,
    method: TwoLevelMethod,
) -> f64 {
    match method {
        TwoLevelMethod::Direct => {
            // per-index slot sums Phi(x_j) + Phi(-x_j) = 2 Phi(x_j)
            let mut a: Vec<f64> = zs.positive.iter().map(|&x| 2.0 * tf1.phi(x)).collect();
            let mut b: Vec<f64> = zs.positive.iter().map(|&x| 2.0 * tf2.phi(x)).collect();
            if zs.forced_zero {
                a.push(tf1.phi(0.0));
                b.push(tf2.phi(0.0));
            }
            let mut acc = 0.0;
            for (p, &ap) in a.iter().enumerate() {
                for (q, &bq) in b.iter().enumerate() {
                    if p != q {
                        acc += ap * bq;
                    }
                }
            }
            acc
        }
        TwoLevelMethod::ViaIdentity => {
            let d1a = one_level_stat(zs, tf1);
            let d1b = one_level_stat(zs, tf2);
            let mut prod = if zs.forced_zero {
                tf1.phi(0.0) * tf2.phi(0.0)
            } else {
                0.0
            };
            for &x in &zs.positive {
                prod += 2.0 * tf1.phi(x) * tf2.phi(x);
            }
            let forced = if zs.forced_zero {
                tf1.phi(0.0) * tf2.phi(0.0)
            } else {
                0.0
            };
            d1a * d1b - 2.0 * prod + forced
        }
    }
}

#[derive(Debug, Clone)]
pub struct MonteCarloConfig {
    pub class: SymmetryClass,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub tf1: TestFunction,
    /// enables the two-level statistics when present
    pub tf2: Option<TestFunction>,
}

/// Summary of one statistic across the run.
#[derive(Debug, Clone, Serialize)]
pub struct StatSummary {
    pub statistic: String,
    pub samples: usize,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    /// centered moments, index = order (0..=6)
    pub centered_moments: Vec<f64>,
    pub moment_stderrs: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloReport {
    pub class: SymmetryClass,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub one_level: StatSummary,
    pub two_level: Option<StatSummary>,
    pub two_level_identity_mean: Option<f64>,
    /// max over samples of |direct - via_identity|
    pub max_identity_gap: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// RNG substream for one sample; independent of the worker layout, so
/// reports are reproducible for any worker count.
fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

fn summarize(name: &str, values: &[f64]) -> StatSummary {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut centered = vec![0.0; 7];
    centered[0] = 1.0;
    for &v in values {
        let d = v - mean;
        let mut p = d;
        for m in centered.iter_mut().skip(1) {
            *m += p;
            p *= d;
        }
    }
    for m in centered.iter_mut().skip(1) {
        *m /= n as f64;
    }
    let variance = centered[2] * n as f64 / (n as f64 - 1.0);
    let mut stderrs = vec![0.0; 7];
    for order in 1..=6usize {
        let est = if order == 1 { 0.0 } else { centered[order] };
        let var_of_est = values
            .iter()
            .map(|&v| {
                let d = (v - mean).powi(order as i32) - est;
                d * d
            })
            .sum::<f64>()
            / (n as f64 - 1.0);
        stderrs[order] = (var_of_est / n as f64).sqrt();
    }
    StatSummary {
        statistic: name.to_string(),
        samples: n,
        mean,
        variance,
        stderr: (variance / n as f64).sqrt(),
        centered_moments: centered,
        moment_stderrs: stderrs,
    }
}

/// Streamed Haar Monte Carlo: sample -> eigenphases -> statistics.
/// Deterministic for a fixed seed, independent of the worker count.
pub fn monte_carlo(cfg: &MonteCarloConfig) -> Result<MonteCarloReport> {
    if cfg.samples < 100 {
        return Err(Error::InvalidInput("monte_carlo requires samples >= 100".into()));
    }
    let workers = cfg.workers.max(1).min(cfg.samples);
    let mut d1 = vec![0.0f64; cfg.samples];
    let mut d2 = vec![0.0f64; cfg.samples];
    let mut d2i = vec![0.0f64; cfg.samples];

    let run_range = |lo: usize,
                     hi: usize,
                     d1: &mut [f64],
                     d2: &mut [f64],
                     d2i: &mut [f64]|
     -> Result<()> {
        for i in lo..hi {
            let mut rng = sample_rng(cfg.seed, i as u64);
            let u = sample_matrix(cfg.class, cfg.n, &mut rng)?;
            let zs = eigenphases_to_zeros(&u, cfg.class)?;
            d1[i - lo] = one_level_stat(&zs, &cfg.tf1);
            if let Some(tf2) = &cfg.tf2 {
                d2[i - lo] = two_level_stat(&zs, &cfg.tf1, tf2, TwoLevelMethod::Direct);
                d2i[i - lo] = two_level_stat(&zs, &cfg.tf1, tf2, TwoLevelMethod::ViaIdentity);
            }
        }
        Ok(())
    };

    if workers == 1 {
        run_range(0, cfg.samples, &mut d1, &mut d2, &mut d2i)?;
    } else {
        // contiguous blocks per worker; per-sample RNG keeps the result
        // identical to the single-threaded run
        let block = cfg.samples.div_ceil(workers);
        let chunks1 = d1.chunks_mut(block);
        let chunks2 = d2.chunks_mut(block);
        let chunks3 = d2i.chunks_mut(block);
        std::thread::scope(|scope| -> Result<()> {
            let mut handles = Vec::new();
            for (w, ((c1, c2), c3)) in chunks1.zip(chunks2).zip(chunks3).enumerate() {
                let lo = w * block;
                let hi = (lo + c1.len()).min(cfg.samples);
                let run = &run_range;
                handles.push(scope.spawn(move || run(lo, hi, c1, c2, c3)));
            }
            for h in handles {
                h.join().expect("monte carlo worker panicked")?;
            }
            Ok(())
        })?;
    }

    let one = summarize("D1", &d1);
    let (two, two_identity_mean, gap) = if cfg.tf2.is_some() {
        let gap = d2
            .iter()
            .zip(d2i.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let s = summarize("D2", &d2);
        let im = d2i.iter().sum::<f64>() / d2i.len() as f64;
        (Some(s), Some(im), gap)
    } else {
        (None, None, 0.0)
    };
    Ok(MonteCarloReport {
        class: cfg.class,
        n: cfg.n,
        samples: cfg.samples,
        seed: cfg.seed,
        one_level: one,
        two_level: two,
        two_level_identity_mean: two_identity_mean,
        max_identity_gap: gap,
    })
}
