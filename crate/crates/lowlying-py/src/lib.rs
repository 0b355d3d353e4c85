//! Python bindings over the lowlying core crate: arithmetic primitives,
//! Chebyshev linearization, partition counts, the tau oracle, the
//! Delta-symbol, the closed-form predictions and a small Monte Carlo
//! entry point.

use lowlying::chebyshev;
use lowlying::deltasym::{self, DeltaParams, TauTable};
use lowlying::kernels::{self, SignData, SupportBoundParams, SymmetryClass};
use lowlying::partitions;
use lowlying::rmt::{self, MonteCarloConfig};
use lowlying::testfn::TestFunction;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: lowlying::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_tf(family: &str, nu: f64) -> PyResult<TestFunction> {
    let fam = family.parse().map_err(err)?;
    TestFunction::new(fam, nu).map_err(err)
}

fn parse_class(class: &str) -> PyResult<SymmetryClass> {
    class.parse().map_err(err)
}

/// S(m, n; c), the Kloosterman sum.
#[pyfunction]
fn kloosterman(m: u64, n: u64, c: u64) -> f64 {
    lowlying::arith::kloosterman(m, n, c)
}

/// The Weil-Estermann bound sqrt(gcd(m,n,c)) tau(c) sqrt(c).
#[pyfunction]
fn weil_bound(m: u64, n: u64, c: u64) -> f64 {
    lowlying::arith::weil_bound(m, n, c)
}

/// Chebyshev polynomial of the second kind X_r(x).
#[pyfunction]
fn chebyshev_eval(r: u32, x: f64) -> f64 {
    chebyshev::chebyshev_eval(r, x)
}

/// Exact linearization coefficients of X_r^varpi in the X_j basis.
#[pyfunction]
fn linearization_coeffs(varpi: u32, r: u32) -> PyResult<Vec<u128>> {
    Ok(chebyshev::linearization_table(varpi, r).map_err(err)?.coeffs)
}

/// Stirling number of the second kind S(n, k).
#[pyfunction]
fn stirling2(n: u32, k: u32) -> u128 {
    partitions::stirling2(n, k)
}

/// Number of pair partitions of a set of even size alpha.
#[pyfunction]
fn count_pair_partitions(alpha: u32) -> PyResult<u128> {
    partitions::count_pair_partitions(alpha).map_err(err)
}

/// Exact Ramanujan tau(n) from the eta^24 oracle.
#[pyfunction]
fn ramanujan_tau(n: usize) -> PyResult<i128> {
    TauTable::new(n).map_err(err)?.tau(n).map_err(err)
}

/// Delta_q(m, n) with a certified truncation budget.
#[pyfunction]
#[pyo3(signature = (q, kappa, m, n, tol=1e-8))]
fn delta_symbol(q: u64, kappa: u32, m: u64, n: u64, tol: f64) -> PyResult<f64> {
    let dp = DeltaParams::new(q, kappa, tol).map_err(err)?;
    deltasym::delta_symbol(&dp, m, n).map_err(err)
}

/// Predicted one-level density for sym^r, Phihat(0) + (-1)^{r+1} Phi(0)/2.
#[pyfunction]
#[pyo3(signature = (r, family="fejer", nu=0.5))]
fn predicted_one_level(r: u32, family: &str, nu: f64) -> PyResult<f64> {
    Ok(kernels::predicted_one_level(r, &parse_tf(family, nu)?))
}

/// Predicted two-level density; eps = None for the unsigned family.
#[pyfunction]
#[pyo3(signature = (r, eps=None, family="fejer", nu=0.5))]
fn predicted_two_level(r: u32, eps: Option<i8>, family: &str, nu: f64) -> PyResult<f64> {
    let tf = parse_tf(family, nu)?;
    kernels::predicted_two_level(r, eps, &tf, &tf).map_err(err)
}

/// Asymptotic variance of the one-level statistic D1.
#[pyfunction]
#[pyo3(signature = (family="fejer", nu=0.5))]
fn predicted_variance(family: &str, nu: f64) -> PyResult<f64> {
    Ok(kernels::predicted_variance(&parse_tf(family, nu)?))
}

/// Asymptotic centered m-th moment, sigma^m (m-1)!! reading.
#[pyfunction]
#[pyo3(signature = (m, family="fejer", nu=0.5))]
fn predicted_moment(m: u32, family: &str, nu: f64) -> PyResult<f64> {
    Ok(kernels::predicted_moment(m, &parse_tf(family, nu)?))
}

/// Sign of the functional equation of L(sym^r f, s).
#[pyfunction]
fn sign_functional_equation(kappa: u32, r: u32, eps_f_q: i8) -> PyResult<i8> {
    kernels::sign_functional_equation(&SignData { kappa, r, eps_f_q }).map_err(err)
}

/// Symmetry type of the (optionally signed) sym^r family.
#[pyfunction]
#[pyo3(signature = (r, eps=None))]
fn symmetry_type(r: u32, eps: Option<i8>) -> PyResult<String> {
    Ok(kernels::symmetry_type(r, eps).map_err(err)?.to_string())
}

/// Support thresholds (nu1max, nu1max_signed, nu2max_unsigned,
/// nu2max_signed_c, nu2max_signed_thm).
#[pyfunction]
fn support_bounds(r: u32, kappa: u32, theta: f64) -> PyResult<(f64, f64, f64, f64, f64)> {
    let b = kernels::support_bounds(&SupportBoundParams { r, kappa, theta }).map_err(err)?;
    Ok((
        b.nu1max,
        b.nu1max_signed,
        b.nu2max_unsigned,
        b.nu2max_signed_c,
        b.nu2max_signed_thm,
    ))
}

/// Both routes of the density-kernel integral int Phi W_1 = int Phihat What_1.
#[pyfunction]
#[pyo3(signature = (class, family="fejer", nu=0.5))]
fn plancherel_integral(class: &str, family: &str, nu: f64) -> PyResult<(f64, f64)> {
    Ok(kernels::plancherel_integral(
        parse_class(class)?,
        &parse_tf(family, nu)?,
    ))
}

/// Haar Monte Carlo mean of D1 with standard error: (mean, stderr).
#[pyfunction]
#[pyo3(signature = (class, n=30, samples=500, seed=1, family="fejer", nu=0.5, workers=1))]
#[allow(clippy::too_many_arguments)]
fn monte_carlo_d1(
    class: &str,
    n: usize,
    samples: usize,
    seed: u64,
    family: &str,
    nu: f64,
    workers: usize,
) -> PyResult<(f64, f64)> {
    let cfg = MonteCarloConfig {
        class: parse_class(class)?,
        n,
        samples,
        seed,
        workers,
        tf1: parse_tf(family, nu)?,
        tf2: None,
    };
    let rep = rmt::monte_carlo(&cfg).map_err(err)?;
    Ok((rep.one_level.mean, rep.one_level.stderr))
}

#[pymodule]
fn lowlying_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(kloosterman, m)?)?;
    m.add_function(wrap_pyfunction!(weil_bound, m)?)?;
    m.add_function(wrap_pyfunction!(chebyshev_eval, m)?)?;
    m.add_function(wrap_pyfunction!(linearization_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(stirling2, m)?)?;
    m.add_function(wrap_pyfunction!(count_pair_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(ramanujan_tau, m)?)?;
    m.add_function(wrap_pyfunction!(delta_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_one_level, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_two_level, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_variance, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_moment, m)?)?;
    m.add_function(wrap_pyfunction!(sign_functional_equation, m)?)?;
    m.add_function(wrap_pyfunction!(symmetry_type, m)?)?;
    m.add_function(wrap_pyfunction!(support_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(plancherel_integral, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_d1, m)?)?;
    Ok(())
}
