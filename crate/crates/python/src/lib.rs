//! Python bindings for `frackin`.
//!
//! Evaluation functions return `(value, error_estimate, terms_used)`.
//! Overflow maps to `OverflowError`, non-convergence to `RuntimeError` and
//! every other failure to `ValueError`.

use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use frackin::mlkit::{EvalConfig, EvalResult, MLParams, WrightParams};
use frackin::{Error, KineticFamily, KineticProblem};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Overflow(_) => PyOverflowError::new_err(e.to_string()),
        Error::NoConvergence { .. } | Error::Quadrature(_) | Error::Tail { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn cfg(tol: f64, z_max: f64) -> EvalConfig {
    EvalConfig::new(tol).with_z_max(z_max)
}

fn triple(r: EvalResult) -> (f64, f64, usize) {
    (r.value, r.error_estimate, r.terms_used)
}

/// E_α(z).
#[pyfunction]
#[pyo3(signature = (alpha, z, tol = frackin::mlkit::DEFAULT_TOL, z_max = frackin::mlkit::DEFAULT_Z_MAX))]
fn eval_ml(alpha: f64, z: f64, tol: f64, z_max: f64) -> PyResult<(f64, f64, usize)> {
    frackin::eval_ml(alpha, z, &cfg(tol, z_max)).map(triple).map_err(to_py)
}

/// E_{α,β}(z).
#[pyfunction]
#[pyo3(signature = (alpha, beta, z, tol = frackin::mlkit::DEFAULT_TOL, z_max = frackin::mlkit::DEFAULT_Z_MAX))]
fn eval_ml2(alpha: f64, beta: f64, z: f64, tol: f64, z_max: f64) -> PyResult<(f64, f64, usize)> {
    frackin::eval_ml2(alpha, beta, z, &cfg(tol, z_max)).map(triple).map_err(to_py)
}

/// E^γ_{α,β}(z).
#[pyfunction]
#[pyo3(signature = (alpha, beta, gamma, z, tol = frackin::mlkit::DEFAULT_TOL, z_max = frackin::mlkit::DEFAULT_Z_MAX))]
fn eval_prabhakar(alpha: f64, beta: f64, gamma: f64, z: f64, tol: f64, z_max: f64) -> PyResult<(f64, f64, usize)> {
    let p = MLParams::new(alpha, beta, gamma).map_err(to_py)?;
    frackin::eval_prabhakar(p, z, &cfg(tol, z_max)).map(triple).map_err(to_py)
}

/// pΨq with `upper` and `lower` given as lists of `(a, A)` pairs.
#[pyfunction]
#[pyo3(signature = (upper, lower, z, tol = frackin::mlkit::DEFAULT_TOL, z_max = frackin::mlkit::DEFAULT_Z_MAX))]
fn eval_wright(
    upper: Vec<(f64, f64)>,
    lower: Vec<(f64, f64)>,
    z: f64,
    tol: f64,
    z_max: f64,
) -> PyResult<(f64, f64, usize)> {
    let w = WrightParams::new(upper, lower);
    frackin::eval_wright(&w, z, &cfg(tol, z_max)).map(triple).map_err(to_py)
}

/// Tsallis q-exponential density shape.
#[pyfunction]
fn q_exponential(x: f64, q: f64, kt: f64) -> PyResult<f64> {
    frackin::q_exponential(x, q, kt).map_err(to_py)
}

/// Closed-form solution of a kinetic equation sampled at `ts`.
///
/// `family` accepts the command-line names: standard, theorem1, theorem2, ffun.
#[pyfunction]
#[pyo3(signature = (family, ts, n0 = 1.0, c = 1.0, nu = 1.0, mu = 0.0, gamma = 0.0, b = 0.0, tol = frackin::mlkit::DEFAULT_TOL, z_max = frackin::mlkit::DEFAULT_Z_MAX))]
#[allow(clippy::too_many_arguments)]
fn solve(
    family: &str,
    ts: Vec<f64>,
    n0: f64,
    c: f64,
    nu: f64,
    mu: f64,
    gamma: f64,
    b: f64,
    tol: f64,
    z_max: f64,
) -> PyResult<Vec<f64>> {
    let family: KineticFamily = family.parse().map_err(to_py)?;
    let prob = KineticProblem { family, n0, c, nu, mu, gamma, b };
    let sol = frackin::solve(&prob).map_err(to_py)?;
    let cfg = cfg(tol, z_max);
    ts.iter().map(|&t| sol.eval(t, &cfg).map_err(to_py)).collect()
}

#[pymodule]
fn frackin_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(eval_ml, m)?)?;
    m.add_function(wrap_pyfunction!(eval_ml2, m)?)?;
    m.add_function(wrap_pyfunction!(eval_prabhakar, m)?)?;
    m.add_function(wrap_pyfunction!(eval_wright, m)?)?;
    m.add_function(wrap_pyfunction!(q_exponential, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    Ok(())
}
