//! Python module `rtf_lab`: the verification suites and single orbital
//! integrals, returning reports as dictionaries.
//!
//! Build with `maturin develop` (the `extension-module` feature is enabled
//! by `pyproject.toml`).

pub mod api;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use api::Options;

fn to_py(py: Python<'_>, r: rtf_lab::Result<String>) -> PyResult<Py<PyAny>> {
    let text = r.map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn options(samples: usize, seed: u64, c_psi: i64, strategy: &str, omega: &str) -> Options {
    Options {
        samples,
        seed,
        c_psi,
        strategy: strategy.into(),
        omega: omega.into(),
    }
}

/// Fundamental lemma table against the S-side orbital integrals.
#[pyfunction]
#[pyo3(signature = (q, m, vx, samples=3, seed=0, c_psi=0, strategy="fast", omega="restriction"))]
#[allow(clippy::too_many_arguments)]
fn verify_fl(
    py: Python<'_>,
    q: u32,
    m: Vec<i64>,
    vx: Vec<i64>,
    samples: usize,
    seed: u64,
    c_psi: i64,
    strategy: &str,
    omega: &str,
) -> PyResult<Py<PyAny>> {
    let o = options(samples, seed, c_psi, strategy, omega);
    to_py(py, py.detach(|| api::fl(q, &m, &vx, &o)))
}

/// Arithmetic fundamental lemma for odd v(x).
#[pyfunction]
#[pyo3(signature = (q, m, vx, samples=3, seed=0, c_psi=0, strategy="fast", omega="restriction"))]
#[allow(clippy::too_many_arguments)]
fn verify_afl(
    py: Python<'_>,
    q: u32,
    m: Vec<i64>,
    vx: Vec<i64>,
    samples: usize,
    seed: u64,
    c_psi: i64,
    strategy: &str,
    omega: &str,
) -> PyResult<Py<PyAny>> {
    let o = options(samples, seed, c_psi, strategy, omega);
    to_py(py, py.detach(|| api::afl(q, &m, &vx, &o)))
}

/// Gauss-sum laws over the given field sizes, psi conductors and shells.
#[pyfunction]
#[pyo3(signature = (q, conductors, n, seed=0))]
fn verify_gauss_laws(
    py: Python<'_>,
    q: Vec<u32>,
    conductors: Vec<i64>,
    n: Vec<i64>,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let o = Options {
        seed,
        ..Options::default()
    };
    to_py(py, py.detach(|| api::gauss(&q, &conductors, &n, &o)))
}

/// The metric at the infinite place against |inv'(delta)|.
#[pyfunction]
#[pyo3(signature = (q, count=100, seed=0))]
fn verify_minf(py: Python<'_>, q: Vec<u32>, count: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let o = Options {
        seed,
        ..Options::default()
    };
    to_py(py, py.detach(|| api::minf(&q, count, &o)))
}

/// Split-place matching of random box functions.
#[pyfunction]
#[pyo3(signature = (q, pairs=50, seed=0))]
fn verify_split_matching(
    py: Python<'_>,
    q: Vec<u32>,
    pairs: usize,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let o = Options {
        seed,
        ..Options::default()
    };
    to_py(py, py.detach(|| api::split(&q, pairs, &o)))
}

/// A single orbital integral; `phi` and `x` use the command-line syntax.
#[pyfunction]
#[pyo3(signature = (q, phi, x, flavor="unramified", eps="1", c_psi=0))]
fn orbital_eval(
    py: Python<'_>,
    q: u32,
    phi: &str,
    x: &str,
    flavor: &str,
    eps: &str,
    c_psi: i64,
) -> PyResult<Py<PyAny>> {
    let o = Options {
        c_psi,
        ..Options::default()
    };
    to_py(py, py.detach(|| api::orbital(q, phi, x, flavor, eps, &o)))
}

#[pymodule]
#[pyo3(name = "rtf_lab")]
fn rtf_lab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(verify_fl, m)?)?;
    m.add_function(wrap_pyfunction!(verify_afl, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gauss_laws, m)?)?;
    m.add_function(wrap_pyfunction!(verify_minf, m)?)?;
    m.add_function(wrap_pyfunction!(verify_split_matching, m)?)?;
    m.add_function(wrap_pyfunction!(orbital_eval, m)?)?;
    Ok(())
}
