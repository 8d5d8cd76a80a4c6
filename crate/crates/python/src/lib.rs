//! Python bindings. The extension module is named `symtomo`.
//!
//! States are passed as spec strings, the same text accepted by the
//! command-line tool (`"fock:1"`, `"coherent:1,0"`, `"up"` or a TOML table).

pub mod api;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use symtomo::ctomo::oracle_tomogram_fock;
use symtomo::states::SymplecticFrame;
use symtomo::{TomoError, C64};

create_exception!(
    symtomo,
    SymtomoError,
    PyValueError,
    "Bad input: malformed state, grid or angles."
);
create_exception!(
    symtomo,
    NumericalError,
    SymtomoError,
    "A numerical check on the result failed."
);

fn to_py(e: TomoError) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        SymtomoError::new_err(e.to_string())
    }
}

type Curve = (Vec<f64>, Vec<f64>);

/// Tomogram `w(X, mu, nu)` of a state. Returns `(X, w)`.
#[pyfunction]
#[pyo3(signature = (state, mu, nu, x_half_width=8.0, x_points=321, dim=32))]
fn tomogram(
    py: Python<'_>,
    state: &str,
    mu: f64,
    nu: f64,
    x_half_width: f64,
    x_points: usize,
    dim: usize,
) -> PyResult<Curve> {
    py.detach(|| api::tomogram(state, mu, nu, x_half_width, x_points, dim))
        .map_err(to_py)
}

/// Wigner function on a square grid. Returns `(axis, W)` with `W[i][j] = W(q_i, p_j)`.
#[pyfunction]
#[pyo3(signature = (state, half_width=6.0, points=81, dim=32))]
fn wigner(
    py: Python<'_>,
    state: &str,
    half_width: f64,
    points: usize,
    dim: usize,
) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    py.detach(|| api::wigner(state, half_width, points, dim))
        .map_err(to_py)
}

/// Distribution function of the quadrature `mu q + nu p`. Returns `(X, F)`.
#[pyfunction]
#[pyo3(signature = (state, mu, nu, x_half_width=8.0, x_points=321, dim=32))]
fn measure_cdf(
    py: Python<'_>,
    state: &str,
    mu: f64,
    nu: f64,
    x_half_width: f64,
    x_points: usize,
    dim: usize,
) -> PyResult<Curve> {
    py.detach(|| api::measure_cdf(state, mu, nu, x_half_width, x_points, dim))
        .map_err(to_py)
}

/// Spin tomogram at Euler angles. Returns `(m, probabilities)`.
#[pyfunction]
#[pyo3(signature = (state, phi=0.0, psi=0.0, theta=0.0))]
fn spin_tomogram(state: &str, phi: f64, psi: f64, theta: f64) -> PyResult<Curve> {
    api::spin_probabilities(state, phi, psi, theta).map_err(to_py)
}

/// Density matrix from spin tomograms given as `(phi, psi, theta, probs)`.
#[pyfunction]
fn reconstruct_spin(j: f64, records: Vec<api::SpinRecord>) -> PyResult<Vec<Vec<C64>>> {
    api::reconstruct_spin(j, &records).map_err(to_py)
}

/// Hermiticity, trace and positivity checks. Returns a dict.
#[pyfunction]
#[pyo3(signature = (state, dim=32))]
fn validate<'py>(py: Python<'py>, state: &str, dim: usize) -> PyResult<Bound<'py, PyDict>> {
    let d = api::validate(state, dim).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("dim", d.dim)?;
    out.set_item("hermiticity_defect", d.hermiticity_defect)?;
    out.set_item("trace_defect", d.trace_defect)?;
    out.set_item("min_eigenvalue", d.min_eigenvalue)?;
    out.set_item("passed", d.passed)?;
    Ok(out)
}

/// Tomogram in frame `(mu, nu)` at each of `times` under the potential
/// `a2 q^2 + a1 q + a0`. Returns `(X, rows)` with one row per time.
#[pyfunction]
#[pyo3(signature = (
    state, times, mu, nu, a2=0.5, a1=0.0, a0=0.0,
    family_half_width=2.5, family_nodes=64, x_half_width=8.0, x_points=321, dim=32
))]
#[allow(clippy::too_many_arguments)]
fn evolve(
    py: Python<'_>,
    state: &str,
    times: Vec<f64>,
    mu: f64,
    nu: f64,
    a2: f64,
    a1: f64,
    a0: f64,
    family_half_width: f64,
    family_nodes: usize,
    x_half_width: f64,
    x_points: usize,
    dim: usize,
) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let setup = api::EvolveSetup {
        a2,
        a1,
        a0,
        family_half_width,
        family_nodes,
        x_half_width,
        x_points,
        dim,
    };
    py.detach(|| api::evolve(state, &times, mu, nu, &setup))
        .map_err(to_py)
}

/// Star-product measure of two states in frame `(mu, nu)`. Returns `(X, F)`.
#[pyfunction]
#[pyo3(signature = (state_a, state_b, mu, nu, x_half_width=2.0, targets=5, dim=12, coarse=true))]
#[allow(clippy::too_many_arguments)]
fn star_measure(
    py: Python<'_>,
    state_a: &str,
    state_b: &str,
    mu: f64,
    nu: f64,
    x_half_width: f64,
    targets: usize,
    dim: usize,
    coarse: bool,
) -> PyResult<Curve> {
    py.detach(|| api::star_measure(state_a, state_b, (mu, nu), x_half_width, targets, dim, coarse))
        .map_err(to_py)
}

/// Closed-form tomogram of the number state `|n>`.
#[pyfunction]
fn fock_tomogram_exact(n: usize, x: f64, mu: f64, nu: f64) -> PyResult<f64> {
    let frame = SymplecticFrame::new(mu, nu).map_err(to_py)?;
    Ok(oracle_tomogram_fock(n, x, &frame))
}

#[pymodule]
#[pyo3(name = "symtomo")]
fn symtomo_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SymtomoError", m.py().get_type::<SymtomoError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(tomogram, m)?)?;
    m.add_function(wrap_pyfunction!(wigner, m)?)?;
    m.add_function(wrap_pyfunction!(measure_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(spin_tomogram, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_spin, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(star_measure, m)?)?;
    m.add_function(wrap_pyfunction!(fock_tomogram_exact, m)?)?;
    Ok(())
}
