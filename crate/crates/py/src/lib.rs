//! Python module `cavity_lambda`: the Cs preset, single-point evaluation,
//! oracle comparison and TOML-driven scans.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cavity_lambda_sim::scenario::config::DEFAULT_GRID_N;
use cavity_lambda_sim::scenario::scan::default_jobs;
use cavity_lambda_sim::Error;

pub mod api;

use api::{Drive, Record};

fn py_err(e: Error) -> PyErr {
    if e.exit_code() == 1 {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

fn to_dict(py: Python<'_>, rec: Record) -> PyResult<Bound<'_, PyDict>> {
    let d = PyDict::new(py);
    for (k, v) in rec {
        d.set_item(k, v)?;
    }
    Ok(d)
}

/// Geometry and design numbers of the Cs zero-order cavity.
#[pyfunction]
#[pyo3(signature = (r=0.9, loss=0.0))]
fn cs_preset(py: Python<'_>, r: f64, loss: f64) -> PyResult<Bound<'_, PyDict>> {
    to_dict(py, api::preset_summary(r, loss).map_err(py_err)?)
}

/// Memory figures of merit for the Cs preset. Give exactly one of
/// `zeta`, `w` (s^-1) or `energy` (J, calibrated dipole).
#[pyfunction]
#[pyo3(signature = (*, r=0.9, loss=0.0, zeta=None, w=None, energy=None, n_in_1=1.0, g2_in=0.0, mode="flat", grid_n=DEFAULT_GRID_N))]
#[allow(clippy::too_many_arguments)]
fn evaluate<'py>(
    py: Python<'py>,
    r: f64,
    loss: f64,
    zeta: Option<f64>,
    w: Option<f64>,
    energy: Option<f64>,
    n_in_1: f64,
    g2_in: f64,
    mode: &str,
    grid_n: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let drive = Drive::from_options(zeta, w, energy).map_err(py_err)?;
    to_dict(py, api::evaluate(r, loss, drive, n_in_1, g2_in, mode, grid_n).map_err(py_err)?)
}

/// Closed forms next to the kernel-oracle values at one point.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (zeta, *, r=0.9, loss=0.0, n_in_1=1.0, g2_in=0.0, mode="flat", grid_n=DEFAULT_GRID_N))]
fn verify<'py>(
    py: Python<'py>,
    zeta: f64,
    r: f64,
    loss: f64,
    n_in_1: f64,
    g2_in: f64,
    mode: &str,
    grid_n: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let rec = py.detach(|| api::verify(r, loss, zeta, n_in_1, g2_in, mode, grid_n)).map_err(py_err)?;
    to_dict(py, rec)
}

/// Run a TOML scan config and return the CSV text.
#[pyfunction]
#[pyo3(signature = (config, *, jobs=None, verify=false))]
fn scan(py: Python<'_>, config: &str, jobs: Option<usize>, verify: bool) -> PyResult<String> {
    let jobs = jobs.unwrap_or_else(default_jobs);
    py.detach(|| api::scan_csv(config, jobs, verify)).map_err(py_err)
}

/// Design-rule CSV for every distinct cavity in a TOML config.
#[pyfunction]
fn limits(config: &str) -> PyResult<String> {
    api::limits_csv(config).map_err(py_err)
}

#[pymodule]
fn cavity_lambda(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(cs_preset, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(limits, m)?)?;
    Ok(())
}
