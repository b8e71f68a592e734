//! Python bindings. Models are given as builtin names (`"exp-model(2, 1, 0.5)"`)
//! or as JSON model documents; reports come back as JSON text.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use weylspec_core::eigen::radial_eigs as core_radial_eigs;
use weylspec_core::geometry::{self, CheckTolerances, SampleGrid};
use weylspec_core::numerics::{LeftBoundary, QuadratureSpec};
use weylspec_core::report::to_json;
use weylspec_core::warp::{self, Builtin, ManifoldModel};
use weylspec_core::weyl::{self, SweepPath};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn load_model(spec: &str) -> PyResult<ManifoldModel> {
    if spec.trim_start().starts_with('{') {
        ManifoldModel::from_json(spec).map_err(value_err)
    } else {
        warp::builtin_model(spec).map_err(value_err)
    }
}

/// Growth rate of a builtin, when it is known in closed form.
fn builtin_c(spec: &str) -> Option<f64> {
    match Builtin::parse(spec).ok()? {
        Builtin::EuclideanCone { .. } => Some(0.0),
        Builtin::Hyperbolic { .. } | Builtin::AppendixSurface { .. } => Some(1.0),
        Builtin::ExpModel { c, .. } => Some(c),
    }
}

fn growth_rate(model: &str, c: Option<f64>) -> PyResult<f64> {
    c.or_else(|| builtin_c(model))
        .ok_or_else(|| PyValueError::new_err("c is required for this model"))
}

/// Canonical text of a warp expression.
#[pyfunction]
fn parse_warp(text: &str) -> PyResult<String> {
    Ok(warp::parse_warp(text).map_err(value_err)?.to_string())
}

/// `ψ` and its partials up to second order at `(r, s)`.
#[pyfunction]
fn warp_jet<'py>(py: Python<'py>, text: &str, r: f64, s: f64) -> PyResult<Bound<'py, PyDict>> {
    let expr = warp::parse_warp(text).map_err(value_err)?;
    let j = warp::eval_warp(&expr, r, s).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("psi", j.psi)?;
    d.set_item("psi_r", j.psi_r)?;
    d.set_item("psi_s", j.psi_s)?;
    d.set_item("psi_rr", j.psi_rr)?;
    d.set_item("psi_rs", j.psi_rs)?;
    d.set_item("psi_ss", j.psi_ss)?;
    Ok(d)
}

/// Model document as JSON.
#[pyfunction]
fn model_json(model: &str) -> PyResult<String> {
    Ok(load_model(model)?.to_json())
}

/// Radial sectional curvature `−ψ_rr/ψ`.
#[pyfunction]
fn radial_curvature(model: &str, r: f64, s: f64) -> PyResult<f64> {
    let m = load_model(model)?;
    Ok(geometry::curvature_at(&m, r, s).map_err(value_err)?.radial_k)
}

/// Hypothesis check report as JSON. `theorem` is `thm1`, `thm2` or `kumura`.
#[pyfunction]
#[pyo3(signature = (model, theorem, c=None, c1=1.0, gamma=1.2, r_start=1.0, r_end=2000.0, count=40))]
#[allow(clippy::too_many_arguments)]
fn check_hypotheses(
    model: &str,
    theorem: &str,
    c: Option<f64>,
    c1: f64,
    gamma: f64,
    r_start: f64,
    r_end: f64,
    count: usize,
) -> PyResult<String> {
    let m = load_model(model)?;
    let grid = SampleGrid::geometric(r_start.max(m.r_min), r_end, count).map_err(value_err)?;
    let tol = CheckTolerances::default();
    let rep = match theorem {
        "thm1" => geometry::check_thm1_with(&m, growth_rate(model, c)?, c1, &grid, &tol),
        "thm2" => geometry::check_thm2_with(&m, c1, gamma, &grid, &tol),
        "kumura" => geometry::check_kumura_with(&m, growth_rate(model, c)?, &grid.radii, Default::default(), grid.s_points, &tol),
        other => return Err(PyValueError::new_err(format!("unknown theorem '{other}'"))),
    }
    .map_err(value_err)?;
    Ok(rep.to_json())
}

/// `(ratio, ‖u‖, ‖Δu + λu‖)` for one Weyl function on the standard path.
#[pyfunction]
#[pyo3(signature = (model, lam, k, m=4, c=None))]
fn residual(model: &str, lam: f64, k: usize, m: usize, c: Option<f64>) -> PyResult<(f64, f64, f64)> {
    let mm = load_model(model)?;
    let params = weyl::WeylParams::for_model(&mm, lam, growth_rate(model, c)?, k, m);
    let wf = weyl::build_weyl(&params, &mm).map_err(value_err)?;
    let rep = weyl::residual(&wf, &QuadratureSpec::default()).map_err(runtime_err)?;
    Ok((rep.ratio, rep.norm_u, rep.norm_residual))
}

/// Residual sweep table as JSON. Passing `alpha` selects the zero-growth path.
#[pyfunction]
#[pyo3(signature = (model, lambdas, ks, m=4, c=None, alpha=None, epsilon=0.05))]
fn residual_sweep(
    model: &str,
    lambdas: Vec<f64>,
    ks: Vec<usize>,
    m: usize,
    c: Option<f64>,
    alpha: Option<f64>,
    epsilon: f64,
) -> PyResult<String> {
    let mm = load_model(model)?;
    let path = match alpha {
        Some(alpha) => SweepPath::Zero { alpha },
        None => SweepPath::Standard { c: growth_rate(model, c)? },
    };
    let table = weyl::residual_sweep(&mm, &lambdas, &ks, m, path, epsilon, &QuadratureSpec::default())
        .map_err(value_err)?;
    to_json(&table).map_err(runtime_err)
}

/// Lowest eigenvalues of the radial operator on `[r0, r_max]`.
#[pyfunction]
#[pyo3(signature = (model, r0, r_max, h, count=6, left="dirichlet"))]
fn radial_eigs(model: &str, r0: f64, r_max: f64, h: f64, count: usize, left: &str) -> PyResult<Vec<f64>> {
    let m = load_model(model)?;
    let left = match left {
        "dirichlet" => LeftBoundary::Dirichlet,
        "regular" => LeftBoundary::Regular,
        other => return Err(PyValueError::new_err(format!("unknown boundary '{other}'"))),
    };
    let rep = core_radial_eigs(&m, r0, r_max, h, count, left).map_err(value_err)?;
    Ok(rep.eigenvalues)
}

/// `(inside, min_margin)` for the horoball inclusion on `[0, r_max]`.
#[pyfunction]
#[pyo3(signature = (r_max=50.0, steps=400))]
fn horoball_margin(r_max: f64, steps: usize) -> PyResult<(bool, f64)> {
    geometry::horoball_margin(r_max, steps).map_err(value_err)
}

#[pymodule]
fn weylspec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse_warp, m)?)?;
    m.add_function(wrap_pyfunction!(warp_jet, m)?)?;
    m.add_function(wrap_pyfunction!(model_json, m)?)?;
    m.add_function(wrap_pyfunction!(radial_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(check_hypotheses, m)?)?;
    m.add_function(wrap_pyfunction!(residual, m)?)?;
    m.add_function(wrap_pyfunction!(residual_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(radial_eigs, m)?)?;
    m.add_function(wrap_pyfunction!(horoball_margin, m)?)?;
    Ok(())
}
