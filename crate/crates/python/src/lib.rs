//! Python bindings for `cmc-rot`.
//!
//! Reports come back as plain dicts (the same field names as the CLI's JSON
//! output). Invalid parameters raise `ValueError`; numerical failures raise
//! `cmc_rot.NumericalError`.

use cmc_rot::basis;
use cmc_rot::isoperimetric;
use cmc_rot::nesting;
use cmc_rot::stability::{self, Hemisphere};
use cmc_rot::{Bracket, CmcError, SphereParams};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(cmc_rot, NumericalError, PyRuntimeError);

fn to_py(err: CmcError) -> PyErr {
    if err.is_invalid_input() {
        PyValueError::new_err(err.to_string())
    } else {
        NumericalError::new_err(err.to_string())
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn tol_or_default(tol: Option<&Tolerance>) -> cmc_rot::Tolerance {
    tol.map(|t| t.0).unwrap_or_default()
}

/// `H^n` (`epsilon = -1`) or `S^n` (`epsilon = 1`).
#[pyclass(frozen, skip_from_py_object, module = "cmc_rot")]
#[derive(Clone)]
struct SpaceForm(cmc_rot::SpaceForm);

#[pymethods]
impl SpaceForm {
    #[new]
    fn new(epsilon: i8, n: u32) -> PyResult<Self> {
        cmc_rot::SpaceForm::from_epsilon(epsilon, n).map(SpaceForm).map_err(to_py)
    }

    #[getter]
    fn epsilon(&self) -> i8 {
        self.0.epsilon() as i8
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    /// `π` on `S^n`, `inf` on `H^n`.
    #[getter]
    fn max_radius(&self) -> f64 {
        self.0.max_radius()
    }

    /// Infimum of the mean curvatures that close up: `n - 1` on `H^n`, `0`
    /// on `S^n`.
    #[getter]
    fn critical_mean_curvature(&self) -> f64 {
        self.0.critical_mean_curvature()
    }

    fn sin(&self, s: f64) -> f64 {
        self.0.sin_eps(s)
    }

    fn cos(&self, s: f64) -> f64 {
        self.0.cos_eps(s)
    }

    fn phi(&self, s: f64) -> PyResult<f64> {
        basis::phi_eps(&self.0, s).map_err(to_py)
    }

    fn phi_prime(&self, s: f64) -> PyResult<f64> {
        basis::phi_eps_prime(&self.0, s).map_err(to_py)
    }

    fn phi_second(&self, s: f64) -> PyResult<f64> {
        basis::phi_eps_second(&self.0, s).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("SpaceForm(epsilon={}, n={})", self.epsilon(), self.n())
    }
}

#[pyclass(frozen, skip_from_py_object, module = "cmc_rot")]
#[derive(Clone)]
struct Tolerance(cmc_rot::Tolerance);

#[pymethods]
impl Tolerance {
    #[new]
    #[pyo3(signature = (rel = 1e-10, abs = 1e-12, max_depth = 50))]
    fn new(rel: f64, abs: f64, max_depth: u32) -> PyResult<Self> {
        cmc_rot::Tolerance::new(rel, abs, max_depth).map(Tolerance).map_err(to_py)
    }

    #[getter]
    fn rel(&self) -> f64 {
        self.0.rel
    }

    #[getter]
    fn abs(&self) -> f64 {
        self.0.abs
    }

    #[getter]
    fn max_depth(&self) -> u32 {
        self.0.max_depth
    }

    fn __repr__(&self) -> String {
        format!("Tolerance(rel={:e}, abs={:e}, max_depth={})", self.0.rel, self.0.abs, self.0.max_depth)
    }
}

/// The rotational sphere of mean curvature `H` (sum of the principal
/// curvatures).
#[pyclass(frozen, module = "cmc_rot")]
struct CmcSphere(cmc_rot::CmcSphere);

#[pymethods]
impl CmcSphere {
    #[new]
    #[pyo3(signature = (space, mean_curvature, tol = None))]
    fn new(space: &SpaceForm, mean_curvature: f64, tol: Option<&Tolerance>) -> PyResult<Self> {
        cmc_rot::CmcSphere::new(&space.0, mean_curvature, &tol_or_default(tol))
            .map(CmcSphere)
            .map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (space, s0, tol = None))]
    fn from_radius(space: &SpaceForm, s0: f64, tol: Option<&Tolerance>) -> PyResult<Self> {
        let params = SphereParams::from_radius(&space.0, s0).map_err(to_py)?;
        cmc_rot::CmcSphere::from_params(params, &tol_or_default(tol))
            .map(CmcSphere)
            .map_err(to_py)
    }

    #[getter]
    fn space(&self) -> SpaceForm {
        SpaceForm(self.0.space().clone())
    }

    #[getter]
    fn mean_curvature(&self) -> f64 {
        self.0.mean_curvature()
    }

    #[getter]
    fn normalized_mean_curvature(&self) -> f64 {
        self.0.params().normalized_mean_curvature()
    }

    #[getter]
    fn s0(&self) -> f64 {
        self.0.s0()
    }

    #[getter]
    fn equator_height(&self) -> f64 {
        self.0.equator_height()
    }

    fn rho(&self, s: f64) -> PyResult<f64> {
        self.0.rho(s).map_err(to_py)
    }

    fn theta(&self, s: f64) -> PyResult<f64> {
        self.0.theta(s).map_err(to_py)
    }

    /// Height of the lower hemisphere above the south pole.
    fn height(&self, s: f64) -> PyResult<f64> {
        self.0.height(s).map_err(to_py)
    }

    /// `(k_profile, k_rot)`.
    fn principal_curvatures(&self, s: f64) -> PyResult<(f64, f64)> {
        let k = self.0.principal_curvatures(s).map_err(to_py)?;
        Ok((k.profile, k.rotational))
    }

    #[pyo3(signature = (samples = cmc_rot::profile::DEFAULT_SAMPLES))]
    fn profile<'py>(&self, py: Python<'py>, samples: usize) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &self.0.profile_curve(samples).map_err(to_py)?)
    }

    fn area(&self) -> PyResult<f64> {
        self.0.area().map_err(to_py)
    }

    fn volume(&self) -> PyResult<f64> {
        self.0.volume().map_err(to_py)
    }

    fn is_convex(&self) -> bool {
        self.0.is_convex()
    }

    fn geometry<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &self.0.geometry().map_err(to_py)?)
    }

    fn __repr__(&self) -> String {
        let sf = self.0.space();
        format!(
            "CmcSphere(epsilon={}, n={}, H={}, s0={})",
            sf.epsilon() as i8,
            sf.n(),
            self.0.mean_curvature(),
            self.0.s0()
        )
    }
}

fn hemisphere(name: &str) -> PyResult<Hemisphere> {
    match name {
        "lower" => Ok(Hemisphere::Lower),
        "upper" => Ok(Hemisphere::Upper),
        other => Err(PyValueError::new_err(format!("hemisphere must be 'lower' or 'upper' (got {other:?})"))),
    }
}

#[pyfunction]
#[pyo3(signature = (space, h, h_star, samples = 128, tol = None))]
fn check_nested<'py>(
    py: Python<'py>,
    space: &SpaceForm,
    h: f64,
    h_star: f64,
    samples: usize,
    tol: Option<&Tolerance>,
) -> PyResult<Bound<'py, PyAny>> {
    let report = nesting::check_nested(&space.0, h, h_star, samples, &tol_or_default(tol)).map_err(to_py)?;
    to_dict(py, &report)
}

#[pyfunction]
#[pyo3(signature = (space, grid = 64, tol = None))]
fn estimate_alpha<'py>(
    py: Python<'py>,
    space: &SpaceForm,
    grid: usize,
    tol: Option<&Tolerance>,
) -> PyResult<Bound<'py, PyAny>> {
    if grid == 0 {
        return Err(PyValueError::new_err("grid must be positive"));
    }
    let estimate = py.detach(|| nesting::estimate_alpha(&space.0, grid, &tol_or_default(tol)));
    to_dict(py, &estimate)
}

/// Normal speed of the sphere family at `s` on one hemisphere.
#[pyfunction]
#[pyo3(signature = (space, h, s, hemisphere = "lower", tol = None))]
fn variation_f(space: &SpaceForm, h: f64, s: f64, hemisphere: &str, tol: Option<&Tolerance>) -> PyResult<f64> {
    let params = SphereParams::solve(&space.0, h).map_err(to_py)?;
    stability::variation_f(&params, s, self::hemisphere(hemisphere)?, &tol_or_default(tol)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (space, h, tol = None))]
fn integral_f(space: &SpaceForm, h: f64, tol: Option<&Tolerance>) -> PyResult<f64> {
    let params = SphereParams::solve(&space.0, h).map_err(to_py)?;
    stability::integral_f(&params, &tol_or_default(tol)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (space, h, tol = None))]
fn stability_verdict<'py>(
    py: Python<'py>,
    space: &SpaceForm,
    h: f64,
    tol: Option<&Tolerance>,
) -> PyResult<Bound<'py, PyAny>> {
    let params = SphereParams::solve(&space.0, h).map_err(to_py)?;
    to_dict(py, &stability::stability_verdict(&params, &tol_or_default(tol)).map_err(to_py)?)
}

/// Root `H0` of `∫f` inside `[lo, hi]` (raw mean curvature).
#[pyfunction]
#[pyo3(signature = (space, lo = 0.05, hi = 0.5, tol = None))]
fn stability_threshold(space: &SpaceForm, lo: f64, hi: f64, tol: Option<&Tolerance>) -> PyResult<f64> {
    let bracket = Bracket::new(lo, hi).map_err(to_py)?;
    stability::stability_threshold_h0(&space.0, bracket, &tol_or_default(tol)).map_err(to_py)
}

#[pyfunction]
fn slab_area(space: &SpaceForm) -> PyResult<f64> {
    isoperimetric::slab_area(&space.0).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (space, lo = 0.1, hi = 1.0, tol = None))]
fn slab_crossing<'py>(
    py: Python<'py>,
    space: &SpaceForm,
    lo: f64,
    hi: f64,
    tol: Option<&Tolerance>,
) -> PyResult<Bound<'py, PyAny>> {
    let bracket = Bracket::new(lo, hi).map_err(to_py)?;
    to_dict(py, &isoperimetric::slab_crossing_report(&space.0, bracket, &tol_or_default(tol)).map_err(to_py)?)
}

#[pyfunction]
#[pyo3(signature = (space, grid, tol = None))]
fn isoperimetric_curve<'py>(
    py: Python<'py>,
    space: &SpaceForm,
    grid: Vec<f64>,
    tol: Option<&Tolerance>,
) -> PyResult<Bound<'py, PyAny>> {
    let tol = tol_or_default(tol);
    let report = py
        .detach(|| isoperimetric::isoperimetric_curve(&space.0, &grid, &tol))
        .map_err(to_py)?;
    to_dict(py, &report)
}

/// Mean curvature of the sphere enclosing `volume`, searched in `[lo, hi]`.
#[pyfunction]
#[pyo3(signature = (space, volume, lo, hi, tol = None))]
fn volume_to_h(space: &SpaceForm, volume: f64, lo: f64, hi: f64, tol: Option<&Tolerance>) -> PyResult<f64> {
    let bracket = Bracket::new(lo, hi).map_err(to_py)?;
    isoperimetric::volume_to_h(&space.0, volume, bracket, &tol_or_default(tol))
        .map(|p| p.mean_curvature)
        .map_err(to_py)
}

#[pymodule]
#[pyo3(name = "cmc_rot")]
pub fn cmc_rot_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<SpaceForm>()?;
    m.add_class::<Tolerance>()?;
    m.add_class::<CmcSphere>()?;
    m.add_function(wrap_pyfunction!(check_nested, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(variation_f, m)?)?;
    m.add_function(wrap_pyfunction!(integral_f, m)?)?;
    m.add_function(wrap_pyfunction!(stability_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(stability_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(slab_area, m)?)?;
    m.add_function(wrap_pyfunction!(slab_crossing, m)?)?;
    m.add_function(wrap_pyfunction!(isoperimetric_curve, m)?)?;
    m.add_function(wrap_pyfunction!(volume_to_h, m)?)?;
    Ok(())
}
