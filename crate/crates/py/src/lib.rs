//! Python module `barnopt`. Angles are taken in degrees, as on the CLI.
//!
//! Invalid inputs raise `ValueError`; solver failures raise `RuntimeError`.

use barn_core::fields::{compactness_field as field, AxisRange};
use barn_core::geometry;
use barn_core::verify::{run_verification, DEFAULT_CASES, DEFAULT_SEED};
use barn_core::{BarnError, FixedFloorOptimum, FixedVolumeOptimum, HouseParams, ShapeRatios};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn py_err(err: BarnError) -> PyErr {
    match err {
        BarnError::SolverFailure(_) => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.describe_in_degrees()),
    }
}

fn to_py(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any().unbind(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let items = items.iter().map(|v| to_py(py, v)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, v) in map {
                d.set_item(k, to_py(py, v)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn to_dict<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let tree = serde_json::to_value(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &tree)
}

fn json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    barn_core::export::to_json(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// A barn design: width, length and wall height in meters, roof slope in degrees.
#[pyclass(frozen, name = "House", module = "barnopt")]
pub struct PyHouse(HouseParams);

#[pymethods]
impl PyHouse {
    #[new]
    fn new(width: f64, length: f64, height: f64, alpha_deg: f64) -> PyResult<Self> {
        HouseParams::from_degrees(width, length, height, alpha_deg).map(Self).map_err(py_err)
    }

    #[getter]
    fn width(&self) -> f64 {
        self.0.width
    }

    #[getter]
    fn length(&self) -> f64 {
        self.0.length
    }

    #[getter]
    fn height(&self) -> f64 {
        self.0.height
    }

    #[getter]
    fn alpha_deg(&self) -> f64 {
        self.0.alpha.to_degrees()
    }

    fn volume(&self) -> PyResult<f64> {
        geometry::volume(&self.0).map_err(py_err)
    }

    fn floor_area(&self) -> f64 {
        self.0.floor_area()
    }

    /// Envelope area without the ground slab.
    fn surface(&self) -> PyResult<f64> {
        geometry::surface(&self.0).map(|b| b.total).map_err(py_err)
    }

    /// Envelope split into its parts.
    fn breakdown(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_dict(py, &geometry::surface(&self.0).map_err(py_err)?)
    }

    /// `S / S_min` at this design's volume and slope.
    fn compactness(&self) -> PyResult<f64> {
        barn_core::compactness(&self.0).map(|c| c.ratio).map_err(py_err)
    }

    /// Both analyses as a nested dict.
    fn assess(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_dict(py, &barn_core::assess(&self.0).map_err(py_err)?)
    }

    fn assess_json(&self) -> PyResult<String> {
        json(&barn_core::assess(&self.0).map_err(py_err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "House(width={}, length={}, height={}, alpha_deg={})",
            self.0.width,
            self.0.length,
            self.0.height,
            self.0.alpha.to_degrees()
        )
    }
}

#[pyclass(frozen, name = "VolumeOptimum", module = "barnopt")]
pub struct PyVolumeOptimum(FixedVolumeOptimum);

#[pymethods]
impl PyVolumeOptimum {
    #[getter]
    fn volume(&self) -> f64 {
        self.0.volume
    }
    #[getter]
    fn alpha_deg(&self) -> f64 {
        self.0.alpha_deg
    }
    #[getter]
    fn r(&self) -> f64 {
        self.0.r_min
    }
    #[getter]
    fn k(&self) -> f64 {
        self.0.k_min
    }
    #[getter]
    fn width(&self) -> f64 {
        self.0.width
    }
    #[getter]
    fn length(&self) -> f64 {
        self.0.length
    }
    #[getter]
    fn height(&self) -> f64 {
        self.0.height
    }
    #[getter]
    fn surface(&self) -> f64 {
        self.0.surface_min
    }

    fn house(&self) -> PyHouse {
        PyHouse(self.0.params())
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_dict(py, &self.0)
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "VolumeOptimum(W={:.4}, L={:.4}, H={:.4}, S={:.4})",
            self.0.width, self.0.length, self.0.height, self.0.surface_min
        )
    }
}

#[pyclass(frozen, name = "FloorOptimum", module = "barnopt")]
pub struct PyFloorOptimum(FixedFloorOptimum);

#[pymethods]
impl PyFloorOptimum {
    #[getter]
    fn floor(&self) -> f64 {
        self.0.floor
    }
    #[getter]
    fn height(&self) -> f64 {
        self.0.height
    }
    #[getter]
    fn alpha_deg(&self) -> f64 {
        self.0.alpha_deg
    }
    #[getter]
    fn width(&self) -> f64 {
        self.0.width
    }
    #[getter]
    fn length(&self) -> f64 {
        self.0.length
    }
    #[getter]
    fn surface(&self) -> f64 {
        self.0.surface_min
    }
    #[getter]
    fn cubic_residual(&self) -> f64 {
        self.0.cubic_residual
    }

    fn house(&self) -> PyHouse {
        PyHouse(self.0.params())
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_dict(py, &self.0)
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "FloorOptimum(W={:.4}, L={:.4}, S={:.4})",
            self.0.width, self.0.length, self.0.surface_min
        )
    }
}

/// Minimum-envelope design for volume `V` (m³) and roof slope in degrees.
#[pyfunction]
fn optimize_volume(volume: f64, alpha_deg: f64) -> PyResult<PyVolumeOptimum> {
    barn_core::optimize_fixed_volume(volume, alpha_deg.to_radians())
        .map(PyVolumeOptimum)
        .map_err(py_err)
}

/// Minimum-envelope width and length for floor area `F` and wall height `H`.
#[pyfunction]
fn optimize_floor(floor: f64, height: f64, alpha_deg: f64) -> PyResult<PyFloorOptimum> {
    barn_core::optimize_fixed_floor(floor, height, alpha_deg.to_radians())
        .map(PyFloorOptimum)
        .map_err(py_err)
}

/// `(L/W, H/W)` of the optimum at this slope.
#[pyfunction]
fn optimal_ratios(alpha_deg: f64) -> PyResult<(f64, f64)> {
    barn_core::optimal_ratios(alpha_deg.to_radians()).map_err(py_err)
}

/// Shape function with `S = V^(2/3) * gamma(r, k)`.
#[pyfunction]
fn gamma(r: f64, k: f64, alpha_deg: f64) -> PyResult<f64> {
    let s = ShapeRatios::new(r, k, alpha_deg.to_radians()).map_err(py_err)?;
    barn_core::gamma(&s).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (alpha_deg, rmin=0.2, rmax=4.0, kmin=0.2, kmax=4.0, res=128))]
fn compactness_field(
    py: Python<'_>,
    alpha_deg: f64,
    rmin: f64,
    rmax: f64,
    kmin: f64,
    kmax: f64,
    res: usize,
) -> PyResult<Py<PyAny>> {
    let f = field(
        alpha_deg.to_radians(),
        AxisRange::new(rmin, rmax),
        AxisRange::new(kmin, kmax),
        res,
    )
    .map_err(py_err)?;
    to_dict(py, &f)
}

/// Oracle cross-check report as a dict.
#[pyfunction]
#[pyo3(signature = (seed=DEFAULT_SEED, cases=DEFAULT_CASES))]
fn verify(py: Python<'_>, seed: u64, cases: usize) -> PyResult<Py<PyAny>> {
    let rep = py.detach(|| run_verification(seed, cases, None)).map_err(py_err)?;
    to_dict(py, &rep)
}

/// Adds the classes and functions to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHouse>()?;
    m.add_class::<PyVolumeOptimum>()?;
    m.add_class::<PyFloorOptimum>()?;
    m.add_function(wrap_pyfunction!(optimize_volume, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_floor, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_ratios, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(compactness_field, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("ALPHA_MIN_DEG", geometry::ALPHA_MIN.to_degrees())?;
    m.add("ALPHA_MAX_DEG", geometry::ALPHA_MAX.to_degrees())?;
    Ok(())
}

#[pymodule]
fn barnopt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
