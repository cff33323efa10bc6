//! Python bindings: `predict`, `analyze`, `verify`, `table` and `ClassGroup`.
//!
//! Reports come back as plain dicts with the same keys as the CLI's JSON output.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pcl_core::classgroup::{self, ClassGroupConfig, ClassGroupData};
use pcl_core::numberfield::{build_pure_cubic_order, build_pure_sextic_order};
use pcl_core::veritool::cache::Cache;
use pcl_core::veritool::render::{self, Record};
use pcl_core::veritool::{Analyzer, FieldSelection};
use pcl_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidPrime(_) | Error::InvalidRadicand(_) | Error::InvalidArgument(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, json: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (json,))
}

fn record<'py>(py: Python<'py>, r: &Record) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &render::json_line(r))
}

fn fields(s: &str) -> PyResult<FieldSelection> {
    match s {
        "L" => Ok(FieldSelection::L),
        "k" => Ok(FieldSelection::K),
        "both" => Ok(FieldSelection::Both),
        _ => Err(PyValueError::new_err(format!("field must be 'L', 'k' or 'both', got {s:?}"))),
    }
}

fn analyzer(seed: u64, effort: u32, bound_mult: f64, cache_dir: Option<PathBuf>) -> PyResult<Analyzer> {
    if effort == 0 || !(bound_mult.is_finite() && bound_mult > 0.0 && bound_mult <= 100.0) {
        return Err(PyValueError::new_err("effort must be positive and bound_mult in (0, 100]"));
    }
    Ok(Analyzer::new(ClassGroupConfig { seed, effort, bound_mult }, cache_dir.map(Cache::new)))
}

/// Predictions from p alone.
#[pyfunction]
fn predict<'py>(py: Python<'py>, p: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = pcl_core::predictor::predict(p).map_err(py_err)?;
    record(py, &render::prediction_record(&r))
}

/// Class groups of L and/or k and their 3-structure.
#[pyfunction]
#[pyo3(signature = (p, field="both", seed=1, effort=1, bound_mult=1.0, cache_dir=None))]
fn analyze<'py>(
    py: Python<'py>,
    p: u64,
    field: &str,
    seed: u64,
    effort: u32,
    bound_mult: f64,
    cache_dir: Option<PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let an = analyzer(seed, effort, bound_mult, cache_dir)?;
    let sel = fields(field)?;
    let a = py.detach(|| an.analyze(p, sel)).map_err(py_err)?;
    record(py, &render::analysis_record(&a, &an.config))
}

/// Predictions checked against computed class groups.
#[pyfunction]
#[pyo3(signature = (p, seed=1, effort=1, bound_mult=1.0, cache_dir=None))]
fn verify<'py>(
    py: Python<'py>,
    p: u64,
    seed: u64,
    effort: u32,
    bound_mult: f64,
    cache_dir: Option<PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let an = analyzer(seed, effort, bound_mult, cache_dir)?;
    let v = py.detach(|| an.verify(p)).map_err(py_err)?;
    let out = record(py, &render::verification_record(&v))?;
    out.set_item("exit_code", v.outcome.exit_code())?;
    Ok(out)
}

/// One of the published tables, recomputed: `{which, header, rows, outcome}`.
#[pyfunction]
#[pyo3(signature = (which, seed=1, effort=1, bound_mult=1.0, cache_dir=None))]
fn table<'py>(
    py: Python<'py>,
    which: u8,
    seed: u64,
    effort: u32,
    bound_mult: f64,
    cache_dir: Option<PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let an = analyzer(seed, effort, bound_mult, cache_dir)?;
    let t = py.detach(|| an.table(which)).map_err(py_err)?;
    to_py(py, &serde_json::to_string(&t).map_err(|e| PyRuntimeError::new_err(e.to_string()))?)
}

/// Certified class group of Q(∛d) (`field="L"`) or Q(∛d, ζ₃) (`field="k"`).
#[pyclass(frozen, module = "pcl")]
struct ClassGroup {
    inner: ClassGroupData,
}

#[pymethods]
impl ClassGroup {
    #[new]
    #[pyo3(signature = (d, field="L", seed=1, effort=1, bound_mult=1.0))]
    fn new(py: Python<'_>, d: u64, field: &str, seed: u64, effort: u32, bound_mult: f64) -> PyResult<Self> {
        let config = analyzer(seed, effort, bound_mult, None)?.config;
        let order = match field {
            "L" => build_pure_cubic_order(d),
            "k" => build_pure_sextic_order(d),
            _ => return Err(PyValueError::new_err(format!("field must be 'L' or 'k', got {field:?}"))),
        }
        .map_err(py_err)?;
        let inner = py.detach(|| classgroup::class_group(&order, &config)).map_err(py_err)?;
        Ok(ClassGroup { inner })
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field.to_string()
    }

    #[getter]
    fn class_number(&self) -> i128 {
        self.inner.class_number
    }

    /// Cyclic invariants d₁ | d₂ | … of the full class group.
    #[getter]
    fn invariants(&self) -> Vec<i128> {
        self.inner.invariants.clone()
    }

    /// Invariants of the 3-part, largest first.
    #[getter]
    fn three_part(&self) -> Vec<i128> {
        self.inner.three_part()
    }

    #[getter]
    fn rank3(&self) -> usize {
        self.inner.rank3()
    }

    #[getter]
    fn regulator(&self) -> f64 {
        self.inner.certificate.regulator
    }

    /// Certificate data: bounds, regulator and the analytic h·R check.
    fn certificate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = &self.inner.certificate;
        let d = PyDict::new(py);
        d.set_item("minkowski_bound", c.minkowski_bound)?;
        d.set_item("relation_bound", c.relation_bound)?;
        d.set_item("regulator", c.regulator)?;
        d.set_item("analytic_hr", c.analytic_hr)?;
        d.set_item("ratio", c.ratio)?;
        d.set_item("seeds", c.seeds.to_vec())?;
        d.set_item("stable_across_seeds", c.stable_across_seeds)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("ClassGroup({}, h={}, invariants={:?})", self.inner.field, self.inner.class_number, self.inner.invariants)
    }
}

#[pymodule]
fn pcl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_class::<ClassGroup>()?;
    Ok(())
}
