//! Python bindings. Structured reports cross the boundary as JSON strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use lattes_pillow::budget::Budget;
use lattes_pillow::exact::IntMat2;
use lattes_pillow::expansion::{self, DnMethod};
use lattes_pillow::metrics::{self, DEFAULT_LEVEL_CAP, DEFAULT_PAIRS, DEFAULT_WINDOW};
use lattes_pillow::{classify, cli, orbifold, pillow, Error};

fn py_err(e: Error) -> PyErr {
    if e.is_budget() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn budget() -> PyResult<Budget> {
    Budget::from_env().map_err(PyValueError::new_err)
}

/// A Lattès-type map of the pillow given by an integer matrix `[[a, b], [c, d]]`.
#[pyclass(name = "LattesTypeMap", frozen)]
struct PyMap {
    inner: pillow::LattesTypeMap,
}

#[pymethods]
impl PyMap {
    #[new]
    fn new(a: i64, b: i64, c: i64, d: i64) -> PyResult<Self> {
        let inner = pillow::make_map(IntMat2::from_i64([a, b, c, d])).map_err(py_err)?;
        Ok(PyMap { inner })
    }

    #[getter]
    fn matrix(&self) -> String {
        self.inner.matrix().to_string()
    }

    #[getter]
    fn degree(&self) -> String {
        self.inner.degree().to_string()
    }

    /// Smallest eigenvalue modulus as a float.
    #[getter]
    fn lambda0(&self) -> f64 {
        self.inner.lambda0().approx()
    }

    /// `(V, E, F)` at level `n`.
    fn cell_counts(&self, n: u32) -> PyResult<(u64, u64, u64)> {
        let c = pillow::cell_counts(&self.inner, n, &budget()?).map_err(py_err)?;
        Ok((c.vertices, c.edges, c.tiles))
    }

    #[pyo3(signature = (n, method = "planar"))]
    fn dn(&self, n: u32, method: &str) -> PyResult<u64> {
        let b = budget()?;
        match method {
            "planar" => expansion::dn_planar(&self.inner, n, &b),
            "folded" => expansion::dn_folded(&self.inner, n, &b),
            _ => return Err(PyValueError::new_err(format!("unknown method {method:?}"))),
        }
        .map_err(py_err)
    }

    /// Exact lower and upper bounds as rational strings.
    fn dn_bounds(&self, n: u32) -> PyResult<(String, String)> {
        let (lo, hi) = expansion::dn_bounds(&self.inner, n).map_err(py_err)?;
        Ok((lo.to_string(), hi.to_string()))
    }

    fn dn_report(&self, n: u32) -> PyResult<String> {
        to_json(&expansion::dn_report(&self.inner, n, DnMethod::Both, &budget()?).map_err(py_err)?)
    }

    fn lambda0_estimate(&self, n_max: u32) -> PyResult<String> {
        to_json(&expansion::lambda0_estimate(&self.inner, n_max, &budget()?).map_err(py_err)?)
    }

    fn menger(&self, n: u32) -> PyResult<String> {
        to_json(&expansion::menger_verify(&self.inner, n, &budget()?).map_err(py_err)?)
    }

    #[pyo3(signature = (n_max = 8))]
    fn classify(&self, n_max: u32) -> PyResult<String> {
        to_json(&classify::lattes_verdict(&self.inner, n_max, &budget()?).map_err(py_err)?)
    }

    #[pyo3(signature = (pairs = DEFAULT_PAIRS, window = DEFAULT_WINDOW, level_cap = DEFAULT_LEVEL_CAP))]
    fn visual_report(&self, pairs: usize, window: u32, level_cap: u32) -> PyResult<String> {
        let r = metrics::visual_report(&self.inner, &metrics::default_pairs(pairs), window, level_cap, &budget()?)
            .map_err(py_err)?;
        to_json(&r)
    }

    fn render_svg(&self, n: u32) -> PyResult<String> {
        cli::svg::render_svg(&self.inner, n, &budget()?).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("LattesTypeMap({})", self.inner.matrix())
    }
}

/// Minimal orbifold data of a portrait given as JSON `{"nodes": [...]}`.
#[pyfunction]
fn nu_minimal(portrait_json: &str) -> PyResult<String> {
    let p = orbifold::Portrait::from_json(portrait_json).map_err(py_err)?;
    to_json(&orbifold::nu_minimal(&p).map_err(py_err)?)
}

/// Euler characteristic of a signature; `None` stands for infinity.
#[pyfunction]
fn euler_char(signature: Vec<Option<u64>>) -> String {
    let sig: Vec<orbifold::ExtNat> = signature
        .into_iter()
        .map(|v| v.map_or(orbifold::ExtNat::Infinite, orbifold::ExtNat::Finite))
        .collect();
    orbifold::euler_char(&sig).to_string()
}

/// Runs the command line with `argv` (without the program name); returns
/// `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(argv: Vec<String>) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let args = std::iter::once("lattes-pillow".to_string()).chain(argv);
    let code = cli::run_with(args, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[pymodule]
#[pyo3(name = "lattes_pillow")]
fn init_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMap>()?;
    m.add_function(wrap_pyfunction!(nu_minimal, m)?)?;
    m.add_function(wrap_pyfunction!(euler_char, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
