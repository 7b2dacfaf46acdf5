//! Python bindings: lines, alpha-set descriptors, Wigner symmetries and the
//! verification suites. Structured results are returned as plain dicts.

use num_complex::Complex64 as C64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use qangle::alphasets::{self, AlphaConfig, AlphaSetDescriptor};
use qangle::oracle::{root_count_on_circle, RootCount};
use qangle::projspace::{self, Line};
use qangle::suites::{run_suite as run_named_suite, Suite, SuiteParams};
use qangle::symmetric_sets::{classify_circle as classify, Circle};
use qangle::wigner::{self, LineMap, Selector, WignerSymmetry};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

create_exception!(pyqangle, QAngleError, PyValueError);

fn err(e: qangle::Error) -> PyErr {
    QAngleError::new_err(format!("{}: {e}", e.code()))
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serialises `v` and hands it to Python's `json.loads`.
fn to_py(py: Python<'_>, v: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(json_err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn cfg(alpha: f64) -> PyResult<AlphaConfig> {
    AlphaConfig::new(alpha).map_err(err)
}

/// A point of complex projective space in canonical gauge.
#[pyclass(name = "Line", module = "pyqangle", skip_from_py_object)]
#[derive(Clone)]
struct PyLine(Line);

#[pymethods]
impl PyLine {
    #[new]
    fn new(amplitudes: Vec<C64>) -> PyResult<Self> {
        Line::new(amplitudes).map(PyLine).map_err(err)
    }

    #[staticmethod]
    fn basis(dim: usize, k: usize) -> Self {
        PyLine(Line::basis(dim, k))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyLine).map_err(json_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn amplitudes(&self) -> Vec<C64> {
        self.0.amplitudes().to_vec()
    }

    fn angle_to(&self, other: &PyLine) -> PyResult<f64> {
        Ok(self.0.angle_to(&other.0).map_err(err)?.radians())
    }

    fn __eq__(&self, other: &PyLine) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Line({:?})", self.0.amplitudes())
    }
}

fn lines(xs: &[PyRef<'_, PyLine>]) -> Vec<Line> {
    xs.iter().map(|l| l.0.clone()).collect()
}

/// A closed-form alpha-set or double-alpha-set.
#[pyclass(name = "AlphaSet", module = "pyqangle")]
struct PyAlphaSet(AlphaSetDescriptor);

#[pymethods]
impl PyAlphaSet {
    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim
    }

    #[getter]
    fn n_components(&self) -> usize {
        self.0.components.len()
    }

    fn distance(&self, x: &PyLine) -> PyResult<f64> {
        self.0.distance(&x.0).map_err(err)
    }

    fn contains(&self, x: &PyLine, tol: f64) -> PyResult<bool> {
        self.0.contains(&x.0, tol).map_err(err)
    }

    fn sample(&self, n: usize, seed: u64) -> Vec<PyLine> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.0.sample(&mut rng, n).into_iter().map(PyLine).collect()
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.0)
    }
}

/// A unitary or antiunitary operator acting on lines.
#[pyclass(name = "WignerSymmetry", module = "pyqangle", skip_from_py_object)]
#[derive(Clone)]
struct PyWigner(WignerSymmetry);

#[pymethods]
impl PyWigner {
    #[staticmethod]
    #[pyo3(signature = (dim, seed=0, antiunitary=false))]
    fn random(dim: usize, seed: u64, antiunitary: bool) -> PyResult<Self> {
        wigner::random_wigner(dim, seed, antiunitary).map(PyWigner).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyWigner).map_err(json_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn antiunitary(&self) -> bool {
        self.0.is_antiunitary()
    }

    fn apply(&self, x: &PyLine) -> PyResult<PyLine> {
        self.0.apply(&x.0).map(PyLine).map_err(err)
    }

    fn compose(&self, other: &PyWigner) -> PyResult<PyWigner> {
        self.0.compose(&other.0).map(PyWigner).map_err(err)
    }

    fn inverse(&self) -> PyWigner {
        PyWigner(self.0.inverse())
    }

    fn probe_images(&self) -> Vec<PyLine> {
        wigner::probe_images(&self.0).into_iter().map(PyLine).collect()
    }

    fn same_map(&self, other: &PyWigner) -> PyResult<bool> {
        wigner::same_induced_map(&self.0, &other.0).map_err(err)
    }
}

#[pyfunction]
fn quantum_angle(u: &PyLine, v: &PyLine) -> PyResult<f64> {
    Ok(projspace::quantum_angle(&u.0, &v.0).map_err(err)?.radians())
}

#[pyfunction]
fn pair_alpha_set(v1: &PyLine, v2: &PyLine, alpha: f64) -> PyResult<PyAlphaSet> {
    alphasets::pair_alpha_set(&v1.0, &v2.0, &cfg(alpha)?).map(PyAlphaSet).map_err(err)
}

fn triple(xs: &[PyRef<'_, PyLine>]) -> PyResult<(projspace::TripleCanonicalForm, usize)> {
    match lines(xs).as_slice() {
        [u, v, w] => Ok((projspace::canonical_triple_form(u, v, w).map_err(err)?, u.dim())),
        other => Err(PyValueError::new_err(format!("expected 3 lines, got {}", other.len()))),
    }
}

#[pyfunction]
fn collinear_triple_alpha_set(lines: Vec<PyRef<'_, PyLine>>, alpha: f64) -> PyResult<PyAlphaSet> {
    let (t, dim) = triple(&lines)?;
    alphasets::collinear_triple_alpha_set(&t, &cfg(alpha)?, dim).map(PyAlphaSet).map_err(err)
}

#[pyfunction]
fn double_alpha_set(lines: Vec<PyRef<'_, PyLine>>, alpha: f64) -> PyResult<PyAlphaSet> {
    let (t, dim) = triple(&lines)?;
    alphasets::double_alpha_set_classify(&t, &cfg(alpha)?, dim).map(PyAlphaSet).map_err(err)
}

/// Case label of `(a, c, d)` in dimension 3, e.g. `"bounded"`.
#[pyfunction]
fn dim3_case(py: Python<'_>, a: f64, c: f64, d: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &alphasets::dim3_case(a, c, d).0)
}

/// Verdict for the circle `{[c e1 + lambda d e2]}` in `C^dim`.
#[pyfunction]
fn classify_circle(py: Python<'_>, c: f64, d: f64, alpha: f64, dim: usize) -> PyResult<Py<PyAny>> {
    let circle = Circle::standard(dim, c, d).map_err(err)?;
    to_py(py, &classify(&circle, &cfg(alpha)?, dim).map_err(err)?)
}

#[pyfunction]
fn counterexample_witness(py: Python<'_>, alpha: f64, c: f64, d: f64, t: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &alphasets::counterexample_witness(&cfg(alpha)?, c, d, t).map_err(err)?)
}

/// Number of solutions of `|z + r lambda| = a` on the unit circle, or
/// `None` when every lambda solves it.
#[pyfunction]
#[pyo3(signature = (z, r, a, grid=4096))]
fn root_count(z: C64, r: f64, a: f64, grid: usize) -> Option<u32> {
    match root_count_on_circle(z, r, a, grid) {
        RootCount::Finite(n) => Some(n),
        RootCount::Infinite => None,
    }
}

#[pyfunction]
fn fit_from_probes(dim: usize, images: Vec<PyRef<'_, PyLine>>) -> PyResult<PyWigner> {
    wigner::fit_from_probes(dim, &lines(&images)).map(PyWigner).map_err(err)
}

#[pyfunction]
fn probe_set(dim: usize) -> Vec<PyLine> {
    wigner::probe_set(dim).into_iter().map(PyLine).collect()
}

/// Angle-preservation counts for `psi`, or for the exotic map built from
/// `psi` with a middle-band selector of half-width `band` when given.
#[pyfunction]
#[pyo3(signature = (psi, alpha, pairs=1000, seed=0, tol=1e-10, band=None))]
fn preservation(
    py: Python<'_>,
    psi: &PyWigner,
    alpha: f64,
    pairs: usize,
    seed: u64,
    tol: f64,
    band: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let map: Box<dyn LineMap> = match band {
        Some(w) => Box::new(wigner::exotic_pi4_map(psi.0.clone(), Selector::MiddleBand(w)).map_err(err)?),
        None => Box::new(psi.0.clone()),
    };
    let rep = wigner::preservation_report(map.as_ref(), &cfg(alpha)?, map.dim(), pairs, seed, tol).map_err(err)?;
    to_py(py, &rep)
}

/// Runs a named verification suite and returns its report.
#[pyfunction]
#[pyo3(signature = (name, seed=0, a=None, c=None, d=None, dim=None, draws=None, cloud=None))]
#[allow(clippy::too_many_arguments)]
fn run_suite(
    py: Python<'_>,
    name: &str,
    seed: u64,
    a: Option<f64>,
    c: Option<f64>,
    d: Option<f64>,
    dim: Option<usize>,
    draws: Option<usize>,
    cloud: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let suite: Suite = name.parse().map_err(err)?;
    let params = SuiteParams { a, c, d, dim, draws, cloud, seed };
    let report = py.detach(|| run_named_suite(suite, &params)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn pyqangle(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QAngleError", m.py().get_type::<QAngleError>())?;
    m.add_class::<PyLine>()?;
    m.add_class::<PyAlphaSet>()?;
    m.add_class::<PyWigner>()?;
    m.add_function(wrap_pyfunction!(quantum_angle, m)?)?;
    m.add_function(wrap_pyfunction!(pair_alpha_set, m)?)?;
    m.add_function(wrap_pyfunction!(collinear_triple_alpha_set, m)?)?;
    m.add_function(wrap_pyfunction!(double_alpha_set, m)?)?;
    m.add_function(wrap_pyfunction!(dim3_case, m)?)?;
    m.add_function(wrap_pyfunction!(classify_circle, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_witness, m)?)?;
    m.add_function(wrap_pyfunction!(root_count, m)?)?;
    m.add_function(wrap_pyfunction!(fit_from_probes, m)?)?;
    m.add_function(wrap_pyfunction!(probe_set, m)?)?;
    m.add_function(wrap_pyfunction!(preservation, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
