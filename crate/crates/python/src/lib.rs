use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use reluspline::analysis::active_knots;
use reluspline::io;
use reluspline::Error;

create_exception!(reluspline, ReluSplineError, PyValueError);

fn err(e: Error) -> PyErr {
    ReluSplineError::new_err(e.to_string())
}

#[pyclass(name = "Tolerances", module = "reluspline", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyTolerances(reluspline::Tolerances);

#[pymethods]
impl PyTolerances {
    #[new]
    #[pyo3(signature = (zero = 1e-10, merge = 1e-12, eval = 1e-8))]
    fn new(zero: f64, merge: f64, eval: f64) -> PyResult<Self> {
        reluspline::Tolerances::new(zero, merge, eval).map(Self).map_err(err)
    }

    #[getter]
    fn zero(&self) -> f64 {
        self.0.zero
    }

    #[getter]
    fn merge(&self) -> f64 {
        self.0.merge
    }

    #[getter]
    fn eval(&self) -> f64 {
        self.0.eval
    }

    fn __repr__(&self) -> String {
        format!("Tolerances(zero={:e}, merge={:e}, eval={:e})", self.0.zero, self.0.merge, self.0.eval)
    }
}

fn tol_or_default(tol: Option<PyTolerances>) -> reluspline::Tolerances {
    tol.map(|t| t.0).unwrap_or_default()
}

#[pyclass(name = "CplSpline", module = "reluspline", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCplSpline(reluspline::CplSpline);

#[pymethods]
impl PyCplSpline {
    #[new]
    #[pyo3(signature = (q1, q0, knots = Vec::new(), coeffs = Vec::new()))]
    fn new(q1: f64, q0: f64, knots: Vec<f64>, coeffs: Vec<f64>) -> PyResult<Self> {
        reluspline::CplSpline::new(q1, q0, knots, coeffs).map(Self).map_err(err)
    }

    /// Canonical form of `q1 t + q0 + Σ coeffs_k σ(t - knots_k)` for unsorted terms.
    #[staticmethod]
    #[pyo3(signature = (q1, q0, knots, coeffs, tol = None))]
    fn canonical(q1: f64, q0: f64, knots: Vec<f64>, coeffs: Vec<f64>, tol: Option<PyTolerances>) -> PyResult<Self> {
        reluspline::CplSpline::canonical(q1, q0, knots, coeffs, &tol_or_default(tol))
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::spline_from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        io::spline_to_json(&self.0)
    }

    #[getter]
    fn q1(&self) -> f64 {
        self.0.q1()
    }

    #[getter]
    fn q0(&self) -> f64 {
        self.0.q0()
    }

    #[getter]
    fn knots(&self) -> Vec<f64> {
        self.0.knots().to_vec()
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.0.coeffs().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __call__(&self, t: f64) -> f64 {
        self.0.value(t)
    }

    #[pyo3(signature = (tol = None))]
    fn is_canonical(&self, tol: Option<PyTolerances>) -> bool {
        self.0.is_canonical(&tol_or_default(tol))
    }

    fn __repr__(&self) -> String {
        format!("CplSpline(q1={}, q0={}, knots={})", self.0.q1(), self.0.q0(), self.0.len())
    }
}

#[pyclass(name = "ReluNetwork", module = "reluspline", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyReluNetwork(reluspline::ReluNetwork);

#[pymethods]
impl PyReluNetwork {
    /// `c t + b + Σ a2_j σ(a1_j t + b1_j)`.
    #[staticmethod]
    fn shallow(a1: Vec<f64>, b1: Vec<f64>, a2: Vec<f64>, c: f64, b: f64) -> PyResult<Self> {
        reluspline::ReluNetwork::shallow(a1, b1, a2, c, b).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::network_from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        io::network_to_json(&self.0)
    }

    #[getter]
    fn widths(&self) -> Vec<usize> {
        self.0.widths()
    }

    /// Source channel of every hidden layer after the first.
    #[getter]
    fn sources(&self) -> Vec<Vec<f64>> {
        self.0.layers().iter().map(|l| l.source.clone()).collect()
    }

    /// Weight matrices `A_1 .. A_L`, the first as a column.
    #[getter]
    fn weights(&self) -> Vec<Vec<Vec<f64>>> {
        let mut out = vec![self.0.input().weights.iter().map(|&a| vec![a]).collect()];
        out.extend(self.0.layers().iter().map(|l| l.weights.clone()));
        out
    }

    #[getter]
    fn biases(&self) -> Vec<Vec<f64>> {
        let mut out = vec![self.0.input().bias.clone()];
        out.extend(self.0.layers().iter().map(|l| l.bias.clone()));
        out
    }

    fn __call__(&self, t: f64) -> PyResult<f64> {
        reluspline::eval_network(&self.0, t).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("ReluNetwork(widths={:?})", self.0.widths())
    }
}

#[pyclass(name = "KnotHierarchy", module = "reluspline", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyKnotHierarchy(reluspline::KnotHierarchy);

#[pymethods]
impl PyKnotHierarchy {
    #[new]
    #[pyo3(signature = (level1, level2, level3 = None))]
    fn new(level1: Vec<f64>, level2: Vec<Vec<f64>>, level3: Option<Vec<Vec<f64>>>) -> PyResult<Self> {
        reluspline::KnotHierarchy::new(level1, level2, level3).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_flat_two(knots: Vec<f64>, n1: usize, n2: usize) -> PyResult<Self> {
        reluspline::KnotHierarchy::from_flat_two(&knots, n1, n2).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_flat_three(knots: Vec<f64>, n1: usize, n2: usize, n3: usize) -> PyResult<Self> {
        reluspline::KnotHierarchy::from_flat_three(&knots, n1, n2, n3).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::hierarchy_from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        io::hierarchy_to_json(&self.0)
    }

    #[getter]
    fn level1(&self) -> Vec<f64> {
        self.0.level1().to_vec()
    }

    #[getter]
    fn level2(&self) -> Vec<Vec<f64>> {
        self.0.level2().to_vec()
    }

    #[getter]
    fn level3(&self) -> Option<Vec<Vec<f64>>> {
        self.0.level3().map(<[Vec<f64>]>::to_vec)
    }

    fn sorted_knots(&self) -> Vec<f64> {
        self.0.sorted_knots()
    }

    fn __repr__(&self) -> String {
        format!("KnotHierarchy(n1={}, n2={}, n3={})", self.0.n1(), self.0.n2(), self.0.n3())
    }
}

#[pyfunction]
#[pyo3(signature = (net, tol = None))]
fn dnn_to_spline(net: &PyReluNetwork, tol: Option<PyTolerances>) -> PyResult<PyCplSpline> {
    reluspline::dnn_to_spline(&net.0, &tol_or_default(tol))
        .map(PyCplSpline)
        .map_err(err)
}

#[pyfunction]
fn spline_to_shallow(s: &PyCplSpline) -> PyReluNetwork {
    PyReluNetwork(reluspline::spline_to_shallow(&s.0))
}

#[pyfunction]
#[pyo3(signature = (s, tol = None))]
fn sigma_compose(s: &PyCplSpline, tol: Option<PyTolerances>) -> PyCplSpline {
    PyCplSpline(reluspline::sigma_compose(&s.0, &tol_or_default(tol)))
}

#[pyfunction]
#[pyo3(signature = (net, tol = None))]
fn positive_scale_normalize(net: &PyReluNetwork, tol: Option<PyTolerances>) -> PyResult<PyReluNetwork> {
    reluspline::positive_scale_normalize(&net.0, &tol_or_default(tol))
        .map(PyReluNetwork)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (net, tol = None))]
fn is_normalized(net: &PyReluNetwork, tol: Option<PyTolerances>) -> bool {
    reluspline::is_normalized(&net.0, &tol_or_default(tol))
}

/// `(knot, coefficient)` pairs with nonzero coefficient.
#[pyfunction(name = "active_knots")]
#[pyo3(signature = (s, tol = None))]
fn py_active_knots(s: &PyCplSpline, tol: Option<PyTolerances>) -> Vec<(f64, f64)> {
    active_knots(&s.0, &tol_or_default(tol))
}

/// `(observed, bound, ok)`.
#[pyfunction]
#[pyo3(signature = (net, tol = None))]
fn audit_bound(net: &PyReluNetwork, tol: Option<PyTolerances>) -> PyResult<(usize, usize, bool)> {
    let r = reluspline::audit_bound(&net.0, &tol_or_default(tol)).map_err(err)?;
    Ok((r.observed, r.bound, r.ok))
}

#[pyfunction]
fn knot_bound(widths: Vec<usize>) -> usize {
    reluspline::knot_bound(&widths)
}

#[pyfunction]
#[pyo3(signature = (knots, margin = 5.0, per_interval = 3))]
fn probe_grid(knots: Vec<f64>, margin: f64, per_interval: usize) -> Vec<f64> {
    reluspline::probe_grid(&knots, margin, per_interval)
}

#[pyfunction]
fn equivalence_error(net: &PyReluNetwork, s: &PyCplSpline, grid: Vec<f64>) -> f64 {
    reluspline::equivalence_error(&net.0, &s.0, &grid)
}

#[pyfunction]
#[pyo3(signature = (h, a3 = Vec::new(), sign_plus = true, tol = None))]
fn synth_two_hidden(
    h: &PyKnotHierarchy,
    a3: Vec<f64>,
    sign_plus: bool,
    tol: Option<PyTolerances>,
) -> PyResult<PyReluNetwork> {
    let opts = reluspline::SynthesisOptions {
        a3,
        sign_plus,
        ..Default::default()
    };
    reluspline::synth_two_hidden(&h.0, &opts, &tol_or_default(tol))
        .map(PyReluNetwork)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (knots, n1, n2, seeds = Vec::new(), a3 = Vec::new(), tol = None))]
fn synth_two_hidden_no_source(
    knots: Vec<f64>,
    n1: usize,
    n2: usize,
    seeds: Vec<f64>,
    a3: Vec<f64>,
    tol: Option<PyTolerances>,
) -> PyResult<PyReluNetwork> {
    let opts = reluspline::SynthesisOptions {
        seeds,
        a3,
        ..Default::default()
    };
    reluspline::synth_two_hidden_no_source(&knots, n1, n2, &opts, &tol_or_default(tol))
        .map(PyReluNetwork)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (h, eps = Vec::new(), a4 = Vec::new(), seed = 0, tol = None))]
fn synth_three_hidden(
    h: &PyKnotHierarchy,
    eps: Vec<f64>,
    a4: Vec<f64>,
    seed: u64,
    tol: Option<PyTolerances>,
) -> PyResult<PyReluNetwork> {
    let opts = reluspline::SynthesisOptions {
        eps,
        a4,
        seed,
        ..Default::default()
    };
    reluspline::synth_three_hidden(&h.0, &opts, &tol_or_default(tol))
        .map(PyReluNetwork)
        .map_err(err)
}

/// `index_set` and `unit` are 1-based.
#[pyfunction]
fn redundancy_residual(h: &PyKnotHierarchy, index_set: Vec<usize>, unit: usize) -> PyResult<f64> {
    reluspline::redundancy_residual(&h.0, &index_set, unit).map_err(err)
}

#[pymodule(name = "reluspline")]
pub fn reluspline_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ReluSplineError", m.py().get_type::<ReluSplineError>())?;
    m.add_class::<PyTolerances>()?;
    m.add_class::<PyCplSpline>()?;
    m.add_class::<PyReluNetwork>()?;
    m.add_class::<PyKnotHierarchy>()?;
    m.add_function(wrap_pyfunction!(dnn_to_spline, m)?)?;
    m.add_function(wrap_pyfunction!(spline_to_shallow, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_compose, m)?)?;
    m.add_function(wrap_pyfunction!(positive_scale_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(is_normalized, m)?)?;
    m.add_function(wrap_pyfunction!(py_active_knots, m)?)?;
    m.add_function(wrap_pyfunction!(audit_bound, m)?)?;
    m.add_function(wrap_pyfunction!(knot_bound, m)?)?;
    m.add_function(wrap_pyfunction!(probe_grid, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_error, m)?)?;
    m.add_function(wrap_pyfunction!(synth_two_hidden, m)?)?;
    m.add_function(wrap_pyfunction!(synth_two_hidden_no_source, m)?)?;
    m.add_function(wrap_pyfunction!(synth_three_hidden, m)?)?;
    m.add_function(wrap_pyfunction!(redundancy_residual, m)?)?;
    Ok(())
}
