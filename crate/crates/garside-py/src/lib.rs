//! Python bindings: braids in left canonical form, conjugacy operations,
//! the binary-matrix family, rigid-set enumeration, and the verification
//! suite. Build as a cdylib and import the resulting `garside_py` module.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use garside::{
    conjugacy, curves, family, search, verify, Braid, FamilyElement, SearchBudget, Side,
    SimpleBraid, SummitBudget,
};

fn value_to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None().into_bound(py),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        serde_json::Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else {
                num.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            list.into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, value_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

/// An element of the braid group on `n` strands, stored in left canonical
/// form.
#[pyclass(frozen, skip_from_py_object, name = "Braid")]
#[derive(Clone)]
struct PyBraid {
    inner: Braid,
}

impl From<Braid> for PyBraid {
    fn from(inner: Braid) -> Self {
        PyBraid { inner }
    }
}

impl From<SimpleBraid> for PyBraid {
    fn from(s: SimpleBraid) -> Self {
        PyBraid { inner: Braid::from_simple(s) }
    }
}

#[pymethods]
impl PyBraid {
    /// Normal form of the signed word: positive `i` means sigma_i, negative
    /// means its inverse.
    #[new]
    #[pyo3(signature = (n, word = Vec::new()))]
    fn new(n: usize, word: Vec<i64>) -> PyResult<Self> {
        Braid::normal_form(n, &word)
            .map(PyBraid::from)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// The `k`-th power of the half twist on `n` strands.
    #[staticmethod]
    #[pyo3(signature = (n, k = 1))]
    fn delta(n: usize, k: i64) -> PyResult<Self> {
        if n < 2 {
            return Err(PyValueError::new_err("need at least two strands"));
        }
        Ok(Braid::delta_power(n, k).into())
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn inf(&self) -> i64 {
        self.inner.inf()
    }

    #[getter]
    fn sup(&self) -> i64 {
        self.inner.sup()
    }

    /// Number of canonical factors.
    #[getter]
    fn canonical_length(&self) -> usize {
        self.inner.len()
    }

    /// Canonical factors as reduced positive words.
    fn factors(&self) -> Vec<Vec<usize>> {
        self.inner.factors().iter().map(|s| s.canonical_word()).collect()
    }

    /// A signed word spelling the element: `inf` half twists then the
    /// factors.
    fn word(&self) -> Vec<i64> {
        self.inner.word()
    }

    fn is_rigid(&self) -> bool {
        self.inner.is_rigid()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn inverse(&self) -> Self {
        self.inner.inverse().into()
    }

    fn tau(&self) -> Self {
        self.inner.tau().into()
    }

    /// `g^-1 * self * g`.
    fn conjugate(&self, g: &PyBraid) -> PyResult<Self> {
        if g.inner.n() != self.inner.n() {
            return Err(PyValueError::new_err("strand counts differ"));
        }
        Ok(self.inner.conjugate_with(&g.inner).into())
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __mul__(&self, rhs: &PyBraid) -> PyResult<Self> {
        if rhs.inner.n() != self.inner.n() {
            return Err(PyValueError::new_err("strand counts differ"));
        }
        Ok(self.inner.multiply(&rhs.inner).into())
    }

    fn __eq__(&self, other: &PyBraid) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        let mut hasher = DefaultHasher::new();
        self.inner.key().hash(&mut hasher);
        hasher.finish()
    }

    fn __repr__(&self) -> String {
        format!("Braid(n={}, word={:?})", self.inner.n(), self.inner.word())
    }
}

/// A matrix element of the braid family: rows of bits, an optional vertical
/// slot on odd strand counts, and the constrained-class flag.
#[pyclass(frozen, skip_from_py_object, name = "FamilyElement")]
#[derive(Clone)]
struct PyFamilyElement {
    inner: FamilyElement,
}

impl From<FamilyElement> for PyFamilyElement {
    fn from(inner: FamilyElement) -> Self {
        PyFamilyElement { inner }
    }
}

fn rows_from_ints(rows: Vec<Vec<u8>>) -> PyResult<Vec<Vec<bool>>> {
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|bit| match bit {
                    0 => Ok(false),
                    1 => Ok(true),
                    other => Err(PyValueError::new_err(format!("matrix entries must be 0 or 1, got {other}"))),
                })
                .collect()
        })
        .collect()
}

#[pymethods]
impl PyFamilyElement {
    /// Builds the element from 0/1 rows; `constrained=True` insists on
    /// membership in the constrained class (non-constant pair columns,
    /// full cycling order, slot fixed on odd strand counts).
    #[new]
    #[pyo3(signature = (rows, slot = None, constrained = false))]
    fn new(rows: Vec<Vec<u8>>, slot: Option<usize>, constrained: bool) -> PyResult<Self> {
        let rows = rows_from_ints(rows)?;
        family::make_element(rows, slot, constrained)
            .map(PyFamilyElement::from)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Parses the text form: one row of bits per line, `|` marking the slot
    /// position on odd strand counts.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let (rows, slot) = family::parse_matrix_text(text)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        family::make_element(rows, slot, false)
            .map(PyFamilyElement::from)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<u8>> {
        self.inner
            .rows()
            .iter()
            .map(|row| row.iter().map(|&b| u8::from(b)).collect())
            .collect()
    }

    #[getter]
    fn slot(&self) -> Option<usize> {
        self.inner.slot()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    /// True when the element lies in the constrained class whose rigid
    /// conjugacy sets the size formula predicts.
    #[getter]
    fn is_constrained(&self) -> bool {
        self.inner.is_m0()
    }

    /// "plain" for a literal reading, "tau" when the element records the
    /// mirrored orientation.
    #[getter]
    fn side(&self) -> &'static str {
        match self.inner.side() {
            Side::Plain => "plain",
            Side::Tau => "tau",
        }
    }

    /// The braid the matrix encodes: the product of its row braids.
    fn alpha(&self) -> PyBraid {
        self.inner.alpha().into()
    }

    fn tau(&self) -> Self {
        self.inner.tau().into()
    }

    fn cycled(&self) -> Self {
        self.inner.cycled().into()
    }

    fn is_terminal(&self) -> bool {
        self.inner.is_terminal()
    }

    fn is_initial(&self) -> bool {
        self.inner.is_initial()
    }

    /// Moves the distinguished pair-column bit up a row (inverse of `check`).
    fn hat(&self) -> PyResult<Self> {
        self.inner.hat().map(PyFamilyElement::from).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn check(&self) -> PyResult<Self> {
        self.inner.check().map(PyFamilyElement::from).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// All switching conjugators together with the elements they produce.
    fn switchings(&self) -> Vec<(PyBraid, PyFamilyElement)> {
        self.inner
            .switchings()
            .into_iter()
            .map(|(c, e)| (PyBraid::from(c), PyFamilyElement::from(e)))
            .collect()
    }

    /// For a terminal element: the initializing conjugator and its target.
    fn initializer(&self) -> PyResult<(PyBraid, PyFamilyElement)> {
        self.inner
            .initializer()
            .map(|(c, e)| (PyBraid::from(c), PyFamilyElement::from(e)))
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn matrix_text(&self) -> String {
        family::matrix_text(self.inner.rows(), self.inner.slot())
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "FamilyElement(n={}, k={}, constrained={})",
            self.inner.n(),
            self.inner.k(),
            self.inner.is_m0()
        )
    }
}

/// The graph of a rigid conjugacy set: nodes are the rigid conjugates,
/// edges the minimal rigidity-preserving conjugators.
#[pyclass(frozen, name = "RigidSetGraph")]
struct PyRigidSetGraph {
    inner: search::ConjugacyGraph,
}

#[pymethods]
impl PyRigidSetGraph {
    fn nodes(&self) -> Vec<PyBraid> {
        self.inner.nodes().iter().cloned().map(PyBraid::from).collect()
    }

    /// Edges as `(src, dst, conjugator, kind)` with kind "cut-head" or
    /// "add-tail".
    fn edges(&self) -> Vec<(usize, usize, PyBraid, &'static str)> {
        self.inner
            .edges()
            .iter()
            .map(|e| {
                let kind = match e.kind {
                    search::ConjugatorKind::CutHead => "cut-head",
                    search::ConjugatorKind::AddTail => "add-tail",
                };
                (e.src, e.dst, PyBraid::from(e.conjugator.clone()), kind)
            })
            .collect()
    }

    fn node_index(&self, x: &PyBraid) -> Option<usize> {
        self.inner.node_index(&x.inner)
    }

    /// A conjugator carrying node `src` to node `dst`, if both exist.
    fn conjugator_between(&self, src: usize, dst: usize) -> Option<PyBraid> {
        self.inner.conjugator_between(src, dst).map(PyBraid::from)
    }

    fn is_strongly_connected(&self) -> bool {
        self.inner.is_strongly_connected()
    }

    fn verify_edges(&self) -> bool {
        self.inner.verify_edges()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        value_to_py(py, &self.inner.to_json())
    }

    fn __len__(&self) -> usize {
        self.inner.nodes().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "RigidSetGraph(nodes={}, edges={})",
            self.inner.nodes().len(),
            self.inner.edges().len()
        )
    }
}

/// Conjugating by the first canonical factor: returns the result and the
/// conjugator.
#[pyfunction]
fn cycling(x: &PyBraid) -> PyResult<(PyBraid, PyBraid)> {
    conjugacy::cycling(&x.inner)
        .map(|(y, c)| (y.into(), PyBraid::from(c)))
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Conjugating by the inverse of the last canonical factor.
#[pyfunction]
fn decycling(x: &PyBraid) -> PyResult<(PyBraid, PyBraid)> {
    conjugacy::decycling(&x.inner)
        .map(|(y, c)| (y.into(), c.into()))
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Iterated cycling and decycling to a super summit representative; returns
/// `(representative, conjugator)` with `representative = conjugator^-1 * x *
/// conjugator`.
#[pyfunction]
#[pyo3(signature = (x, max_steps = 100_000))]
fn super_summit(x: &PyBraid, max_steps: usize) -> PyResult<(PyBraid, PyBraid)> {
    conjugacy::to_super_summit(&x.inner, SummitBudget { max_steps })
        .map(|cert| (cert.representative.into(), cert.conjugator.into()))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Searches the cycling orbit of a summit representative for a rigid
/// element; returns `(rigid, conjugator)` or None.
#[pyfunction]
fn rigid_in_cycling_orbit(x: &PyBraid) -> Option<(PyBraid, PyBraid)> {
    conjugacy::rigid_in_cycling_orbit(&x.inner).map(|(y, c)| (y.into(), c.into()))
}

fn budget(max_prefix_states: usize, max_nodes: usize) -> SearchBudget {
    SearchBudget { max_prefix_states, max_nodes }
}

fn search_err(e: search::SearchError) -> PyErr {
    match e {
        search::SearchError::BudgetExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Enumerates the rigid conjugacy set of a rigid braid by minimal
/// conjugators.
#[pyfunction]
#[pyo3(signature = (x, max_prefix_states = 5_000_000, max_nodes = 10_000))]
fn enumerate_rigid_set(
    x: &PyBraid,
    max_prefix_states: usize,
    max_nodes: usize,
) -> PyResult<PyRigidSetGraph> {
    search::enumerate_class(&x.inner, &budget(max_prefix_states, max_nodes))
        .map(|g| PyRigidSetGraph { inner: g })
        .map_err(search_err)
}

/// Rigid-set enumeration specialized to a family element, using the forced
/// prefix words of the row structure to prune the conjugator search.
#[pyfunction]
fn family_rigid_set(e: &PyFamilyElement) -> PyResult<PyRigidSetGraph> {
    family::family_rigid_graph(&e.inner)
        .map(|g| PyRigidSetGraph { inner: g })
        .map_err(|err| PyRuntimeError::new_err(err.to_string()))
}

/// Rigid-braid conjugacy test via rigid-set enumeration; returns
/// `(answer, conjugator)`.
#[pyfunction]
#[pyo3(signature = (x, y, max_prefix_states = 5_000_000, max_nodes = 10_000))]
fn is_conjugate(
    x: &PyBraid,
    y: &PyBraid,
    max_prefix_states: usize,
    max_nodes: usize,
) -> PyResult<(bool, Option<PyBraid>)> {
    search::is_conjugate(&x.inner, &y.inner, &budget(max_prefix_states, max_nodes))
        .map(|(answer, witness)| (answer, witness.map(PyBraid::from)))
        .map_err(search_err)
}

/// The minimal rigidity-preserving conjugators of a rigid braid, as
/// `(conjugator, kind)` pairs.
#[pyfunction]
#[pyo3(signature = (x, max_prefix_states = 5_000_000))]
fn minimal_conjugators(x: &PyBraid, max_prefix_states: usize) -> PyResult<Vec<(PyBraid, &'static str)>> {
    search::minimal_conjugators(&x.inner, &budget(max_prefix_states, usize::MAX))
        .map(|found| {
            found
                .items
                .into_iter()
                .map(|(c, kind)| {
                    let kind = match kind {
                        search::ConjugatorKind::CutHead => "cut-head",
                        search::ConjugatorKind::AddTail => "add-tail",
                    };
                    (PyBraid::from(c), kind)
                })
                .collect()
        })
        .map_err(search_err)
}

/// Reads a braid back as a family element when its factors are row braids.
#[pyfunction]
fn parse_family_braid(x: &PyBraid) -> Option<PyFamilyElement> {
    family::parse_family_braid(&x.inner).map(PyFamilyElement::from)
}

/// Predicted rigid-set size `k * 2^(p-3)` of the constrained class.
#[pyfunction]
fn predicted_size(k: usize, p: usize) -> u64 {
    family::predicted_size(k, p)
}

/// A uniformly sampled element of the constrained class on `n` strands with
/// `k` rows.
#[pyfunction]
fn sample_constrained(n: usize, k: usize, seed: u64) -> PyResult<PyFamilyElement> {
    let p = match n % 2 {
        0 => n / 2 - 1,
        _ => (n - 3) / 2,
    };
    if n < 10 || p < 4 || k < 2 || k > 4 {
        return Err(PyValueError::new_err(
            "constrained class needs n >= 10 (width >= 4) and 2 <= k <= 4",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(verify::sample_m0_element(&mut rng, n, k).into())
}

/// Periodic standard curves of the factorwise curve map, as
/// `((lo, hi), orbit, compatible)` triples; an empty list certifies that no
/// standard reduction system exists.
#[pyfunction]
fn find_standard_reduction(x: &PyBraid) -> Vec<((usize, usize), Vec<(usize, usize)>, bool)> {
    curves::find_standard_reduction(&x.inner)
        .into_iter()
        .map(|pc| {
            let orbit = pc.orbit.iter().map(|c| (c.lo, c.hi)).collect();
            ((pc.curve.lo, pc.curve.hi), orbit, pc.compatible)
        })
        .collect()
}

/// Runs the verification suite and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (ns = vec![10, 11, 14], ks = vec![2, 3], samples = 60, seed = 2026))]
fn run_verification<'py>(
    py: Python<'py>,
    ns: Vec<usize>,
    ks: Vec<usize>,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = verify::verify_suite(&ns, &ks, samples, seed);
    value_to_py(py, &report.to_json())
}

#[pymodule]
fn garside_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBraid>()?;
    m.add_class::<PyFamilyElement>()?;
    m.add_class::<PyRigidSetGraph>()?;
    m.add_function(wrap_pyfunction!(cycling, m)?)?;
    m.add_function(wrap_pyfunction!(decycling, m)?)?;
    m.add_function(wrap_pyfunction!(super_summit, m)?)?;
    m.add_function(wrap_pyfunction!(rigid_in_cycling_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_rigid_set, m)?)?;
    m.add_function(wrap_pyfunction!(family_rigid_set, m)?)?;
    m.add_function(wrap_pyfunction!(is_conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_conjugators, m)?)?;
    m.add_function(wrap_pyfunction!(parse_family_braid, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_size, m)?)?;
    m.add_function(wrap_pyfunction!(sample_constrained, m)?)?;
    m.add_function(wrap_pyfunction!(find_standard_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    Ok(())
}
