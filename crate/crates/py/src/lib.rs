//! Python bindings for the `affsel` library.
//!
//! Rationals cross the boundary as `fractions.Fraction`. Inputs may be
//! `int`, `Fraction` or strings such as `"-2/3"`; floats are rejected.

use affsel_core::instances::{self, HahnBanachSpec, PolyhedralNorm, RandomGraphOptions};
use affsel_core::io::{instance_to_json, parse_instance, Instance};
use affsel_core::lp::verify_farkas;
use affsel_core::multifunction::{self as mf, Sample};
use affsel_core::polytope::VPolytope;
use affsel_core::rational::{format_rational, parse_rational, Rational};
use affsel_core::selection::{self, Datum, SelectionStatus};
use affsel_core::Error;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    affsel,
    AffselError,
    PyValueError,
    "Base class for library errors."
);
create_exception!(affsel, InputError, AffselError);
create_exception!(affsel, GeometryError, AffselError);
create_exception!(affsel, DomainError, AffselError);
create_exception!(affsel, NotInteriorError, AffselError);
create_exception!(affsel, UnsupportedError, AffselError);

fn to_py_err(err: Error) -> PyErr {
    let msg = err.to_string();
    match err {
        Error::Input(_) => InputError::new_err(msg),
        Error::Geometry(_) => GeometryError::new_err(msg),
        Error::Domain(_) => DomainError::new_err(msg),
        Error::NotInterior(_) => NotInteriorError::new_err(msg),
        Error::Unsupported(_) => UnsupportedError::new_err(msg),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for affsel_core::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    parse_rational(&text).or_raise()
}

fn vector(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    obj.try_iter()?.map(|item| rational(&item?)).collect()
}

fn matrix(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Vec<Rational>>> {
    obj.try_iter()?.map(|row| vector(&row?)).collect()
}

fn fraction<'py>(py: Python<'py>, value: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((format_rational(value),))
}

fn fractions<'py>(py: Python<'py>, values: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    values.iter().map(|v| fraction(py, v)).collect()
}

fn fraction_rows<'py>(
    py: Python<'py>,
    rows: &[Vec<Rational>],
) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    rows.iter().map(|r| fractions(py, r)).collect()
}

fn show(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// A multifunction given by the vertices of its graph in `R^n × R^m`.
#[pyclass(name = "Graph", module = "affsel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph(mf::GraphMultifunction);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, m: usize, vertices: &Bound<'_, PyAny>) -> PyResult<Self> {
        let poly = VPolytope::new(n + m, matrix(vertices)?).or_raise()?;
        Ok(Self(mf::GraphMultifunction::new(n, m, poly).or_raise()?))
    }

    /// Parses a `graph` instance document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match parse_instance(text).or_raise()? {
            Instance::Graph(g) => Ok(Self(g)),
            _ => Err(InputError::new_err("expected a graph instance")),
        }
    }

    fn to_json(&self) -> String {
        instance_to_json(&Instance::Graph(self.0.clone()))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        fraction_rows(py, self.0.graph().vertices())
    }

    /// Distinct vertices of the domain projection.
    fn domain_vertices<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        fraction_rows(py, self.0.domain().vertices())
    }

    fn domain_is_full_dimensional(&self) -> bool {
        self.0.domain_is_full_dimensional()
    }

    fn in_domain(&self, x: &Bound<'_, PyAny>) -> PyResult<bool> {
        self.0.in_domain(&vector(x)?).or_raise()
    }

    fn fiber_contains(&self, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<bool> {
        self.0.fiber_contains(&vector(x)?, &vector(y)?).or_raise()
    }

    /// `(min, max)` of `direction · y` over the fiber, or `None` off the domain.
    fn fiber_extrema<'py>(
        &self,
        py: Python<'py>,
        x: &Bound<'_, PyAny>,
        direction: &Bound<'_, PyAny>,
    ) -> PyResult<Option<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
        match self
            .0
            .fiber_extrema(&vector(x)?, &vector(direction)?)
            .or_raise()?
        {
            Some((lo, hi)) => Ok(Some((fraction(py, &lo)?, fraction(py, &hi)?))),
            None => Ok(None),
        }
    }

    /// Lexicographically smallest point of the fiber.
    fn canonical_fiber_point<'py>(
        &self,
        py: Python<'py>,
        x: &Bound<'_, PyAny>,
    ) -> PyResult<Option<Vec<Bound<'py, PyAny>>>> {
        match self.0.canonical_fiber_point(&vector(x)?).or_raise()? {
            Some(y) => Ok(Some(fractions(py, &y)?)),
            None => Ok(None),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={}, vertices={})",
            self.0.n(),
            self.0.m(),
            self.0.graph().vertices().len()
        )
    }
}

/// Finitely many points with polytope values.
#[pyclass(name = "Sampled", module = "affsel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySampled(mf::SampledMultifunction);

#[pymethods]
impl PySampled {
    /// `samples` is a sequence of `(point, value_vertices)` pairs.
    #[new]
    #[pyo3(signature = (n, m, samples, inner_approximation = false))]
    fn new(
        n: usize,
        m: usize,
        samples: &Bound<'_, PyAny>,
        inner_approximation: bool,
    ) -> PyResult<Self> {
        let mut parsed = Vec::new();
        for pair in samples.try_iter()? {
            let (point, value): (Bound<'_, PyAny>, Bound<'_, PyAny>) = pair?.extract()?;
            parsed.push(Sample {
                point: vector(&point)?,
                value: VPolytope::new(m, matrix(&value)?).or_raise()?,
            });
        }
        let sampled = mf::SampledMultifunction::new(n, m, parsed).or_raise()?;
        Ok(Self(sampled.with_inner_approximation(inner_approximation)))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn inner_approximation(&self) -> bool {
        self.0.is_inner_approximation()
    }

    /// List of `(point, value_vertices)` pairs.
    #[getter]
    #[allow(clippy::type_complexity)]
    fn samples<'py>(
        &self,
        py: Python<'py>,
    ) -> PyResult<Vec<(Vec<Bound<'py, PyAny>>, Vec<Vec<Bound<'py, PyAny>>>)>> {
        self.0
            .samples()
            .iter()
            .map(|s| {
                Ok((
                    fractions(py, &s.point)?,
                    fraction_rows(py, s.value.vertices())?,
                ))
            })
            .collect()
    }

    fn to_json(&self) -> String {
        instance_to_json(&Instance::Sampled(self.0.clone()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Sampled(n={}, m={}, samples={})",
            self.0.n(),
            self.0.m(),
            self.0.samples().len()
        )
    }
}

/// `x ↦ A x + b`.
#[pyclass(name = "AffineMap", module = "affsel", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyAffineMap(affsel_core::AffineMap);

#[pymethods]
impl PyAffineMap {
    #[new]
    fn new(matrix_rows: &Bound<'_, PyAny>, offset: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self(
            affsel_core::AffineMap::new(matrix(matrix_rows)?, vector(offset)?).or_raise()?,
        ))
    }

    #[getter]
    fn matrix<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        fraction_rows(py, self.0.matrix())
    }

    #[getter]
    fn offset<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, self.0.offset())
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.domain_dim()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.codomain_dim()
    }

    fn apply<'py>(
        &self,
        py: Python<'py>,
        x: &Bound<'_, PyAny>,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.0.apply(&vector(x)?).or_raise()?)
    }

    fn __call__<'py>(
        &self,
        py: Python<'py>,
        x: &Bound<'_, PyAny>,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.apply(py, x)
    }

    fn __repr__(&self) -> String {
        let rows: Vec<String> = self.0.matrix().iter().map(|r| show(r)).collect();
        format!(
            "AffineMap(matrix=[{}], offset={})",
            rows.join(", "),
            show(self.0.offset())
        )
    }
}

/// Result of a global or sandwich selection.
#[pyclass(name = "SelectionOutcome", module = "affsel", frozen, get_all)]
struct PyOutcome {
    /// `"found"` or `"none_exists"`.
    status: &'static str,
    map: Option<PyAffineMap>,
    /// Whether the attached infeasibility certificate checks out; `None`
    /// when a map was found.
    certificate_verified: Option<bool>,
    spot_checks: usize,
    spot_check_failures: usize,
}

#[pymethods]
impl PyOutcome {
    #[getter]
    fn found(&self) -> bool {
        self.status == "found"
    }

    fn __repr__(&self) -> String {
        match &self.map {
            Some(m) => format!("SelectionOutcome(found, {})", m.__repr__()),
            None => format!(
                "SelectionOutcome(none_exists, certificate_verified={:?})",
                self.certificate_verified
            ),
        }
    }
}

impl PyOutcome {
    fn build(outcome: &affsel_core::SelectionOutcome, verified: Option<bool>) -> Self {
        Self {
            status: match outcome.status {
                SelectionStatus::Found => "found",
                SelectionStatus::NoneExists => "none_exists",
            },
            map: outcome.map.clone().map(PyAffineMap),
            certificate_verified: verified,
            spot_checks: outcome.spot_checks.len(),
            spot_check_failures: outcome.spot_checks.iter().filter(|c| !c.member).count(),
        }
    }
}

#[pyclass(
    name = "LocalSelection",
    module = "affsel",
    frozen,
    skip_from_py_object
)]
struct PyLocal(selection::LocalSelection);

#[pymethods]
impl PyLocal {
    #[getter]
    fn center<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.0.center)
    }

    #[getter]
    fn simplex<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        fraction_rows(py, self.0.simplex.vertices())
    }

    #[getter]
    fn map(&self) -> PyAffineMap {
        PyAffineMap(self.0.map.clone())
    }

    #[getter]
    fn shrink_exponent(&self) -> u32 {
        self.0.shrink_exponent
    }

    #[getter]
    fn verification_trials(&self) -> usize {
        self.0.verification.trials
    }

    #[getter]
    fn verification_failures(&self) -> usize {
        self.0.verification.failures
    }

    fn __repr__(&self) -> String {
        format!(
            "LocalSelection(center={}, map={})",
            show(&self.0.center),
            PyAffineMap(self.0.map.clone()).__repr__()
        )
    }
}

#[pyclass(name = "AuditReport", module = "affsel", frozen, skip_from_py_object)]
struct PyAudit(mf::AuditReport);

#[pymethods]
impl PyAudit {
    #[getter]
    fn passed(&self) -> bool {
        self.0.passed
    }

    #[getter]
    fn checked_triples(&self) -> usize {
        self.0.checked_triples
    }

    /// One dict per violation with keys `i`, `j`, `k`, `t`, `witness`.
    #[getter]
    fn violations<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.0
            .violations
            .iter()
            .map(|v| {
                let d = PyDict::new(py);
                d.set_item("i", v.i)?;
                d.set_item("j", v.j)?;
                d.set_item("k", v.k)?;
                d.set_item("t", fraction(py, &v.t)?)?;
                d.set_item("witness", fractions(py, &v.witness)?)?;
                Ok(d)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "AuditReport(passed={}, checked_triples={}, violations={})",
            self.0.passed,
            self.0.checked_triples,
            self.0.violations.len()
        )
    }
}

/// Olsen's tetrahedron graph over the diamond `|x| + |y| <= 1`.
#[pyfunction]
fn olsen() -> PyGraph {
    PyGraph(instances::olsen())
}

/// Norm-preserving extensions of `f(t, t) = c·t` on `(R^2, norm)`, sampled at
/// `c ∈ {−1, 0, 1}`.
#[pyfunction]
#[pyo3(signature = (norm = "sup"))]
fn hahn_banach(norm: &str) -> PyResult<PySampled> {
    let mut spec = HahnBanachSpec::diagonal_sup_norm();
    spec.norm = match norm {
        "sup" => PolyhedralNorm::Sup,
        "one" => PolyhedralNorm::One,
        other => {
            return Err(InputError::new_err(format!(
                "unknown norm {other:?}, expected sup or one"
            )))
        }
    };
    Ok(PySampled(instances::hahn_banach(&spec).or_raise()?))
}

#[pyfunction]
#[pyo3(signature = (n, m, vertices, seed = 0))]
fn random_graph(n: usize, m: usize, vertices: usize, seed: u64) -> PyResult<PyGraph> {
    Ok(PyGraph(
        instances::random_convex_graph(&RandomGraphOptions::new(n, m, vertices, seed))
            .or_raise()?,
    ))
}

#[pyfunction]
fn global_selection(graph: &PyGraph) -> PyResult<PyOutcome> {
    let outcome = selection::global_selection(&graph.0).or_raise()?;
    let verified = match outcome.status {
        SelectionStatus::Found => None,
        SelectionStatus::NoneExists => {
            Some(selection::verify_global_certificate(&graph.0, &outcome).or_raise()?)
        }
    };
    Ok(PyOutcome::build(&outcome, verified))
}

#[pyfunction]
fn local_selection(graph: &PyGraph, point: &Bound<'_, PyAny>) -> PyResult<PyLocal> {
    Ok(PyLocal(
        selection::local_selection(&graph.0, &vector(point)?).or_raise()?,
    ))
}

fn data(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Datum>> {
    obj.try_iter()?
        .map(|pair| {
            let (point, value): (Bound<'_, PyAny>, Bound<'_, PyAny>) = pair?.extract()?;
            Ok((vector(&point)?, rational(&value)?))
        })
        .collect()
}

/// Affine `a` with `lower <= a <= upper` at the given `(point, value)` data.
#[pyfunction]
fn sandwich(lower: &Bound<'_, PyAny>, upper: &Bound<'_, PyAny>) -> PyResult<PyOutcome> {
    let (lower, upper) = (data(lower)?, data(upper)?);
    let outcome = selection::sandwich(&lower, &upper).or_raise()?;
    let verified = match &outcome.certificate {
        Some(cert) => Some(
            verify_farkas(&selection::sandwich_lp(&lower, &upper).or_raise()?, cert).or_raise()?,
        ),
        None => None,
    };
    Ok(PyOutcome::build(&outcome, verified))
}

#[pyfunction]
fn audit_convexity(sampled: &PySampled) -> PyAudit {
    PyAudit(mf::audit_convexity(&sampled.0))
}

#[pyfunction]
fn audit_intersection(sampled: &PySampled) -> PyAudit {
    PyAudit(mf::audit_intersection(&sampled.0))
}

#[pyfunction]
fn sample_graph(graph: &PyGraph, points: &Bound<'_, PyAny>) -> PyResult<PySampled> {
    Ok(PySampled(
        mf::sample_graph(&graph.0, &matrix(points)?).or_raise()?,
    ))
}

/// Checks `map(x) ∈ F(x)` at seeded random domain points; returns
/// `(trials, failures)`.
#[pyfunction]
#[pyo3(signature = (graph, map, trials = 100, seed = 0))]
fn verify_selection(
    graph: &PyGraph,
    map: &PyAffineMap,
    trials: usize,
    seed: u64,
) -> PyResult<(usize, usize)> {
    let report = selection::verify_selection(&graph.0, &map.0, trials, seed).or_raise()?;
    Ok((report.trials, report.failures))
}

/// Exact affine selections of convex multifunctions.
#[pymodule]
fn affsel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("AffselError", py.get_type::<AffselError>())?;
    m.add("InputError", py.get_type::<InputError>())?;
    m.add("GeometryError", py.get_type::<GeometryError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("NotInteriorError", py.get_type::<NotInteriorError>())?;
    m.add("UnsupportedError", py.get_type::<UnsupportedError>())?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PySampled>()?;
    m.add_class::<PyAffineMap>()?;
    m.add_class::<PyOutcome>()?;
    m.add_class::<PyLocal>()?;
    m.add_class::<PyAudit>()?;
    m.add_function(wrap_pyfunction!(olsen, m)?)?;
    m.add_function(wrap_pyfunction!(hahn_banach, m)?)?;
    m.add_function(wrap_pyfunction!(random_graph, m)?)?;
    m.add_function(wrap_pyfunction!(global_selection, m)?)?;
    m.add_function(wrap_pyfunction!(local_selection, m)?)?;
    m.add_function(wrap_pyfunction!(sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(audit_convexity, m)?)?;
    m.add_function(wrap_pyfunction!(audit_intersection, m)?)?;
    m.add_function(wrap_pyfunction!(sample_graph, m)?)?;
    m.add_function(wrap_pyfunction!(verify_selection, m)?)?;
    Ok(())
}
