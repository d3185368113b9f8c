//! Python bindings: `Space` wraps a labeled space, `Element` an algebra
//! element tied to the space it was parsed in.

use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use labgraph::decompose::decompose;
use labgraph::hereditary::{hereditary_closure, minimal_sink_sets};
use labgraph::rep::{all_canonical_terms, build_rep, sample_terms, verify_homomorphism, verify_relations};
use labgraph::space::{closure, validate_space, ClosureMode, SetFamily, DEFAULT_CLOSURE_CAP};
use labgraph::term::{expand_to_sinks, multiply};
use labgraph::text::{format_element, parse_graph_file, parse_set_list, parse_term};
use labgraph::{AlgebraElement, LabeledGraph, LabeledSpace, Rational, VertexSet};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn names(g: &LabeledGraph, set: &VertexSet) -> Vec<String> {
    set.iter().map(|v| g.vertex_name(v).to_owned()).collect()
}

fn fraction<'py>(py: Python<'py>, q: Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((*q.numer(), *q.denom()))
}

fn parse_mode(mode: &str) -> PyResult<Option<ClosureMode>> {
    match mode {
        "explicit" => Ok(None),
        "accommodating" => Ok(Some(ClosureMode::Accommodating)),
        "normal" => Ok(Some(ClosureMode::Normal)),
        other => Err(err(format!("unknown closure mode {other:?}"))),
    }
}

#[pyclass(frozen, name = "Space", module = "labgraph")]
struct PySpace {
    inner: Arc<LabeledSpace>,
}

#[pymethods]
impl PySpace {
    /// `Space(vertices, edges, sets, mode="explicit")` where edges are
    /// `(source, label, target)` triples and `mode` is one of `explicit`,
    /// `accommodating` or `normal`.
    #[new]
    #[pyo3(signature = (vertices, edges, sets, mode = "explicit", cap = DEFAULT_CLOSURE_CAP))]
    fn new(
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
        sets: Vec<Vec<String>>,
        mode: &str,
        cap: usize,
    ) -> PyResult<Self> {
        let g = LabeledGraph::new(
            vertices.iter().map(String::as_str),
            edges.iter().map(|(s, l, t)| (s.as_str(), l.as_str(), t.as_str())),
        )
        .map_err(err)?;
        let listed = sets
            .iter()
            .map(|s| g.vertex_set(s.iter().map(String::as_str)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let listed = SetFamily::new(listed).map_err(err)?;
        let family = match parse_mode(mode)? {
            None => listed,
            Some(m) => closure(&g, &listed, m, cap).map_err(err)?,
        };
        let space = LabeledSpace::new(g, family).map_err(err)?;
        Ok(Self { inner: Arc::new(space) })
    }

    /// Parses the line-oriented graph file format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let file = parse_graph_file(text).map_err(err)?;
        let space = file.space(DEFAULT_CLOSURE_CAP).map_err(err)?;
        Ok(Self { inner: Arc::new(space) })
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.graph().vertices().to_vec()
    }

    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.inner.graph().alphabet().to_vec()
    }

    /// Members of the family in canonical order, each as a list of names.
    #[getter]
    fn family(&self) -> Vec<Vec<String>> {
        let g = self.inner.graph();
        self.inner.family().iter().map(|s| names(g, s)).collect()
    }

    /// Axiom report as a dict of booleans.
    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = validate_space(&self.inner);
        let d = PyDict::new(py);
        d.set_item("accommodating", r.accommodating.holds())?;
        d.set_item("weakly_left_resolving", r.weakly_left_resolving.holds())?;
        d.set_item("non_degenerate", r.non_degenerate.holds())?;
        d.set_item("normal", r.normal)?;
        d.set_item("sinks_in_family", r.sinks_in_family)?;
        d.set_item("left_resolving_graph", r.left_resolving_graph.holds())?;
        d.set_item("acyclic_graph", r.acyclic_graph)?;
        Ok(d)
    }

    /// The report as printed by the command line tool.
    fn report(&self) -> String {
        validate_space(&self.inner).render(self.inner.graph())
    }

    fn sinks(&self) -> Vec<String> {
        let g = self.inner.graph();
        names(g, &g.sinks())
    }

    fn minimal_sink_sets(&self) -> PyResult<Vec<Vec<String>>> {
        let g = self.inner.graph();
        let sets = minimal_sink_sets(&self.inner).map_err(err)?;
        Ok(sets.iter().map(|s| names(g, s)).collect())
    }

    /// Hereditary closure of `seeds` (e.g. `"{v};{x}"`) and whether it meets
    /// the ideal hypothesis.
    fn hereditary(&self, seeds: &str) -> PyResult<(Vec<Vec<String>>, bool)> {
        let g = self.inner.graph();
        let sets = parse_set_list(g, seeds).map_err(err)?;
        let h = hereditary_closure(&self.inner, &SetFamily::new(sets).map_err(err)?).map_err(err)?;
        let members = h.members().iter().map(|s| names(g, s)).collect();
        Ok((members, h.ideal_hypothesis().holds()))
    }

    /// Blocks as `(sinks, basis words)` pairs.
    fn decompose(&self) -> PyResult<Vec<(Vec<String>, Vec<String>)>> {
        let g = self.inner.graph();
        let dec = decompose(&self.inner).map_err(err)?;
        Ok(dec
            .blocks
            .iter()
            .map(|b| (names(g, &b.sinks), b.basis.iter().map(|w| g.word_label(w)).collect()))
            .collect())
    }

    fn element(&self, text: &str) -> PyResult<PyElement> {
        let value = parse_term(&self.inner, text).map_err(err)?;
        Ok(PyElement {
            space: self.inner.clone(),
            value,
        })
    }

    /// Runs every relation check plus a seeded homomorphism check. Returns a
    /// dict from check name to pass/fail.
    #[pyo3(signature = (samples = 50, seed = 0))]
    fn verify(&self, samples: usize, seed: u64) -> PyResult<BTreeMap<String, bool>> {
        let space = &*self.inner;
        let rep = build_rep(space, &decompose(space).map_err(err)?).map_err(err)?;
        let report = verify_relations(space, &rep).map_err(err)?;
        let mut out: BTreeMap<String, bool> = report
            .checks
            .iter()
            .map(|c| (c.relation.name().to_owned(), c.passed()))
            .collect();
        let terms = all_canonical_terms(space).map_err(err)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sample: Vec<AlgebraElement> = sample_terms(&terms, samples, &mut rng)
            .into_iter()
            .map(AlgebraElement::from)
            .collect();
        let hom = verify_homomorphism(space, &rep, &sample).map_err(err)?;
        out.insert("homomorphism".to_owned(), hom.holds());
        Ok(out)
    }

    fn __repr__(&self) -> String {
        let g = self.inner.graph();
        format!(
            "Space(vertices={}, edges={}, family={})",
            g.vertex_count(),
            g.edges().len(),
            self.inner.family().len()
        )
    }
}

#[pyclass(frozen, name = "Element", module = "labgraph")]
struct PyElement {
    space: Arc<LabeledSpace>,
    value: AlgebraElement,
}

impl PyElement {
    fn with(&self, value: AlgebraElement) -> Self {
        Self {
            space: self.space.clone(),
            value,
        }
    }

    fn same_space(&self, other: &PyElement) -> PyResult<()> {
        if Arc::ptr_eq(&self.space, &other.space) {
            Ok(())
        } else {
            Err(err("elements belong to different spaces"))
        }
    }
}

#[pymethods]
impl PyElement {
    fn __str__(&self) -> String {
        format_element(self.space.graph(), &self.value)
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.__str__())
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_space(other)?;
        Ok(self.with(multiply(&self.space, &self.value, &other.value).map_err(err)?))
    }

    fn __add__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_space(other)?;
        Ok(self.with(&self.value + &other.value))
    }

    fn __sub__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_space(other)?;
        Ok(self.with(&self.value - &other.value))
    }

    fn __neg__(&self) -> PyElement {
        self.with(-&self.value)
    }

    fn __eq__(&self, other: &PyElement) -> bool {
        Arc::ptr_eq(&self.space, &other.space) && self.value == other.value
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn adjoint(&self) -> PyElement {
        self.with(self.value.adjoint())
    }

    fn expand_to_sinks(&self) -> PyResult<PyElement> {
        Ok(self.with(expand_to_sinks(&self.space, &self.value).map_err(err)?))
    }

    /// `(term, coefficient)` pairs with `Fraction` coefficients.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(String, Bound<'py, PyAny>)>> {
        let g = self.space.graph();
        self.value
            .iter()
            .map(|(t, c)| Ok((labgraph::text::format_term(g, t), fraction(py, *c)?)))
            .collect()
    }

    /// Image under the finite representation, as rows of `Fraction`s.
    fn matrix<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        let space = &*self.space;
        let rep = build_rep(space, &decompose(space).map_err(err)?).map_err(err)?;
        let m = rep.element(space.graph(), &self.value).map_err(err)?;
        m.to_dense()
            .into_iter()
            .map(|row| row.into_iter().map(|q| fraction(py, q)).collect())
            .collect()
    }
}

#[pymodule]
#[pyo3(name = "labgraph")]
fn labgraph_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpace>()?;
    m.add_class::<PyElement>()?;
    Ok(())
}
