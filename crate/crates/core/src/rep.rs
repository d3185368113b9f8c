//! Exact finite-dimensional representation built from a decomposition, and
//! the relation checks it certifies.
//!
//! The basis is the disjoint union over blocks `V` of the block's words `μ`.
//! `s_a` sends slot `(V, μ)` to `(V, aμ)` when that slot exists, and `p_A` is
//! diagonal with a 1 at `(V, μ)` exactly when `V ⊆ r(A, μ)`. Then
//! `s_μ p_V s_ν*` is the matrix unit from `(V, ν)` to `(V, μ)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Symbol, Word};
use crate::set::VertexSet;
use crate::space::LabeledSpace;
use crate::term::{canonicalize, multiply, word_product, AlgebraElement, CanonicalTerm, Rational, WordProduct};
use crate::Verdict;

/// Square matrix with exact rational entries, stored by row. Zero entries are
/// never stored, so structural equality is matrix equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![BTreeMap::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows[i].get(&j).copied().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        if value.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, value);
        }
    }

    /// Non-zero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(&j, &v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, _)| i == j)
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (&k, &a) in row {
                for (&j, &b) in &other.rows[k] {
                    *acc.entry(j).or_insert_with(Rational::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.rows[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.combine(other, Rational::one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.combine(other, -Rational::one())
    }

    fn combine(&self, other: &SparseMatrix, factor: Rational) -> SparseMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            let cur = out.get(i, j);
            out.set(i, j, cur + factor * v);
        }
        out
    }

    pub fn scaled(&self, factor: Rational) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, j, v) in self.entries() {
            out.set(i, j, v * factor);
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, j, v) in self.entries() {
            out.set(j, i, v);
        }
        out
    }

    /// Dense rows, for dumps and small displays.
    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// A basis slot `(block, word)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slot {
    pub block: usize,
    pub word: Word,
}

#[derive(Debug, Clone)]
pub struct Rep {
    blocks: Vec<VertexSet>,
    slots: Vec<Slot>,
    slot_index: HashMap<Slot, usize>,
    gen_s: BTreeMap<Symbol, SparseMatrix>,
    gen_p: BTreeMap<VertexSet, SparseMatrix>,
}

/// Builds the representation for `space` from its decomposition.
pub fn build_rep(space: &LabeledSpace, dec: &Decomposition) -> Result<Rep> {
    let g = space.graph();
    if !g.is_acyclic() {
        return Err(Error::Cyclic);
    }
    let mut slots = Vec::new();
    for (k, block) in dec.blocks.iter().enumerate() {
        for w in &block.basis {
            slots.push(Slot {
                block: k,
                word: w.clone(),
            });
        }
    }
    let slot_index: HashMap<Slot, usize> = slots.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let blocks: Vec<VertexSet> = dec.blocks.iter().map(|b| b.sinks.clone()).collect();
    let dim = slots.len();

    let mut gen_s = BTreeMap::new();
    for a in g.symbols() {
        let mut m = SparseMatrix::zeros(dim);
        for (j, slot) in slots.iter().enumerate() {
            let target = Slot {
                block: slot.block,
                word: slot.word.prepended(a),
            };
            if let Some(&i) = slot_index.get(&target) {
                m.set(i, j, Rational::one());
            }
        }
        gen_s.insert(a, m);
    }

    let mut gen_p = BTreeMap::new();
    for member in space.family() {
        let mut m = SparseMatrix::zeros(dim);
        for (i, slot) in slots.iter().enumerate() {
            if blocks[slot.block].is_subset(&g.relative_range(member, &slot.word)) {
                m.set(i, i, Rational::one());
            }
        }
        gen_p.insert(member.clone(), m);
    }

    Ok(Rep {
        blocks,
        slots,
        slot_index,
        gen_s,
        gen_p,
    })
}

impl Rep {
    pub fn dimension(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn slot(&self, block: usize, word: &Word) -> Option<usize> {
        self.slot_index
            .get(&Slot {
                block,
                word: word.clone(),
            })
            .copied()
    }

    pub fn s(&self, a: Symbol) -> &SparseMatrix {
        &self.gen_s[&a]
    }

    /// `p_A`; the empty set maps to zero even when it is not a member.
    pub fn p(&self, a: &VertexSet) -> Option<SparseMatrix> {
        if a.is_empty() {
            return Some(SparseMatrix::zeros(self.dimension()));
        }
        self.gen_p.get(a).cloned()
    }

    fn p_or_err(&self, g: &LabeledGraph, a: &VertexSet) -> Result<SparseMatrix> {
        self.p(a).ok_or_else(|| Error::NotInFamily(g.format_set(a)))
    }

    pub fn generators_s(&self) -> impl Iterator<Item = (&Symbol, &SparseMatrix)> {
        self.gen_s.iter()
    }

    pub fn generators_p(&self) -> impl Iterator<Item = (&VertexSet, &SparseMatrix)> {
        self.gen_p.iter()
    }

    /// Mutable access to an `s` generator. Only for fault-injection tests.
    #[doc(hidden)]
    pub fn s_mut(&mut self, a: Symbol) -> &mut SparseMatrix {
        self.gen_s.get_mut(&a).expect("known label")
    }

    /// `s_μ`, with `s_ε` the identity.
    pub fn word(&self, w: &Word) -> SparseMatrix {
        let mut m = SparseMatrix::identity(self.dimension());
        for a in w.symbols() {
            m = m.mul(self.s(*a));
        }
        m
    }

    pub fn term(&self, g: &LabeledGraph, t: &CanonicalTerm) -> Result<SparseMatrix> {
        let p = self.p_or_err(g, t.mid())?;
        Ok(self.word(t.left()).mul(&p).mul(&self.word(t.right()).transpose()))
    }

    pub fn element(&self, g: &LabeledGraph, e: &AlgebraElement) -> Result<SparseMatrix> {
        let mut out = SparseMatrix::zeros(self.dimension());
        for (t, c) in e.iter() {
            out = out.add(&self.term(g, t)?.scaled(*c));
        }
        Ok(out)
    }

    /// One matrix per generator: header `# gen s[a] dim N` (or `p{..}`), then
    /// rows of space-separated integers.
    pub fn dump(&self, g: &LabeledGraph) -> String {
        let mut out = String::new();
        let mut write = |name: String, m: &SparseMatrix| {
            let _ = writeln!(out, "# gen {name} dim {}", self.dimension());
            for row in m.to_dense() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        };
        for (a, m) in &self.gen_s {
            write(format!("s[{}]", g.symbol_name(*a)), m);
        }
        for (set, m) in &self.gen_p {
            let names: Vec<&str> = set.iter().map(|v| g.vertex_name(v)).collect();
            write(format!("p{{{}}}", names.join(",")), m);
        }
        out
    }
}

pub fn rep_of_element(space: &LabeledSpace, rep: &Rep, e: &AlgebraElement) -> Result<SparseMatrix> {
    rep.element(space.graph(), e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Every `p` is an idempotent diagonal, every `s` satisfies `S Sᵀ S = S`.
    GeneratorShape,
    /// `p_A p_B = p_{A∩B}`.
    ProjectionProduct,
    /// `p_{A∪B} = p_A + p_B − p_{A∩B}`.
    InclusionExclusion,
    /// `s_a* s_b = δ_{a,b} p_{r(a)}`.
    PartialIsometry,
    /// `s_a* p_A = p_{r(A,a)} s_a*`.
    Covariance,
    /// `p_A = Σ_{a ∈ L(AE¹)} s_a p_{r(A,a)} s_a*` for sink-free `A`.
    SinkFreeExpansion,
    /// `p_A − Σ_{a ∈ S} s_a p_{r(A,a)} s_a*` is a diagonal 0/1 matrix.
    Subprojection,
    /// The four-case reduction of `s_μ* s_ν`.
    WordProducts,
}

impl Relation {
    pub const ALL: [Relation; 8] = [
        Relation::GeneratorShape,
        Relation::ProjectionProduct,
        Relation::InclusionExclusion,
        Relation::PartialIsometry,
        Relation::Covariance,
        Relation::SinkFreeExpansion,
        Relation::Subprojection,
        Relation::WordProducts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::GeneratorShape => "generator-shape",
            Relation::ProjectionProduct => "projection-product",
            Relation::InclusionExclusion => "inclusion-exclusion",
            Relation::PartialIsometry => "partial-isometry",
            Relation::Covariance => "covariance",
            Relation::SinkFreeExpansion => "sink-free-expansion",
            Relation::Subprojection => "subprojection",
            Relation::WordProducts => "word-products",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: Relation,
    pub instances: usize,
    pub counterexample: Option<String>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(RelationCheck::passed)
    }

    pub fn get(&self, relation: Relation) -> &RelationCheck {
        self.checks
            .iter()
            .find(|c| c.relation == relation)
            .expect("every relation is checked")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            match &c.counterexample {
                None => {
                    let _ = writeln!(out, "{}: pass ({} instances)", c.relation.name(), c.instances);
                }
                Some(w) => {
                    let _ = writeln!(out, "{}: FAIL at {w}", c.relation.name());
                }
            }
        }
        out
    }
}

struct Checker {
    relation: Relation,
    instances: usize,
    counterexample: Option<String>,
}

impl Checker {
    fn new(relation: Relation) -> Self {
        Self {
            relation,
            instances: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    fn done(self) -> RelationCheck {
        RelationCheck {
            relation: self.relation,
            instances: self.instances,
            counterexample: self.counterexample,
        }
    }
}

/// Checks every defining relation exhaustively on the representation.
pub fn verify_relations(space: &LabeledSpace, rep: &Rep) -> Result<RelationReport> {
    let g = space.graph();
    let members: Vec<&VertexSet> = space.family().iter().collect();
    let symbols: Vec<Symbol> = g.symbols().collect();
    let set = |a: &VertexSet| g.format_set(a);
    let label = |a: Symbol| g.symbol_name(a).to_owned();
    let p = |a: &VertexSet| rep.p(a);
    let mut checks = Vec::new();

    let mut c = Checker::new(Relation::GeneratorShape);
    for a in &members {
        let m = p(a).expect("member");
        c.check(m.is_diagonal() && m.mul(&m) == m, || format!("p{}", set(a)));
    }
    for &a in &symbols {
        let s = rep.s(a);
        c.check(s.mul(&s.transpose()).mul(s) == *s, || format!("s[{}]", label(a)));
    }
    checks.push(c.done());

    let mut c = Checker::new(Relation::ProjectionProduct);
    for a in &members {
        for b in &members {
            let ok = match p(&a.intersection(b)) {
                Some(meet) => p(a).unwrap().mul(&p(b).unwrap()) == meet,
                None => false,
            };
            c.check(ok, || format!("({}, {})", set(a), set(b)));
        }
    }
    checks.push(c.done());

    let mut c = Checker::new(Relation::InclusionExclusion);
    for a in &members {
        for b in &members {
            let ok = match (p(&a.union(b)), p(&a.intersection(b))) {
                (Some(join), Some(meet)) => join == p(a).unwrap().add(&p(b).unwrap()).sub(&meet),
                _ => false,
            };
            c.check(ok, || format!("({}, {})", set(a), set(b)));
        }
    }
    checks.push(c.done());

    let mut c = Checker::new(Relation::PartialIsometry);
    for &a in &symbols {
        for &b in &symbols {
            let lhs = rep.s(a).transpose().mul(rep.s(b));
            let ok = if a == b {
                p(&g.letter_range(a)).is_some_and(|r| r == lhs)
            } else {
                lhs.is_zero()
            };
            c.check(ok, || format!("({}, {})", label(a), label(b)));
        }
    }
    checks.push(c.done());

    let mut c = Checker::new(Relation::Covariance);
    for &a in &symbols {
        for m in &members {
            let s_t = rep.s(a).transpose();
            let ok = p(&g.step(m, a)).is_some_and(|r| s_t.mul(&p(m).unwrap()) == r.mul(&s_t));
            c.check(ok, || format!("({}, {})", label(a), set(m)));
        }
    }
    checks.push(c.done());

    let sinks = g.sinks();
    let expansion = |m: &VertexSet, labels: &[Symbol]| -> Option<SparseMatrix> {
        let mut sum = SparseMatrix::zeros(rep.dimension());
        for &a in labels {
            let s = rep.s(a);
            sum = sum.add(&s.mul(&p(&g.step(m, a))?).mul(&s.transpose()));
        }
        Some(sum)
    };

    let mut c = Checker::new(Relation::SinkFreeExpansion);
    for m in members.iter().filter(|m| !m.is_empty() && m.is_disjoint(&sinks)) {
        let ok = expansion(m, &g.out_labels(m)).is_some_and(|sum| sum == p(m).unwrap());
        c.check(ok, || set(m));
    }
    checks.push(c.done());

    let mut c = Checker::new(Relation::Subprojection);
    for m in &members {
        let labels = g.out_labels(m);
        let subsets = 1u64 << labels.len().min(16);
        for mask in 0..subsets {
            let chosen: Vec<Symbol> = labels
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &a)| a)
                .collect();
            let ok = expansion(m, &chosen).is_some_and(|sum| {
                let diff = p(m).unwrap().sub(&sum);
                diff.is_diagonal() && diff.entries().all(|(_, _, v)| v.is_one())
            });
            c.check(ok, || {
                let names: Vec<String> = chosen.iter().map(|&a| label(a)).collect();
                format!("{} with S = {{{}}}", set(m), names.join(","))
            });
        }
    }
    checks.push(c.done());

    let mut c = Checker::new(Relation::WordProducts);
    let words = g.enumerate_words(None)?;
    for mu in &words {
        for nu in &words {
            let lhs = rep.word(mu).transpose().mul(&rep.word(nu));
            let range = |w: &Word| p(&g.range_of_word(w).expect("non-empty word"));
            let ok = match word_product(mu, nu) {
                WordProduct::Equal => range(mu).is_some_and(|r| r == lhs),
                WordProduct::RightExtends(gamma) => match (range(mu), range(nu)) {
                    (Some(rm), Some(rn)) => {
                        let sg = rep.word(&gamma);
                        lhs == rm.mul(&sg) && lhs == sg.mul(&rn)
                    }
                    _ => false,
                },
                WordProduct::LeftExtends(gamma) => match (range(mu), range(nu)) {
                    (Some(rm), Some(rn)) => {
                        let sg_t = rep.word(&gamma).transpose();
                        lhs == sg_t.mul(&rn) && lhs == rm.mul(&sg_t)
                    }
                    _ => false,
                },
                WordProduct::Orthogonal => lhs.is_zero(),
            };
            c.check(ok, || format!("({}, {})", g.format_word(mu), g.format_word(nu)));
        }
    }
    checks.push(c.done());

    Ok(RelationReport { checks })
}

/// A pair whose product, or an element whose adjoint, the representation does
/// not respect. Indices refer to the checked element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomomorphismFailure {
    Product(usize, usize),
    Adjoint(usize),
}

/// `rep(xy) = rep(x) rep(y)` and `rep(x*) = rep(x)ᵀ` over all pairs of
/// `elements`.
pub fn verify_homomorphism(
    space: &LabeledSpace,
    rep: &Rep,
    elements: &[AlgebraElement],
) -> Result<Verdict<HomomorphismFailure>> {
    verify_product_map(space, rep, elements, |x, y| multiply(space, x, y))
}

/// [`verify_homomorphism`] with a caller-supplied product.
pub fn verify_product_map<F>(
    space: &LabeledSpace,
    rep: &Rep,
    elements: &[AlgebraElement],
    product: F,
) -> Result<Verdict<HomomorphismFailure>>
where
    F: Fn(&AlgebraElement, &AlgebraElement) -> Result<AlgebraElement>,
{
    let g = space.graph();
    let mats: Vec<SparseMatrix> = elements.iter().map(|e| rep.element(g, e)).collect::<Result<_>>()?;
    for (i, x) in elements.iter().enumerate() {
        if rep.element(g, &x.adjoint())? != mats[i].transpose() {
            return Ok(Verdict::Fails(HomomorphismFailure::Adjoint(i)));
        }
        for (j, y) in elements.iter().enumerate() {
            if rep.element(g, &product(x, y)?)? != mats[i].mul(&mats[j]) {
                return Ok(Verdict::Fails(HomomorphismFailure::Product(i, j)));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Every non-zero canonical term of an acyclic space.
pub fn all_canonical_terms(space: &LabeledSpace) -> Result<Vec<CanonicalTerm>> {
    let g = space.graph();
    let mut words = vec![Word::empty()];
    words.extend(g.enumerate_words(None)?);
    let mut out = Vec::new();
    for mu in &words {
        for nu in &words {
            for a in space.family() {
                if let Some(t) = canonicalize(space, mu, a, nu)? {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `count` terms drawn uniformly (with replacement) from `terms`.
pub fn sample_terms<R: Rng + ?Sized>(terms: &[CanonicalTerm], count: usize, rng: &mut R) -> Vec<CanonicalTerm> {
    (0..count).filter_map(|_| terms.choose(rng).cloned()).collect()
}

/// A random combination of up to `max_terms` terms with coefficients in
/// `{±1, ±2, ±1/2}`.
pub fn sample_element<R: Rng + ?Sized>(terms: &[CanonicalTerm], max_terms: usize, rng: &mut R) -> AlgebraElement {
    const COEFFICIENTS: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)];
    let n = rng.random_range(1..=max_terms.max(1));
    let mut e = AlgebraElement::zero();
    for _ in 0..n {
        if let Some(t) = terms.choose(rng) {
            let (a, b) = *COEFFICIENTS.choose(rng).unwrap();
            e.add_term(t.clone(), Rational::new(a, b));
        }
    }
    e
}
