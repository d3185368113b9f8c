//! Canonical spanning terms `s_μ p_A s_ν*` and finite rational combinations
//! of them.
//!
//! A term is kept normalized: its middle set is `A ∩ r(μ) ∩ r(ν)` (with
//! `r(ε)` acting as the whole vertex set), and a term whose middle set would
//! be empty is the zero element. Products follow the four-way comparison of
//! the inner words `β` and `μ` in `(s_α p_A s_β*)(s_μ p_B s_ν*)`.

use std::collections::btree_map::{self, BTreeMap};
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::Word;
use crate::hereditary::minimal_sink_sets;
use crate::set::VertexSet;
use crate::space::LabeledSpace;

pub type Rational = num_rational::Rational64;

/// `s_left p_mid s_right*`, normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalTerm {
    pub(crate) left: Word,
    pub(crate) mid: VertexSet,
    pub(crate) right: Word,
}

impl CanonicalTerm {
    pub fn left(&self) -> &Word {
        &self.left
    }

    pub fn mid(&self) -> &VertexSet {
        &self.mid
    }

    pub fn right(&self) -> &Word {
        &self.right
    }

    /// `(s_μ p_A s_ν*)* = s_ν p_A s_μ*`.
    pub fn adjoint(&self) -> CanonicalTerm {
        CanonicalTerm {
            left: self.right.clone(),
            mid: self.mid.clone(),
            right: self.left.clone(),
        }
    }

    /// Builds a term without normalizing it. Only for fault-injection tests.
    #[doc(hidden)]
    pub fn from_parts_unchecked(left: Word, mid: VertexSet, right: Word) -> Self {
        Self { left, mid, right }
    }
}

/// Normalizes `s_μ p_A s_ν*`. Returns `None` for the zero element and errors
/// if the normalized middle set is not a member of the family.
pub fn canonicalize(space: &LabeledSpace, mu: &Word, a: &VertexSet, nu: &Word) -> Result<Option<CanonicalTerm>> {
    let g = space.graph();
    let mid = a.intersection(&g.range_or_all(mu)).intersection(&g.range_or_all(nu));
    if mid.is_empty() {
        return Ok(None);
    }
    space.require_member(&mid)?;
    Ok(Some(CanonicalTerm {
        left: mu.clone(),
        mid,
        right: nu.clone(),
    }))
}

/// A finite rational combination of canonical terms. No stored coefficient
/// is zero; the empty map is zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<CanonicalTerm, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_term(term: CanonicalTerm) -> Self {
        let mut e = Self::zero();
        e.add_term(term, Rational::one());
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (CanonicalTerm, Rational)>) -> Self {
        let mut e = Self::zero();
        for (t, c) in terms {
            e.add_term(t, c);
        }
        e
    }

    pub fn add_term(&mut self, term: CanonicalTerm, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, term: &CanonicalTerm) -> Rational {
        self.terms.get(term).copied().unwrap_or_else(Rational::zero)
    }

    /// Terms in `(left, mid, right)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalTerm, &Rational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = &CanonicalTerm> {
        self.terms.keys()
    }

    pub fn scaled(&self, factor: Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(t, c)| (t.clone(), c * factor)))
    }

    /// Coefficients are rational, so conjugation leaves them unchanged.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(t, c)| (t.adjoint(), *c)))
    }
}

impl From<CanonicalTerm> for AlgebraElement {
    fn from(term: CanonicalTerm) -> Self {
        Self::from_term(term)
    }
}

impl AddAssign<&AlgebraElement> for AlgebraElement {
    fn add_assign(&mut self, rhs: &AlgebraElement) {
        for (t, c) in &rhs.terms {
            self.add_term(t.clone(), *c);
        }
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        self.scaled(-Rational::one())
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

/// How `s_μ* s_ν` reduces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordProduct {
    /// `ν = μ`: `p_{r(μ)}`.
    Equal,
    /// `ν = μγ`: `s_γ p_{r(ν)}`.
    RightExtends(Word),
    /// `μ = νγ`: `p_{r(μ)} s_γ*`.
    LeftExtends(Word),
    /// Neither extends the other: `0`.
    Orthogonal,
}

pub fn word_product(mu: &Word, nu: &Word) -> WordProduct {
    if mu == nu {
        WordProduct::Equal
    } else if let Some(gamma) = nu.strip_prefix(mu) {
        WordProduct::RightExtends(gamma)
    } else if let Some(gamma) = mu.strip_prefix(nu) {
        WordProduct::LeftExtends(gamma)
    } else {
        WordProduct::Orthogonal
    }
}

fn term_product(space: &LabeledSpace, x: &CanonicalTerm, y: &CanonicalTerm) -> Result<Option<CanonicalTerm>> {
    let g = space.graph();
    match word_product(&x.right, &y.left) {
        WordProduct::Equal => canonicalize(space, &x.left, &x.mid.intersection(&y.mid), &y.right),
        WordProduct::RightExtends(gamma) => {
            let mid = g.relative_range(&x.mid, &gamma).intersection(&y.mid);
            canonicalize(space, &x.left.concat(&gamma), &mid, &y.right)
        }
        WordProduct::LeftExtends(gamma) => {
            let mid = x.mid.intersection(&g.relative_range(&y.mid, &gamma));
            canonicalize(space, &x.left, &mid, &y.right.concat(&gamma))
        }
        WordProduct::Orthogonal => Ok(None),
    }
}

/// Product of two canonical terms: zero or a single term with coefficient 1.
/// The space must be weakly left-resolving.
pub fn star_product(space: &LabeledSpace, x: &CanonicalTerm, y: &CanonicalTerm) -> Result<AlgebraElement> {
    space.require_wlr()?;
    Ok(term_product(space, x, y)?.map(AlgebraElement::from).unwrap_or_default())
}

/// Bilinear extension of [`star_product`].
pub fn multiply(space: &LabeledSpace, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    space.require_wlr()?;
    let mut out = AlgebraElement::zero();
    for (s, c) in x.iter() {
        for (t, d) in y.iter() {
            if let Some(p) = term_product(space, s, t)? {
                out.add_term(p, c * d);
            }
        }
    }
    Ok(out)
}

pub fn adjoint(e: &AlgebraElement) -> AlgebraElement {
    e.adjoint()
}

/// `p_A` as an element; `p_∅ = 0`.
pub fn projection(space: &LabeledSpace, a: &VertexSet) -> Result<AlgebraElement> {
    if a.is_empty() {
        return Ok(AlgebraElement::zero());
    }
    space.require_member(a)?;
    let e = Word::empty();
    Ok(canonicalize(space, &e, a, &e)?
        .map(AlgebraElement::from)
        .unwrap_or_default())
}

/// `p_A + p_B − p_{A∩B}`, which equals `p_{A∪B}` in the algebra.
pub fn projection_sum(space: &LabeledSpace, a: &VertexSet, b: &VertexSet) -> Result<AlgebraElement> {
    let (meet, join) = (a.intersection(b), a.union(b));
    for s in [a, b, &meet, &join] {
        if !s.is_empty() {
            space.require_member(s)?;
        }
    }
    let sum = &projection(space, a)? + &projection(space, b)?;
    Ok(&sum - &projection(space, &meet)?)
}

/// `Σ_{a ∈ L(AE¹)} s_a p_{r(A,a)} s_a*` for a member `A` without sinks.
pub fn expand_nonsink(space: &LabeledSpace, a: &VertexSet) -> Result<AlgebraElement> {
    let g = space.graph();
    space.require_member(a)?;
    if !a.is_disjoint(&g.sinks()) {
        return Err(Error::ContainsSink(space.format_set(a)));
    }
    let mut out = AlgebraElement::zero();
    for label in g.out_labels(a) {
        let w = Word::letter(label);
        let range = g.step(a, label);
        space.require_member(&range)?;
        if let Some(t) = canonicalize(space, &w, &range, &w)? {
            out.add_term(t, Rational::one());
        }
    }
    Ok(out)
}

/// Rewrites elements of an acyclic normal space into sums of terms whose
/// middle sets are minimal sink sets.
#[derive(Debug, Clone)]
pub struct SinkExpander<'a> {
    space: &'a LabeledSpace,
    sinks: VertexSet,
    blocks: Vec<VertexSet>,
}

impl<'a> SinkExpander<'a> {
    pub fn new(space: &'a LabeledSpace) -> Result<Self> {
        if !space.graph().is_acyclic() {
            return Err(Error::Cyclic);
        }
        if !space.is_normal() {
            return Err(Error::NotNormal(normal_failure(space)));
        }
        let blocks = minimal_sink_sets(space)?;
        Ok(Self {
            space,
            sinks: space.graph().sinks(),
            blocks,
        })
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn expand(&self, e: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (t, c) in e.iter() {
            self.expand_term(t, *c, &mut out)?;
        }
        Ok(out)
    }

    // Sink part first, then one letter of the non-sink part; recursion depth is
    // bounded by the longest path.
    fn expand_term(&self, t: &CanonicalTerm, c: Rational, out: &mut AlgebraElement) -> Result<()> {
        let g = self.space.graph();
        let sink_part = t.mid.intersection(&self.sinks);
        for v in self.blocks.iter().filter(|v| v.is_subset(&sink_part)) {
            if let Some(s) = canonicalize(self.space, &t.left, v, &t.right)? {
                out.add_term(s, c);
            }
        }
        let rest = t.mid.difference(&self.sinks);
        for label in g.out_labels(&rest) {
            let range = g.step(&rest, label);
            let (left, right) = (t.left.appended(label), t.right.appended(label));
            if let Some(s) = canonicalize(self.space, &left, &range, &right)? {
                self.expand_term(&s, c, out)?;
            }
        }
        Ok(())
    }
}

pub(crate) fn normal_failure(space: &LabeledSpace) -> String {
    let r = space.report();
    let g = space.graph();
    match (r.accommodating.witness(), r.non_degenerate.witness()) {
        (Some(w), _) => format!("not accommodating: {}", w.describe(g)),
        (None, Some(w)) => format!("not closed under relative complements: {}", w.describe(g)),
        (None, None) => "normal".into(),
    }
}

pub fn expand_to_sinks(space: &LabeledSpace, e: &AlgebraElement) -> Result<AlgebraElement> {
    SinkExpander::new(space)?.expand(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityMode {
    /// Compare coefficient maps.
    Raw,
    /// Compare sink expansions.
    ModuloRelations,
}

/// Equality of elements. Modulo relations needs an acyclic normal space with
/// its sinks in the family; otherwise unequal coefficient maps are reported as
/// [`Error::SymbolicallyUndecided`].
pub fn equals(space: &LabeledSpace, x: &AlgebraElement, y: &AlgebraElement, mode: EqualityMode) -> Result<bool> {
    if x == y {
        return Ok(true);
    }
    match mode {
        EqualityMode::Raw => Ok(false),
        EqualityMode::ModuloRelations => {
            if !space.graph().is_acyclic() {
                return Err(Error::SymbolicallyUndecided);
            }
            let expander = SinkExpander::new(space)?;
            Ok(expander.expand(x)? == expander.expand(y)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::text::{format_element, parse_term};

    fn set(space: &LabeledSpace, names: &[&str]) -> VertexSet {
        space.graph().vertex_set(names.iter().copied()).unwrap()
    }

    fn word(space: &LabeledSpace, w: &str) -> Word {
        space.graph().parse_word(w).unwrap()
    }

    fn el(space: &LabeledSpace, text: &str) -> AlgebraElement {
        parse_term(space, text).unwrap()
    }

    fn show(space: &LabeledSpace, e: &AlgebraElement) -> String {
        format_element(space.graph(), e)
    }

    #[test]
    fn canonicalize_cases() {
        let space = fixtures::forked_path_normal();
        let t = canonicalize(
            &space,
            &Word::empty(),
            &set(&space, &["v", "w", "x"]),
            &word(&space, "a"),
        )
        .unwrap()
        .unwrap();
        assert_eq!(
            (t.left(), t.mid(), t.right()),
            (&Word::empty(), &set(&space, &["v", "w"]), &word(&space, "a"))
        );

        assert_eq!(
            canonicalize(&space, &word(&space, "a"), &set(&space, &["x"]), &Word::empty()).unwrap(),
            None
        );

        let a = set(&space, &["w", "x"]);
        let t = canonicalize(&space, &Word::empty(), &a, &Word::empty())
            .unwrap()
            .unwrap();
        assert_eq!(t.mid(), &a);

        let coarse = fixtures::looped_exit_coarse();
        assert!(matches!(
            canonicalize(&coarse, &Word::empty(), &set(&coarse, &["u"]), &Word::empty()),
            Err(Error::NotInFamily(_))
        ));
    }

    #[test]
    fn word_product_cases() {
        let space = fixtures::forked_path_normal();
        let w = |s| word(&space, s);
        assert_eq!(word_product(&w("ab"), &w("ab")), WordProduct::Equal);
        assert_eq!(word_product(&w("a"), &w("ab")), WordProduct::RightExtends(w("b")));
        assert_eq!(word_product(&w("ab"), &w("a")), WordProduct::LeftExtends(w("b")));
        assert_eq!(word_product(&w("a"), &w("b")), WordProduct::Orthogonal);
    }

    #[test]
    fn products_on_the_loop_graph() {
        let fine = fixtures::looped_exit_fine();
        let p = multiply(&fine, &el(&fine, "s[aa] p{u} s*[a]"), &el(&fine, "s[a] p{u}")).unwrap();
        assert_eq!(show(&fine, &p), "s[aa] p{u}");
        let p = multiply(&fine, &el(&fine, "s[a] p{u} s*[a]"), &el(&fine, "s[a] p{v} s*[a]")).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn matrix_unit_product() {
        let space = fixtures::forked_path_normal();
        let p = multiply(&space, &el(&space, "s[ab] p{x} s*[b]"), &el(&space, "s[b] p{x}")).unwrap();
        assert_eq!(show(&space, &p), "s[ab] p{x}");
    }

    #[test]
    fn product_requires_wlr() {
        let split = fixtures::joined_path_split();
        let x = el(&split, "p{v}");
        assert!(matches!(
            multiply(&split, &x, &x),
            Err(Error::NotWeaklyLeftResolving(_))
        ));
    }

    #[test]
    fn adjoints() {
        let space = fixtures::forked_path_normal();
        assert_eq!(
            show(&space, &el(&space, "s[ab] p{x} s*[b]").adjoint()),
            "s[b] p{x} s*[ab]"
        );
        assert_eq!(el(&space, "p{v,w}").adjoint(), el(&space, "p{v,w}"));
        assert!(adjoint(&AlgebraElement::zero()).is_zero());
    }

    #[test]
    fn projection_sums() {
        let fine = fixtures::looped_exit_fine();
        let e = projection_sum(&fine, &set(&fine, &["u"]), &set(&fine, &["v"])).unwrap();
        assert_eq!(show(&fine, &e), "p{u} + p{v}");
        let a = set(&fine, &["u", "v"]);
        assert_eq!(projection_sum(&fine, &a, &a).unwrap(), projection(&fine, &a).unwrap());

        let coarse = fixtures::looped_exit_coarse();
        assert!(projection_sum(&coarse, &set(&coarse, &["u"]), &set(&coarse, &["v"])).is_err());
    }

    #[test]
    fn nonsink_expansion() {
        let space = fixtures::forked_path_normal();
        assert_eq!(
            show(&space, &expand_nonsink(&space, &set(&space, &["w"])).unwrap()),
            "s[b] p{x} s*[b]"
        );

        let coarse = fixtures::looped_exit_coarse();
        assert!(matches!(
            expand_nonsink(&coarse, &set(&coarse, &["u", "v"])),
            Err(Error::ContainsSink(_))
        ));

        let fine = fixtures::looped_exit_fine();
        assert_eq!(
            show(&fine, &expand_nonsink(&fine, &set(&fine, &["u"])).unwrap()),
            "s[a] p{u,v} s*[a]"
        );
    }

    #[test]
    fn sink_expansion() {
        let space = fixtures::forked_path_normal();
        let e = expand_to_sinks(&space, &el(&space, "p{v,w,x}")).unwrap();
        assert_eq!(show(&space, &e), "p{v} + p{x} + s[b] p{x} s*[b]");

        let e = expand_to_sinks(&space, &el(&space, "p{v,w} s*[a]")).unwrap();
        assert_eq!(show(&space, &e), "p{v} s*[a] + s[b] p{x} s*[ab]");

        for v in ["p{v}", "s[a] p{v} s*[a]", "s[ab] p{x}"] {
            assert_eq!(expand_to_sinks(&space, &el(&space, v)).unwrap(), el(&space, v));
        }

        let fine = fixtures::looped_exit_fine();
        assert_eq!(expand_to_sinks(&fine, &el(&fine, "p{v}")), Err(Error::Cyclic));
        assert!(matches!(
            expand_to_sinks(&fixtures::joined_path_listed(), &AlgebraElement::zero()),
            Err(Error::NotNormal(_))
        ));
    }

    #[test]
    fn equality_modes() {
        let space = fixtures::forked_path_normal();
        let eq = |x: &str, y: &str, mode| equals(&space, &el(&space, x), &el(&space, y), mode).unwrap();
        assert!(eq("p{v,w,x}", "p{v,w} + p{x}", EqualityMode::ModuloRelations));
        assert!(!eq("p{v,w}", "p{v} + p{w}", EqualityMode::Raw));
        assert!(eq("p{v,w}", "p{v} + p{w}", EqualityMode::ModuloRelations));
        assert!(!eq("p{v}", "p{x}", EqualityMode::ModuloRelations));

        // p_A minus its one-letter expansion vanishes for a sink-free A.
        let a = set(&space, &["w"]);
        let diff = &projection(&space, &a).unwrap() - &expand_nonsink(&space, &a).unwrap();
        assert!(equals(&space, &diff, &AlgebraElement::zero(), EqualityMode::ModuloRelations).unwrap());

        let fine = fixtures::looped_exit_fine();
        assert_eq!(
            equals(
                &fine,
                &el(&fine, "p{u,v}"),
                &el(&fine, "p{u} + p{v}"),
                EqualityMode::ModuloRelations
            ),
            Err(Error::SymbolicallyUndecided)
        );
    }
}
