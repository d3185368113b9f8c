//! Hereditary subfamilies of `B`, the ideals they span, and minimal sink
//! sets.
//!
//! Hereditary families never contain ∅, so the range clause only asks for
//! *non-empty* relative ranges. Unions are required only when they already
//! lie in `B`; a union that falls outside `B` is recorded as a warning.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Symbol, Word};
use crate::set::VertexSet;
use crate::space::{LabeledSpace, SetFamily};
use crate::term::{canonicalize, CanonicalTerm};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HereditaryViolation {
    ContainsEmpty,
    NotInFamily(VertexSet),
    MissingSubset {
        set: VertexSet,
        subset: VertexSet,
    },
    MissingRange {
        set: VertexSet,
        label: Symbol,
        range: VertexSet,
    },
    MissingUnion {
        a: VertexSet,
        b: VertexSet,
        union: VertexSet,
    },
}

impl HereditaryViolation {
    pub fn describe(&self, space: &LabeledSpace) -> String {
        let s = |x: &VertexSet| space.format_set(x);
        match self {
            Self::ContainsEmpty => "contains the empty set".into(),
            Self::NotInFamily(a) => format!("{} is not a member of B", s(a)),
            Self::MissingSubset { set, subset } => {
                format!("{} ⊆ {} is in B but missing", s(subset), s(set))
            }
            Self::MissingRange { set, label, range } => format!(
                "r({}, {}) = {} is missing",
                s(set),
                space.graph().symbol_name(*label),
                s(range)
            ),
            Self::MissingUnion { a, b, union } => {
                format!("{} ∪ {} = {} is missing", s(a), s(b), s(union))
            }
        }
    }
}

/// A union of two members that is not in `B`, so could not be added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionOutsideFamily {
    pub a: VertexSet,
    pub b: VertexSet,
    pub union: VertexSet,
}

impl UnionOutsideFamily {
    pub fn describe(&self, g: &LabeledGraph) -> String {
        format!(
            "{} ∪ {} = {} is not in the family",
            g.format_set(&self.a),
            g.format_set(&self.b),
            g.format_set(&self.union)
        )
    }
}

/// A validated hereditary family over a particular space.
#[derive(Debug, Clone)]
pub struct HereditaryFamily<'a> {
    space: &'a LabeledSpace,
    members: SetFamily,
    warnings: Vec<UnionOutsideFamily>,
}

pub fn is_hereditary(space: &LabeledSpace, h: &SetFamily) -> Verdict<HereditaryViolation> {
    let g = space.graph();
    let b = space.family();
    if h.contains_empty() {
        return Verdict::Fails(HereditaryViolation::ContainsEmpty);
    }
    if let Some(a) = h.iter().find(|a| !b.contains(a)) {
        return Verdict::Fails(HereditaryViolation::NotInFamily(a.clone()));
    }
    for set in h {
        for subset in b {
            if !subset.is_empty() && subset.is_subset(set) && !h.contains(subset) {
                return Verdict::Fails(HereditaryViolation::MissingSubset {
                    set: set.clone(),
                    subset: subset.clone(),
                });
            }
        }
    }
    for set in h {
        for label in g.symbols() {
            let range = g.step(set, label);
            if !range.is_empty() && !h.contains(&range) {
                return Verdict::Fails(HereditaryViolation::MissingRange {
                    set: set.clone(),
                    label,
                    range,
                });
            }
        }
    }
    for (i, x) in h.iter().enumerate() {
        for y in h.iter().skip(i + 1) {
            let union = x.union(y);
            if b.contains(&union) && !h.contains(&union) {
                return Verdict::Fails(HereditaryViolation::MissingUnion {
                    a: x.clone(),
                    b: y.clone(),
                    union,
                });
            }
        }
    }
    Verdict::Holds
}

/// Least hereditary family containing `seeds`.
pub fn hereditary_closure<'a>(space: &'a LabeledSpace, seeds: &SetFamily) -> Result<HereditaryFamily<'a>> {
    let g = space.graph();
    let b = space.family();
    if seeds.is_empty() || seeds.contains_empty() {
        return Err(Error::EmptySeed);
    }
    let mut seen: BTreeSet<VertexSet> = BTreeSet::new();
    let mut list: Vec<VertexSet> = Vec::new();
    let mut warnings = Vec::new();
    for s in seeds {
        space.require_member(s)?;
        if seen.insert(s.clone()) {
            list.push(s.clone());
        }
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i].clone();
        let mut found = Vec::new();
        for label in g.symbols() {
            let range = g.step(&x, label);
            if range.is_empty() {
                continue;
            }
            if !b.contains(&range) {
                return Err(Error::NotRangeClosed {
                    set: space.format_set(&x),
                    label: g.symbol_name(label).to_owned(),
                    range: space.format_set(&range),
                });
            }
            found.push(range);
        }
        found.extend(b.iter().filter(|s| !s.is_empty() && s.is_subset(&x)).cloned());
        for y in &list[..i] {
            let union = x.union(y);
            if b.contains(&union) {
                found.push(union);
            } else {
                warnings.push(UnionOutsideFamily {
                    a: y.clone(),
                    b: x.clone(),
                    union,
                });
            }
        }
        for s in found {
            if seen.insert(s.clone()) {
                list.push(s);
            }
        }
        i += 1;
    }
    Ok(HereditaryFamily {
        space,
        members: SetFamily::new(list)?,
        warnings,
    })
}

impl<'a> HereditaryFamily<'a> {
    /// Validates `members` as a hereditary family of `space`.
    pub fn new(space: &'a LabeledSpace, members: SetFamily) -> Result<Self> {
        match is_hereditary(space, &members) {
            Verdict::Holds => Ok(Self {
                space,
                members,
                warnings: Vec::new(),
            }),
            Verdict::Fails(v) => Err(Error::NotHereditary(v.describe(space))),
        }
    }

    pub fn space(&self) -> &'a LabeledSpace {
        self.space
    }

    pub fn members(&self) -> &SetFamily {
        &self.members
    }

    pub fn warnings(&self) -> &[UnionOutsideFamily] {
        &self.warnings
    }

    /// For every label `a`: `s(a) ∈ H`, or `s(a)` misses every member of `H`.
    /// Fails with the first label for which neither holds.
    pub fn ideal_hypothesis(&self) -> Verdict<Symbol> {
        let g = self.space.graph();
        for label in g.symbols() {
            let source = g.letter_source(label);
            if self.members.contains(source) {
                continue;
            }
            if self.members.iter().all(|a| a.is_disjoint(source)) {
                continue;
            }
            return Verdict::Fails(label);
        }
        Verdict::Holds
    }

    /// The term lies in the ideal's spanning set: its middle set is in `H`.
    pub fn contains_term(&self, term: &CanonicalTerm) -> bool {
        self.members.contains(&term.mid)
    }

    /// All non-zero canonical terms `s_α p_A s_β*` with `A ∈ H`. Needs an
    /// acyclic graph so the word set is finite.
    pub fn spanning_terms(&self) -> Result<Vec<CanonicalTerm>> {
        let g = self.space.graph();
        if !g.is_acyclic() {
            return Err(Error::Cyclic);
        }
        let mut words = vec![Word::empty()];
        words.extend(g.enumerate_words(None)?);
        let mut out = BTreeSet::new();
        for alpha in &words {
            for beta in &words {
                for a in &self.members {
                    if let Some(t) = canonicalize(self.space, alpha, a, beta)? {
                        out.insert(t);
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }
}

pub fn check_ideal_hypothesis(h: &HereditaryFamily<'_>) -> Verdict<Symbol> {
    h.ideal_hypothesis()
}

/// `a ∈ B`, `a ≠ ∅`, `a` consists of sinks, and every member of `B` either
/// contains `a` or misses it.
pub fn is_minimal_sinks_set(space: &LabeledSpace, a: &VertexSet) -> bool {
    !a.is_empty()
        && space.contains(a)
        && a.is_subset(&space.graph().sinks())
        && space.family().iter().all(|b| a.is_subset(b) || a.is_disjoint(b))
}

/// For each sink `x`, the intersection `A_x` of all members containing `x`;
/// deduplicated and ordered by smallest vertex.
pub fn minimal_sink_sets(space: &LabeledSpace) -> Result<Vec<VertexSet>> {
    let sinks = space.graph().sinks();
    if sinks.is_empty() {
        return Err(Error::NoSinks);
    }
    if !space.sinks_in_family() {
        return Err(Error::SinksNotInFamily);
    }
    let mut out: Vec<VertexSet> = Vec::new();
    for x in sinks.iter() {
        if out.iter().any(|v| v.contains(x)) {
            continue;
        }
        let mut meet = sinks.clone();
        for b in space.family().iter().filter(|b| b.contains(x)) {
            meet = meet.intersection(b);
        }
        if !is_minimal_sinks_set(space, &meet) {
            return Err(Error::NotMinimalSinksSet(space.format_set(&meet)));
        }
        out.push(meet);
    }
    out.sort_by_key(|v| v.first());
    Ok(out)
}
