//! Set families over a labeled graph, their closures, and the labeled-space
//! axioms.
//!
//! Range closure and weak left-resolution are checked on single letters only.
//! That is enough: once `B` is closed under one-letter relative ranges,
//! `r(A, αa) = r(r(A, α), a)` carries both properties to every word.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Symbol};
use crate::set::VertexSet;
use crate::Verdict;

pub const DEFAULT_CLOSURE_CAP: usize = 4096;

/// A finite, deduplicated, canonically ordered collection of vertex sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SetFamily {
    members: BTreeSet<VertexSet>,
}

impl SetFamily {
    /// Fails only for the degenerate family `{∅}`.
    pub fn new(sets: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let members: BTreeSet<_> = sets.into_iter().collect();
        if members.len() == 1 && members.first().is_some_and(VertexSet::is_empty) {
            return Err(Error::OnlyEmptySet);
        }
        Ok(Self { members })
    }

    /// The family with no members.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn contains(&self, set: &VertexSet) -> bool {
        self.members.contains(set)
    }

    pub fn contains_empty(&self) -> bool {
        self.members.contains(&VertexSet::new())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &VertexSet> + ExactSizeIterator {
        self.members.iter()
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &SetFamily) -> SetFamily {
        Self {
            members: self.members.union(&other.members).cloned().collect(),
        }
    }

    /// One set per line, `{}` for the empty set.
    pub fn render(&self, g: &LabeledGraph) -> String {
        let mut out = String::new();
        for m in &self.members {
            let _ = writeln!(out, "{}", g.format_set(m));
        }
        out
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a VertexSet;
    type IntoIter = std::collections::btree_set::Iter<'a, VertexSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureMode {
    /// Ranges, relative ranges, intersections and unions.
    Accommodating,
    /// Accommodating plus relative complements.
    Normal,
}

struct Closer {
    seen: HashSet<VertexSet>,
    list: Vec<VertexSet>,
    cap: usize,
}

impl Closer {
    fn push(&mut self, set: VertexSet) -> Result<()> {
        if !self.seen.contains(&set) {
            if self.list.len() >= self.cap {
                return Err(Error::ClosureCapExceeded { cap: self.cap });
            }
            self.seen.insert(set.clone());
            self.list.push(set);
        }
        Ok(())
    }
}

/// Least family containing `seeds` and every `r(a)`, closed under one-letter
/// relative ranges, binary intersections and unions, and (in normal mode)
/// relative complements. Fails once more than `cap` sets are produced.
pub fn closure(g: &LabeledGraph, seeds: &SetFamily, mode: ClosureMode, cap: usize) -> Result<SetFamily> {
    let mut c = Closer {
        seen: HashSet::new(),
        list: Vec::new(),
        cap,
    };
    for s in seeds {
        c.push(s.clone())?;
    }
    for a in g.symbols() {
        c.push(g.letter_range(a))?;
    }
    // Each new member is combined with every member before it exactly once.
    let mut i = 0;
    while i < c.list.len() {
        let x = c.list[i].clone();
        for a in g.symbols() {
            c.push(g.step(&x, a))?;
        }
        for j in 0..=i {
            let y = c.list[j].clone();
            c.push(x.intersection(&y))?;
            c.push(x.union(&y))?;
            if mode == ClosureMode::Normal {
                c.push(x.difference(&y))?;
                c.push(y.difference(&x))?;
            }
        }
        i += 1;
    }
    Ok(SetFamily {
        members: c.list.into_iter().collect(),
    })
}

pub fn accommodating_closure(g: &LabeledGraph, seeds: &SetFamily) -> Result<SetFamily> {
    closure(g, seeds, ClosureMode::Accommodating, DEFAULT_CLOSURE_CAP)
}

pub fn normal_closure(g: &LabeledGraph, seeds: &SetFamily) -> Result<SetFamily> {
    closure(g, seeds, ClosureMode::Normal, DEFAULT_CLOSURE_CAP)
}

/// Which accommodating clause fails, and the set that should be a member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AccommodatingViolation {
    WordRange {
        label: Symbol,
        range: VertexSet,
    },
    RelativeRange {
        set: VertexSet,
        label: Symbol,
        range: VertexSet,
    },
    Intersection {
        a: VertexSet,
        b: VertexSet,
        result: VertexSet,
    },
    Union {
        a: VertexSet,
        b: VertexSet,
        result: VertexSet,
    },
}

impl AccommodatingViolation {
    pub fn missing(&self) -> &VertexSet {
        match self {
            Self::WordRange { range, .. } | Self::RelativeRange { range, .. } => range,
            Self::Intersection { result, .. } | Self::Union { result, .. } => result,
        }
    }

    pub fn describe(&self, g: &LabeledGraph) -> String {
        let s = |x: &VertexSet| g.format_set(x);
        match self {
            Self::WordRange { label, range } => {
                format!("r({}) = {} is missing", g.symbol_name(*label), s(range))
            }
            Self::RelativeRange { set, label, range } => {
                format!("r({}, {}) = {} is missing", s(set), g.symbol_name(*label), s(range))
            }
            Self::Intersection { a, b, result } => {
                format!("{} ∩ {} = {} is missing", s(a), s(b), s(result))
            }
            Self::Union { a, b, result } => {
                format!("{} ∪ {} = {} is missing", s(a), s(b), s(result))
            }
        }
    }
}

/// `a ∖ b` is not a member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementViolation {
    pub a: VertexSet,
    pub b: VertexSet,
    pub missing: VertexSet,
}

impl ComplementViolation {
    pub fn describe(&self, g: &LabeledGraph) -> String {
        format!(
            "{} ∖ {} = {} is missing",
            g.format_set(&self.a),
            g.format_set(&self.b),
            g.format_set(&self.missing)
        )
    }
}

/// `r(a ∩ b, label) ≠ r(a, label) ∩ r(b, label)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WlrViolation {
    pub a: VertexSet,
    pub b: VertexSet,
    pub label: Symbol,
}

impl WlrViolation {
    pub fn describe(&self, g: &LabeledGraph) -> String {
        let l = g.symbol_name(self.label);
        let meet = g.step(&self.a.intersection(&self.b), self.label);
        let sides = g.step(&self.a, self.label).intersection(&g.step(&self.b, self.label));
        format!(
            "r({} ∩ {}, {l}) = {} but r({}, {l}) ∩ r({}, {l}) = {}",
            g.format_set(&self.a),
            g.format_set(&self.b),
            g.format_set(&meet),
            g.format_set(&self.a),
            g.format_set(&self.b),
            g.format_set(&sides)
        )
    }
}

/// Why weak left-resolution does not hold, as reported by [`SpaceReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WlrFailure {
    Identity(WlrViolation),
    NotRangeClosed(AccommodatingViolation),
}

impl WlrFailure {
    pub fn describe(&self, g: &LabeledGraph) -> String {
        match self {
            Self::Identity(v) => v.describe(g),
            Self::NotRangeClosed(v) => format!("not range closed: {}", v.describe(g)),
        }
    }
}

/// All axiom checks for one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceReport {
    pub accommodating: Verdict<AccommodatingViolation>,
    pub weakly_left_resolving: Verdict<WlrFailure>,
    pub non_degenerate: Verdict<ComplementViolation>,
    pub normal: bool,
    pub sinks_in_family: bool,
    pub left_resolving_graph: Verdict<(usize, Symbol)>,
    pub acyclic_graph: bool,
}

impl SpaceReport {
    /// Every field holds.
    pub fn all_hold(&self) -> bool {
        self.accommodating.holds()
            && self.weakly_left_resolving.holds()
            && self.non_degenerate.holds()
            && self.normal
            && self.sinks_in_family
            && self.left_resolving_graph.holds()
            && self.acyclic_graph
    }

    pub fn render(&self, g: &LabeledGraph) -> String {
        fn line<W>(out: &mut String, name: &str, v: &Verdict<W>, describe: impl Fn(&W) -> String) {
            match v {
                Verdict::Holds => {
                    let _ = writeln!(out, "{name}: yes");
                }
                Verdict::Fails(w) => {
                    let _ = writeln!(out, "{name}: no ({})", describe(w));
                }
            }
        }
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let mut out = String::new();
        line(&mut out, "accommodating", &self.accommodating, |w| w.describe(g));
        line(&mut out, "weakly_left_resolving", &self.weakly_left_resolving, |w| {
            w.describe(g)
        });
        line(&mut out, "non_degenerate", &self.non_degenerate, |w| w.describe(g));
        let _ = writeln!(out, "normal: {}", yes_no(self.normal));
        let _ = writeln!(out, "sinks_in_family: {}", yes_no(self.sinks_in_family));
        line(
            &mut out,
            "left_resolving_graph",
            &self.left_resolving_graph,
            |(v, a)| format!("two edges labeled {} end at {}", g.symbol_name(*a), g.vertex_name(*v)),
        );
        let _ = writeln!(out, "acyclic_graph: {}", yes_no(self.acyclic_graph));
        out
    }
}

/// A labeled graph together with a family `B` of vertex sets.
///
/// Construction does not require the axioms to hold; [`report`](Self::report)
/// says which ones do and is computed once.
#[derive(Debug)]
pub struct LabeledSpace {
    graph: LabeledGraph,
    family: SetFamily,
    report: OnceLock<SpaceReport>,
}

impl Clone for LabeledSpace {
    fn clone(&self) -> Self {
        Self {
            graph: self.graph.clone(),
            family: self.family.clone(),
            report: self.report.clone(),
        }
    }
}

impl LabeledSpace {
    pub fn new(graph: LabeledGraph, family: SetFamily) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if let Some(v) = family
            .iter()
            .flat_map(|s| s.iter())
            .find(|&v| v >= graph.vertex_count())
        {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
        Ok(Self {
            graph,
            family,
            report: OnceLock::new(),
        })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn contains(&self, set: &VertexSet) -> bool {
        self.family.contains(set)
    }

    pub fn format_set(&self, set: &VertexSet) -> String {
        self.graph.format_set(set)
    }

    /// First missing relative range `r(A, a)`, if any.
    pub fn range_closure(&self) -> Verdict<AccommodatingViolation> {
        for set in &self.family {
            for label in self.graph.symbols() {
                let range = self.graph.step(set, label);
                if !self.family.contains(&range) {
                    return Verdict::Fails(AccommodatingViolation::RelativeRange {
                        set: set.clone(),
                        label,
                        range,
                    });
                }
            }
        }
        Verdict::Holds
    }

    pub fn accommodating(&self) -> Verdict<AccommodatingViolation> {
        let g = &self.graph;
        for label in g.symbols() {
            let range = g.letter_range(label);
            if !self.family.contains(&range) {
                return Verdict::Fails(AccommodatingViolation::WordRange { label, range });
            }
        }
        if let Verdict::Fails(v) = self.range_closure() {
            return Verdict::Fails(v);
        }
        for (i, a) in self.family.iter().enumerate() {
            for b in self.family.iter().skip(i + 1) {
                let meet = a.intersection(b);
                if !self.family.contains(&meet) {
                    return Verdict::Fails(AccommodatingViolation::Intersection {
                        a: a.clone(),
                        b: b.clone(),
                        result: meet,
                    });
                }
                let join = a.union(b);
                if !self.family.contains(&join) {
                    return Verdict::Fails(AccommodatingViolation::Union {
                        a: a.clone(),
                        b: b.clone(),
                        result: join,
                    });
                }
            }
        }
        Verdict::Holds
    }

    pub fn is_accommodating(&self) -> bool {
        self.accommodating().holds()
    }

    /// Closure under relative complements.
    pub fn non_degenerate(&self) -> Verdict<ComplementViolation> {
        for a in &self.family {
            for b in &self.family {
                let missing = a.difference(b);
                if !self.family.contains(&missing) {
                    return Verdict::Fails(ComplementViolation {
                        a: a.clone(),
                        b: b.clone(),
                        missing,
                    });
                }
            }
        }
        Verdict::Holds
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.non_degenerate().holds()
    }

    pub fn is_normal(&self) -> bool {
        self.report().normal
    }

    /// Checks `r(A ∩ B, a) = r(A, a) ∩ r(B, a)` over all member pairs and
    /// letters. Errors when the family is not closed under relative ranges.
    pub fn weakly_left_resolving(&self) -> Result<Verdict<WlrViolation>> {
        if let Verdict::Fails(v) = self.range_closure() {
            let AccommodatingViolation::RelativeRange { set, label, range } = v else {
                unreachable!()
            };
            return Err(Error::NotRangeClosed {
                set: self.format_set(&set),
                label: self.graph.symbol_name(label).to_owned(),
                range: self.format_set(&range),
            });
        }
        let g = &self.graph;
        for (i, a) in self.family.iter().enumerate() {
            for b in self.family.iter().skip(i + 1) {
                let meet = a.intersection(b);
                for label in g.symbols() {
                    let lhs = g.step(&meet, label);
                    let rhs = g.step(a, label).intersection(&g.step(b, label));
                    if lhs != rhs {
                        return Ok(Verdict::Fails(WlrViolation {
                            a: a.clone(),
                            b: b.clone(),
                            label,
                        }));
                    }
                }
            }
        }
        Ok(Verdict::Holds)
    }

    pub fn is_weakly_left_resolving(&self) -> bool {
        self.report().weakly_left_resolving.holds()
    }

    pub fn sinks_in_family(&self) -> bool {
        self.family.contains(&self.graph.sinks())
    }

    /// Every axiom check, computed on first use.
    pub fn report(&self) -> &SpaceReport {
        self.report.get_or_init(|| {
            let accommodating = self.accommodating();
            let non_degenerate = self.non_degenerate();
            let weakly_left_resolving = match self.range_closure() {
                Verdict::Fails(v) => Verdict::Fails(WlrFailure::NotRangeClosed(v)),
                Verdict::Holds => self
                    .weakly_left_resolving()
                    .expect("range closure checked")
                    .map(WlrFailure::Identity),
            };
            SpaceReport {
                normal: accommodating.holds() && non_degenerate.holds(),
                accommodating,
                weakly_left_resolving,
                non_degenerate,
                sinks_in_family: self.sinks_in_family(),
                left_resolving_graph: self.graph.left_resolving(),
                acyclic_graph: self.graph.is_acyclic(),
            }
        })
    }

    /// Errors unless the space is weakly left-resolving.
    pub(crate) fn require_wlr(&self) -> Result<()> {
        match &self.report().weakly_left_resolving {
            Verdict::Holds => Ok(()),
            Verdict::Fails(w) => Err(Error::NotWeaklyLeftResolving(w.describe(&self.graph))),
        }
    }

    pub(crate) fn require_member(&self, set: &VertexSet) -> Result<()> {
        if self.family.contains(set) {
            Ok(())
        } else {
            Err(Error::NotInFamily(self.format_set(set)))
        }
    }
}

/// Free-function form of [`LabeledSpace::report`].
pub fn validate_space(space: &LabeledSpace) -> SpaceReport {
    space.report().clone()
}
