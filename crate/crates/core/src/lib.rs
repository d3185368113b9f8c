//! Symbolic computation for labeled graph C*-algebras.
//!
//! The crate works with a finite labeled graph together with a family `B` of
//! vertex subsets (a *labeled space*). It checks the labeled-space axioms,
//! computes closures, hereditary families and minimal sink sets, multiplies
//! canonical spanning terms `s_μ p_A s_ν*`, and for acyclic graphs produces the
//! decomposition into full matrix algebras together with an explicit exact
//! representation that certifies every symbolic computation.
//!
//! ```
//! use labgraph::{fixtures, decompose::decompose};
//!
//! let space = fixtures::forked_path_normal();
//! let dec = decompose(&space).unwrap();
//! assert_eq!(dec.sizes(), vec![2, 3]);
//! assert_eq!(dec.dimension(), 13);
//! ```

pub mod decompose;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod hereditary;
pub mod rep;
pub mod set;
pub mod space;
pub mod term;
pub mod text;

pub use error::{Error, Result};
pub use graph::{Edge, LabeledGraph, Symbol, Word};
pub use set::VertexSet;
pub use space::{LabeledSpace, SetFamily};
pub use term::{AlgebraElement, CanonicalTerm, Rational};

/// Outcome of a check that names a concrete counterexample when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(W) -> U) -> Verdict<U> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
        }
    }
}
