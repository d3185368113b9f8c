//! Decomposition of the algebra of a finite acyclic normal labeled space into
//! full matrix algebras, one block per minimal sink set.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Word};
use crate::hereditary::{is_minimal_sinks_set, minimal_sink_sets};
use crate::set::VertexSet;
use crate::space::LabeledSpace;
use crate::term::normal_failure;

/// One matrix block: the sink set `V` and its word basis `{ε} ∪ {α : r(α) ⊇ V}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub sinks: VertexSet,
    pub basis: Vec<Word>,
}

impl Block {
    /// `n_V + 1`.
    pub fn size(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
}

impl Decomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::size).collect()
    }

    /// Total dimension `Σ size²`.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.size() * b.size()).sum()
    }

    /// Side length of the representing matrices, `Σ size`.
    pub fn rep_dimension(&self) -> usize {
        self.blocks.iter().map(Block::size).sum()
    }

    /// `M_2 @ {v} ⊕ M_3 @ {x}`.
    pub fn summary(&self, g: &LabeledGraph) -> String {
        self.blocks
            .iter()
            .map(|b| format!("M_{} @ {}", b.size(), g.format_set(&b.sinks)))
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }

    /// Summary line, one line per block, and the total dimension.
    pub fn render(&self, g: &LabeledGraph) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.summary(g));
        for b in &self.blocks {
            let basis: Vec<String> = b.basis.iter().map(|w| g.word_label(w)).collect();
            let _ = writeln!(
                out,
                "M_{} @ sinks={} basis=[{}]",
                b.size(),
                g.format_set(&b.sinks),
                basis.join(",")
            );
        }
        let _ = writeln!(out, "dim = {}", self.dimension());
        out
    }
}

fn basis_for(g: &LabeledGraph, words: &[Word], v: &VertexSet) -> Result<Vec<Word>> {
    let mut basis = vec![Word::empty()];
    for w in words {
        if v.is_subset(&g.range_of_word(w)?) {
            basis.push(w.clone());
        }
    }
    Ok(basis)
}

/// Word basis of the block for a minimal sink set `v`, ε first.
pub fn block_words(space: &LabeledSpace, v: &VertexSet) -> Result<Vec<Word>> {
    if !is_minimal_sinks_set(space, v) {
        return Err(Error::NotMinimalSinksSet(space.format_set(v)));
    }
    let g = space.graph();
    basis_for(g, &g.enumerate_words(None)?, v)
}

/// Checks, in order: acyclic graph, sinks in the family, normality, weak
/// left-resolution; then builds one block per minimal sink set.
pub fn decompose(space: &LabeledSpace) -> Result<Decomposition> {
    let g = space.graph();
    if !g.is_acyclic() {
        return Err(Error::Cyclic);
    }
    if !space.sinks_in_family() {
        return Err(Error::SinksNotInFamily);
    }
    if !space.is_normal() {
        return Err(Error::NotNormal(normal_failure(space)));
    }
    space.require_wlr()?;
    let words = g.enumerate_words(None)?;
    let blocks = minimal_sink_sets(space)?
        .into_iter()
        .map(|v| {
            Ok(Block {
                basis: basis_for(g, &words, &v)?,
                sinks: v,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Decomposition { blocks })
}
