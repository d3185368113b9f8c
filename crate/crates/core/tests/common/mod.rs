//! Shared random corpus for the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use labgraph::space::{closure, ClosureMode, SetFamily, DEFAULT_CLOSURE_CAP};
use labgraph::{Error, LabeledGraph, LabeledSpace, VertexSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const LABELS: [&str; 3] = ["a", "b", "c"];

/// Random acyclic graph: at most 6 vertices, 8 edges and 3 labels. Edges only
/// go from lower to higher vertex index.
pub fn random_acyclic_graph<R: Rng>(rng: &mut R) -> LabeledGraph {
    let n = rng.random_range(2..=6);
    let labels = rng.random_range(1..=3);
    let edge_count = rng.random_range(1..=8);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for _ in 0..edge_count {
        let s = rng.random_range(0..n - 1);
        let t = rng.random_range(s + 1..n);
        let l = LABELS[rng.random_range(0..labels)];
        edges.push((names[s].clone(), l.to_owned(), names[t].clone()));
    }
    LabeledGraph::new(
        names.iter().map(String::as_str),
        edges.iter().map(|(s, l, t)| (s.as_str(), l.as_str(), t.as_str())),
    )
    .expect("generated graph is well formed")
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> VertexSet {
    (0..n).filter(|_| rng.random_bool(0.4)).collect()
}

/// A space in the corpus with the seeds its family was closed from.
pub struct Fixture {
    pub seed: u64,
    pub space: LabeledSpace,
    pub seeds: SetFamily,
}

/// Normal closure of the sinks plus up to two random sets. `None` when the
/// closure exceeds the cap or the result is not weakly left-resolving.
pub fn fixture(seed: u64) -> Option<Fixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_acyclic_graph(&mut rng);
    let mut seeds = vec![g.sinks()];
    for _ in 0..rng.random_range(0..=2) {
        let s = random_subset(&mut rng, g.vertex_count());
        if !s.is_empty() {
            seeds.push(s);
        }
    }
    let seeds = SetFamily::new(seeds).unwrap();
    let family = match closure(&g, &seeds, ClosureMode::Normal, DEFAULT_CLOSURE_CAP) {
        Ok(f) => f,
        Err(Error::ClosureCapExceeded { .. }) => return None,
        Err(e) => panic!("closure failed: {e}"),
    };
    let space = LabeledSpace::new(g, family).unwrap();
    space
        .is_weakly_left_resolving()
        .then_some(Fixture { seed, space, seeds })
}

/// The first `count` admissible fixtures, scanning seeds from 0.
pub fn corpus(count: usize) -> Vec<Fixture> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count {
        if let Some(f) = fixture(seed) {
            out.push(f);
        }
        seed += 1;
        assert!(seed < 100_000, "too few admissible graphs");
    }
    out
}

/// Graphs only, for suites that do not need a family.
pub fn graphs(count: usize) -> Vec<LabeledGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..count).map(|_| random_acyclic_graph(&mut rng)).collect()
}

/// Brute-force word ranges: follows every path from every vertex and records
/// the label string and end vertex. Uses nothing but the edge list.
pub fn path_ranges(g: &LabeledGraph) -> BTreeMap<Vec<String>, BTreeSet<usize>> {
    let mut out: BTreeMap<Vec<String>, BTreeSet<usize>> = BTreeMap::new();
    let mut stack: Vec<(usize, Vec<String>)> = (0..g.vertex_count()).map(|v| (v, Vec::new())).collect();
    while let Some((v, word)) = stack.pop() {
        for e in g.edges().iter().filter(|e| e.source == v) {
            let mut next = word.clone();
            next.push(g.symbol_name(e.label).to_owned());
            out.entry(next.clone()).or_default().insert(e.target);
            stack.push((e.target, next));
        }
    }
    out
}

/// Number of distinct path labels whose range contains `v`.
pub fn brute_force_n(g: &LabeledGraph, v: &VertexSet) -> usize {
    path_ranges(g)
        .values()
        .filter(|range| v.iter().all(|x| range.contains(&x)))
        .count()
}
