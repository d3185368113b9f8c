//! Small named labeled graphs and spaces used throughout the tests, the
//! documentation and the Python smoke test.

use crate::graph::LabeledGraph;
use crate::space::{normal_closure, LabeledSpace, SetFamily};

fn graph(vertices: &[&str], edges: &[(&str, &str, &str)]) -> LabeledGraph {
    LabeledGraph::new(vertices.iter().copied(), edges.iter().copied()).expect("fixture graph")
}

fn explicit(g: LabeledGraph, sets: &[&[&str]]) -> LabeledSpace {
    let family = SetFamily::new(sets.iter().map(|s| g.vertex_set(s.iter().copied()).unwrap())).expect("fixture family");
    LabeledSpace::new(g, family).expect("fixture space")
}

/// `u -a-> u`, `u -a-> v`: a loop at `u` with an exit to the sink `v`.
pub fn looped_exit() -> LabeledGraph {
    graph(&["u", "v"], &[("u", "a", "u"), ("u", "a", "v")])
}

/// [`looped_exit`] with the family `{{u,v}, ∅}`.
pub fn looped_exit_coarse() -> LabeledSpace {
    explicit(looped_exit(), &[&["u", "v"], &[]])
}

/// [`looped_exit`] with every subset of `{u,v}`.
pub fn looped_exit_fine() -> LabeledSpace {
    explicit(looped_exit(), &[&["u"], &["v"], &["u", "v"], &[]])
}

/// `u -a-> v`, `u -a-> w`, `w -b-> x`; sinks `v` and `x`.
pub fn forked_path() -> LabeledGraph {
    graph(
        &["u", "v", "w", "x"],
        &[("u", "a", "v"), ("u", "a", "w"), ("w", "b", "x")],
    )
}

/// [`forked_path`] with the normal closure of `{{v,x}}`: all eight subsets of
/// `{v,w,x}`.
pub fn forked_path_normal() -> LabeledSpace {
    let g = forked_path();
    let seeds = SetFamily::new([g.sinks()]).unwrap();
    let family = normal_closure(&g, &seeds).unwrap();
    LabeledSpace::new(g, family).unwrap()
}

/// [`forked_path`] with the six-set family `{{v,w},{x},{v,w,x},{w},{v},∅}`,
/// which is not closed under unions.
pub fn forked_path_listed() -> LabeledSpace {
    explicit(
        forked_path(),
        &[&["v", "w"], &["x"], &["v", "w", "x"], &["w"], &["v"], &[]],
    )
}

/// [`forked_path`] with `{{x},{v,w},{v,w,x},∅}`, which omits the sink set.
pub fn forked_path_without_sinks() -> LabeledSpace {
    explicit(forked_path(), &[&["x"], &["v", "w"], &["v", "w", "x"], &[]])
}

/// `u -a-> w`, `v -b-> x`, `w -b-> x`; the only sink is `x`.
pub fn joined_path() -> LabeledGraph {
    graph(
        &["u", "v", "w", "x"],
        &[("u", "a", "w"), ("v", "b", "x"), ("w", "b", "x")],
    )
}

/// [`joined_path`] with `{{v,w},{w},{x},∅}`.
pub fn joined_path_listed() -> LabeledSpace {
    explicit(joined_path(), &[&["v", "w"], &["w"], &["x"], &[]])
}

/// [`joined_path_listed`] with `{v}` added.
pub fn joined_path_split() -> LabeledSpace {
    explicit(joined_path(), &[&["v", "w"], &["w"], &["x"], &[], &["v"]])
}
