//! Finite labeled directed graphs, label words, and the source/range maps
//! on vertex sets.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::set::VertexSet;
use crate::Verdict;

/// A label, stored as its rank in the sorted alphabet of its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite word over the alphabet; the empty word is ε.
///
/// Words order shortlex: shorter first, then lexicographically by symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letter(symbol: Symbol) -> Self {
        Self(vec![symbol])
    }

    pub fn from_symbols(symbols: impl IntoIterator<Item = Symbol>) -> Self {
        Self(symbols.into_iter().collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.0);
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    pub fn appended(&self, symbol: Symbol) -> Word {
        let mut symbols = self.0.clone();
        symbols.push(symbol);
        Word(symbols)
    }

    pub fn prepended(&self, symbol: Symbol) -> Word {
        let mut symbols = Vec::with_capacity(self.len() + 1);
        symbols.push(symbol);
        symbols.extend_from_slice(&self.0);
        Word(symbols)
    }

    /// `γ` such that `self = prefix · γ`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|rest| Word(rest.to_vec()))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub label: Symbol,
    pub target: usize,
}

/// A finite directed multigraph with labeled edges.
///
/// The alphabet is exactly the set of labels carried by some edge, sorted by
/// name. Parallel edges with the same source, label and target are collapsed.
#[derive(Clone)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    alphabet: Vec<String>,
    edges: Vec<Edge>,
    // [symbol][vertex]
    successors: Vec<Vec<VertexSet>>,
    predecessors: Vec<Vec<VertexSet>>,
    emitters: Vec<VertexSet>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl LabeledGraph {
    /// Builds a graph from vertex names and `(source, label, target)` triples.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: AsRef<str>,
        E: IntoIterator<Item = (S, S, S)>,
        S: AsRef<str>,
    {
        let mut names = Vec::new();
        let mut vertex_index = HashMap::new();
        for v in vertices {
            let v = v.as_ref();
            if !is_identifier(v) {
                return Err(Error::InvalidIdentifier(v.to_owned()));
            }
            if vertex_index.insert(v.to_owned(), names.len()).is_some() {
                return Err(Error::DuplicateVertex(v.to_owned()));
            }
            names.push(v.to_owned());
        }

        let mut raw = Vec::new();
        for (s, l, t) in edges {
            let (s, l, t) = (s.as_ref(), l.as_ref(), t.as_ref());
            if !is_identifier(l) {
                return Err(Error::InvalidIdentifier(l.to_owned()));
            }
            let lookup = |v: &str| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::UndeclaredVertex(v.to_owned()))
            };
            raw.push((lookup(s)?, l.to_owned(), lookup(t)?));
        }

        let alphabet: Vec<String> = raw
            .iter()
            .map(|(_, l, _)| l.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let symbol_of = |l: &str| Symbol(alphabet.binary_search_by(|a| a.as_str().cmp(l)).unwrap() as u32);
        let edges: Vec<Edge> = raw
            .iter()
            .map(|(s, l, t)| Edge {
                source: *s,
                label: symbol_of(l),
                target: *t,
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        let n = names.len();
        let mut successors = vec![vec![VertexSet::new(); n]; alphabet.len()];
        let mut predecessors = vec![vec![VertexSet::new(); n]; alphabet.len()];
        let mut emitters = vec![VertexSet::new(); alphabet.len()];
        for e in &edges {
            successors[e.label.index()][e.source].insert(e.target);
            predecessors[e.label.index()][e.target].insert(e.source);
            emitters[e.label.index()].insert(e.source);
        }

        Ok(Self {
            vertices: names,
            vertex_index,
            alphabet,
            edges,
            successors,
            predecessors,
            emitters,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, index: usize) -> &str {
        &self.vertices[index]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertices.len())
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.alphabet.len() as u32).map(Symbol)
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.alphabet
            .binary_search_by(|a| a.as_str().cmp(name))
            .ok()
            .map(|i| Symbol(i as u32))
    }

    pub fn symbol_name(&self, symbol: Symbol) -> &str {
        &self.alphabet[symbol.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Looks up a set of vertices by name.
    pub fn vertex_set<I, S>(&self, names: I) -> Result<VertexSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names
            .into_iter()
            .map(|n| {
                self.vertex_index(n.as_ref())
                    .ok_or_else(|| Error::UnknownVertex(n.as_ref().to_owned()))
            })
            .collect()
    }

    /// Vertices that emit no edge.
    pub fn sinks(&self) -> VertexSet {
        let mut emitting = VertexSet::new();
        for e in &self.emitters {
            emitting.union_with(e);
        }
        self.all_vertices().difference(&emitting)
    }

    /// Fails with the first `(vertex, label)` that receives two edges with
    /// the same label.
    pub fn left_resolving(&self) -> Verdict<(usize, Symbol)> {
        for v in 0..self.vertex_count() {
            for a in self.symbols() {
                if self.predecessors[a.index()][v].len() > 1 {
                    return Verdict::Fails((v, a));
                }
            }
        }
        Verdict::Holds
    }

    pub fn is_left_resolving(&self) -> bool {
        self.left_resolving().holds()
    }

    /// `r(A, a)` for a single letter.
    pub fn step(&self, set: &VertexSet, symbol: Symbol) -> VertexSet {
        let targets = &self.successors[symbol.index()];
        let mut out = VertexSet::new();
        for v in set.iter() {
            out.union_with(&targets[v]);
        }
        out
    }

    /// `r(A, w)`: endpoints of paths labeled `w` that start in `A`; `r(A, ε) = A`.
    pub fn relative_range(&self, set: &VertexSet, word: &Word) -> VertexSet {
        let mut current = set.clone();
        for &a in word.symbols() {
            if current.is_empty() {
                break;
            }
            current = self.step(&current, a);
        }
        current
    }

    /// `r(a)` for a single letter.
    pub fn letter_range(&self, symbol: Symbol) -> VertexSet {
        self.step(&self.emitters[symbol.index()], symbol)
    }

    /// `s(a)` for a single letter.
    pub fn letter_source(&self, symbol: Symbol) -> &VertexSet {
        &self.emitters[symbol.index()]
    }

    /// `r(w)` for a non-empty word.
    pub fn range_of_word(&self, word: &Word) -> Result<VertexSet> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(self.relative_range(&self.all_vertices(), word))
    }

    /// `r(w)`, with `r(ε)` taken as the full vertex set (the unit for
    /// intersections).
    pub(crate) fn range_or_all(&self, word: &Word) -> VertexSet {
        self.relative_range(&self.all_vertices(), word)
    }

    /// `s(w)` for a non-empty word: start vertices of paths labeled `w`.
    pub fn source_of_word(&self, word: &Word) -> Result<VertexSet> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut current = self.all_vertices();
        for &a in word.symbols().iter().rev() {
            let sources = &self.predecessors[a.index()];
            let mut prev = VertexSet::new();
            for v in current.iter() {
                prev.union_with(&sources[v]);
            }
            current = prev;
        }
        Ok(current)
    }

    /// `L(AE^1)`: labels of edges leaving `set`, in alphabet order.
    pub fn out_labels(&self, set: &VertexSet) -> Vec<Symbol> {
        self.symbols()
            .filter(|a| !self.emitters[a.index()].is_disjoint(set))
            .collect()
    }

    /// True when the graph has no directed cycle (self-loops count).
    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count();
        let mut indegree = vec![0usize; n];
        let mut adjacency = vec![Vec::new(); n];
        for e in &self.edges {
            adjacency[e.source].push(e.target);
            indegree[e.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &t in &adjacency[v] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    stack.push(t);
                }
            }
        }
        seen == n
    }

    /// Distinct labels of non-empty paths, in shortlex order, up to
    /// `max_len` letters. Without a bound the graph must be acyclic.
    pub fn enumerate_words(&self, max_len: Option<usize>) -> Result<Vec<Word>> {
        if max_len.is_none() && !self.is_acyclic() {
            return Err(Error::InfiniteLanguage);
        }
        let limit = max_len.unwrap_or(usize::MAX);
        let mut out = Vec::new();
        let mut level: Vec<(Word, VertexSet)> = vec![(Word::empty(), self.all_vertices())];
        let mut len = 0;
        while !level.is_empty() && len < limit {
            let mut next = Vec::new();
            for (word, range) in &level {
                for a in self.symbols() {
                    let r = self.step(range, a);
                    if !r.is_empty() {
                        next.push((word.appended(a), r));
                    }
                }
            }
            out.extend(next.iter().map(|(w, _)| w.clone()));
            level = next;
            len += 1;
        }
        Ok(out)
    }

    /// Parses a word. Labels may be separated by `.` or whitespace; an
    /// unseparated string is split greedily into the longest known labels.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let mut symbols = Vec::new();
        for token in text.split(|c: char| c == '.' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let mut rest = token;
            while !rest.is_empty() {
                let best = self
                    .alphabet
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| rest.starts_with(a.as_str()))
                    .max_by_key(|(_, a)| a.len());
                match best {
                    Some((i, a)) => {
                        symbols.push(Symbol(i as u32));
                        rest = &rest[a.len()..];
                    }
                    None => return Err(Error::UnknownSymbol(rest.to_owned())),
                }
            }
        }
        Ok(Word(symbols))
    }

    /// Renders a word; ε renders as the empty string. Labels are joined
    /// with `.` unless every label is a single character.
    pub fn format_word(&self, word: &Word) -> String {
        let sep = if self.alphabet.iter().all(|a| a.chars().count() == 1) {
            ""
        } else {
            "."
        };
        word.symbols()
            .iter()
            .map(|&s| self.symbol_name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Like [`format_word`](Self::format_word) but renders ε as `ε`.
    pub fn word_label(&self, word: &Word) -> String {
        if word.is_empty() {
            "ε".to_owned()
        } else {
            self.format_word(word)
        }
    }

    /// Renders a set as `{v,w}`.
    pub fn format_set(&self, set: &VertexSet) -> String {
        let names: Vec<&str> = set.iter().map(|v| self.vertex_name(v)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                format!(
                    "{}-{}->{}",
                    self.vertices[e.source],
                    self.alphabet[e.label.index()],
                    self.vertices[e.target]
                )
            })
            .collect();
        f.debug_struct("LabeledGraph")
            .field("vertices", &self.vertices)
            .field("edges", &edges)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(g: &LabeledGraph, set: &VertexSet) -> String {
        g.format_set(set)
    }

    fn words(g: &LabeledGraph, ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| g.format_word(w)).collect()
    }

    #[test]
    fn sinks_of_fixtures() {
        assert_eq!(
            names(&fixtures::forked_path(), &fixtures::forked_path().sinks()),
            "{v,x}"
        );
        assert_eq!(names(&fixtures::looped_exit(), &fixtures::looped_exit().sinks()), "{v}");
        let loop_only = LabeledGraph::new(["u"], [("u", "a", "u")]).unwrap();
        assert!(loop_only.sinks().is_empty());
    }

    #[test]
    fn left_resolving_witness() {
        assert!(fixtures::forked_path().is_left_resolving());
        let g = LabeledGraph::new(["u", "v", "w"], [("u", "a", "w"), ("v", "a", "w")]).unwrap();
        let Verdict::Fails((v, a)) = g.left_resolving() else {
            panic!("expected a violation");
        };
        assert_eq!((g.vertex_name(v), g.symbol_name(a)), ("w", "a"));
        let no_edges = LabeledGraph::new(["u", "v"], Vec::<(&str, &str, &str)>::new()).unwrap();
        assert!(no_edges.is_left_resolving());
        assert!(no_edges.alphabet().is_empty());
    }

    #[test]
    fn relative_ranges_of_forked_path() {
        let g = fixtures::forked_path();
        let u = g.vertex_set(["u"]).unwrap();
        let r = |w: &str| names(&g, &g.relative_range(&u, &g.parse_word(w).unwrap()));
        assert_eq!(r("a"), "{v,w}");
        assert_eq!(r("ab"), "{x}");
        assert_eq!(r(""), "{u}");
        let any = g.vertex_set(["w", "x"]).unwrap();
        assert_eq!(g.relative_range(&any, &Word::empty()), any);
    }

    #[test]
    fn word_range_and_source() {
        let g = fixtures::joined_path();
        let b = g.parse_word("b").unwrap();
        assert_eq!(names(&g, &g.range_of_word(&b).unwrap()), "{x}");
        assert_eq!(names(&g, &g.source_of_word(&b).unwrap()), "{v,w}");

        let g = fixtures::looped_exit();
        let aa = g.parse_word("aa").unwrap();
        assert_eq!(names(&g, &g.range_of_word(&aa).unwrap()), "{u,v}");
        assert_eq!(names(&g, &g.source_of_word(&aa).unwrap()), "{u}");

        let g = fixtures::forked_path();
        let ba = g.parse_word("ba").unwrap();
        assert!(g.range_of_word(&ba).unwrap().is_empty());
        assert!(g.source_of_word(&ba).unwrap().is_empty());
        assert_eq!(g.range_of_word(&Word::empty()), Err(Error::EmptyWord));
        assert_eq!(g.source_of_word(&Word::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn out_labels_cases() {
        let g = fixtures::forked_path();
        let labels = g.out_labels(&g.vertex_set(["u", "w"]).unwrap());
        assert_eq!(labels.iter().map(|&s| g.symbol_name(s)).collect::<Vec<_>>(), ["a", "b"]);
        assert!(g.out_labels(&VertexSet::new()).is_empty());
        assert!(g.out_labels(&g.sinks()).is_empty());
    }

    #[test]
    fn word_enumeration() {
        let g = fixtures::forked_path();
        assert!(g.is_acyclic());
        assert_eq!(words(&g, &g.enumerate_words(None).unwrap()), ["a", "b", "ab"]);

        let g = fixtures::looped_exit();
        assert!(!g.is_acyclic());
        assert_eq!(words(&g, &g.enumerate_words(Some(2)).unwrap()), ["a", "aa"]);
        assert_eq!(g.enumerate_words(None), Err(Error::InfiniteLanguage));
    }

    #[test]
    fn construction_errors_and_dedup() {
        assert_eq!(
            LabeledGraph::new(["u", "u"], Vec::<(&str, &str, &str)>::new()).unwrap_err(),
            Error::DuplicateVertex("u".into())
        );
        assert_eq!(
            LabeledGraph::new(["u"], [("u", "a", "z")]).unwrap_err(),
            Error::UndeclaredVertex("z".into())
        );
        let g = LabeledGraph::new(["u", "v"], [("u", "a", "v"), ("u", "a", "v")]).unwrap();
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn multi_character_labels() {
        let g = LabeledGraph::new(["u", "v", "w"], [("u", "ab", "v"), ("v", "a", "w")]).unwrap();
        let w = g.parse_word("ab.a").unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(g.format_word(&w), "ab.a");
        assert_eq!(g.parse_word("aba").unwrap(), w);
        assert_eq!(g.parse_word("abc"), Err(Error::UnknownSymbol("c".into())));
    }

    #[test]
    fn shortlex_order() {
        let g = fixtures::forked_path();
        let mut ws: Vec<Word> = ["ab", "b", "", "a", "ba"]
            .iter()
            .map(|s| g.parse_word(s).unwrap())
            .collect();
        ws.sort();
        assert_eq!(words(&g, &ws), ["", "a", "b", "ab", "ba"]);
    }
}
