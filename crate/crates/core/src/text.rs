//! Text formats: graph description files and term expressions.
//!
//! Graph files are line oriented. `#` starts a comment that runs to the end
//! of the line.
//!
//! ```text
//! vertices: u v w x
//! edge: u a v
//! edge: u a w
//! edge: w b x
//! family: normal-closure      # or: accommodating-closure | explicit
//! set: v x                    # seed (closure modes) or member (explicit)
//! ```
//!
//! Term expressions are sums of optionally scaled atoms
//! `[s[μ]] p{ids} [s*[ν]]`, e.g. `s[ab] p{x} s*[b]` or `p{v,w} - 1/2*p{v}`.

use std::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::graph::{is_identifier, LabeledGraph, Word};
use crate::set::VertexSet;
use crate::space::{closure, ClosureMode, LabeledSpace, SetFamily};
use crate::term::{canonicalize, AlgebraElement, CanonicalTerm, Rational};

/// A syntax error, located when the location is meaningful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl ParseError {
    fn at(message: impl Into<String>, line: usize, column: usize) -> Self {
        Self {
            message: message.into(),
            line: Some(line),
            column: Some(column),
        }
    }

    fn bare(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            line: None,
            column: None,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)?;
        if let Some(line) = self.line {
            write!(f, ", line {line}")?;
        }
        if let Some(column) = self.column {
            write!(f, ", column {column}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyDirective {
    Explicit,
    AccommodatingClosure,
    NormalClosure,
}

impl FamilyDirective {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Explicit => "explicit",
            Self::AccommodatingClosure => "accommodating-closure",
            Self::NormalClosure => "normal-closure",
        }
    }
}

/// A parsed graph description file.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: LabeledGraph,
    pub directive: FamilyDirective,
    /// Seeds in closure modes, members in explicit mode.
    pub sets: Vec<VertexSet>,
}

impl GraphFile {
    /// Builds the labeled space the file describes.
    pub fn space(&self, cap: usize) -> Result<LabeledSpace> {
        let listed = SetFamily::new(self.sets.iter().cloned())?;
        let family = match self.directive {
            FamilyDirective::Explicit => listed,
            FamilyDirective::AccommodatingClosure => closure(&self.graph, &listed, ClosureMode::Accommodating, cap)?,
            FamilyDirective::NormalClosure => closure(&self.graph, &listed, ClosureMode::Normal, cap)?,
        };
        LabeledSpace::new(self.graph.clone(), family)
    }

    pub fn seeds(&self) -> Result<SetFamily> {
        SetFamily::new(self.sets.iter().cloned())
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str, offset: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: offset + line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile, ParseError> {
    let mut vertices: Vec<(String, usize, usize)> = Vec::new();
    let mut edges: Vec<([String; 3], usize, [usize; 3])> = Vec::new();
    let mut directive: Option<FamilyDirective> = None;
    let mut sets: Vec<(Vec<(String, usize)>, usize)> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(ParseError::at("expected `key: value`", line_no, col));
        };
        let key = content[..colon].trim();
        let key_col = content.len() - content.trim_start().len() + 1;
        let offset = content[..=colon].chars().count();
        let toks = tokens(&content[colon + 1..], offset);
        for t in toks.iter().filter(|_| key != "family") {
            if !is_identifier(t.text) {
                return Err(ParseError::at(
                    format!("invalid identifier {:?}", t.text),
                    line_no,
                    t.column,
                ));
            }
        }
        match key {
            "vertices" => {
                for t in toks {
                    if vertices.iter().any(|(v, _, _)| v == t.text) {
                        return Err(ParseError::at(
                            format!("duplicate vertex {}", t.text),
                            line_no,
                            t.column,
                        ));
                    }
                    vertices.push((t.text.to_owned(), line_no, t.column));
                }
            }
            "edge" => {
                if toks.len() != 3 {
                    return Err(ParseError::at(
                        "edge needs exactly: source label target",
                        line_no,
                        offset + 1,
                    ));
                }
                edges.push((
                    [
                        toks[0].text.to_owned(),
                        toks[1].text.to_owned(),
                        toks[2].text.to_owned(),
                    ],
                    line_no,
                    [toks[0].column, toks[1].column, toks[2].column],
                ));
            }
            "family" => {
                if directive.is_some() {
                    return Err(ParseError::at("duplicate family directive", line_no, key_col));
                }
                let [t] = toks.as_slice() else {
                    return Err(ParseError::at("family needs exactly one mode", line_no, offset + 1));
                };
                directive = Some(match t.text {
                    "explicit" => FamilyDirective::Explicit,
                    "accommodating-closure" => FamilyDirective::AccommodatingClosure,
                    "normal-closure" => FamilyDirective::NormalClosure,
                    other => {
                        return Err(ParseError::at(
                            format!("unknown family mode {other}"),
                            line_no,
                            t.column,
                        ))
                    }
                });
            }
            "set" => sets.push((toks.iter().map(|t| (t.text.to_owned(), t.column)).collect(), line_no)),
            other => return Err(ParseError::at(format!("unknown directive {other}"), line_no, key_col)),
        }
    }

    if vertices.is_empty() {
        return Err(ParseError::bare("missing vertices"));
    }
    let declared = |v: &str| vertices.iter().any(|(d, _, _)| d == v);
    for (e, line, cols) in &edges {
        for i in [0, 2] {
            if !declared(&e[i]) {
                return Err(ParseError::at(format!("undeclared vertex {}", e[i]), *line, cols[i]));
            }
        }
    }
    let graph = LabeledGraph::new(
        vertices.iter().map(|(v, _, _)| v.as_str()),
        edges
            .iter()
            .map(|(e, _, _)| (e[0].as_str(), e[1].as_str(), e[2].as_str())),
    )
    .map_err(|e| ParseError::bare(e.to_string()))?;

    let mut parsed_sets = Vec::new();
    for (members, line) in sets {
        let mut set = VertexSet::new();
        for (name, col) in members {
            let index = graph
                .vertex_index(&name)
                .ok_or_else(|| ParseError::at(format!("undeclared vertex {name}"), line, col))?;
            set.insert(index);
        }
        parsed_sets.push(set);
    }

    Ok(GraphFile {
        graph,
        directive: directive.unwrap_or(FamilyDirective::Explicit),
        sets: parsed_sets,
    })
}

/// Parses a list of sets such as `{v,w};{x}` or `v w; x`.
pub fn parse_set_list(g: &LabeledGraph, text: &str) -> Result<Vec<VertexSet>> {
    text.split(';')
        .filter(|chunk| !chunk.trim().is_empty())
        .map(|chunk| {
            let inner = chunk.trim().trim_start_matches('{').trim_end_matches('}');
            g.vertex_set(
                inner
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty()),
            )
        })
        .collect()
}

struct TermParser<'a> {
    space: &'a LabeledSpace,
    text: &'a str,
    pos: usize,
}

impl<'a> TermParser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        let column = self.text[..self.pos].chars().count() + 1;
        Error::Parse(ParseError {
            message: message.into(),
            line: None,
            column: Some(column),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn until(&mut self, close: char) -> Result<&'a str> {
        let rest = &self.text[self.pos..];
        let Some(end) = rest.find(close) else {
            return Err(self.error(format!("missing `{close}`")));
        };
        self.pos += end + close.len_utf8();
        Ok(&rest[..end])
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a number"));
        }
        let value = rest[..len].parse().map_err(|_| self.error("number out of range"))?;
        self.pos += len;
        Ok(value)
    }

    fn coefficient(&mut self) -> Result<Option<Rational>> {
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok(None);
        }
        let numer = self.integer()?;
        let denom = if self.eat("/") { self.integer()? } else { 1 };
        if denom == 0 {
            return Err(self.error("zero denominator"));
        }
        Ok(Some(Rational::new(numer, denom)))
    }

    fn word(&mut self) -> Result<Word> {
        let inner = self.until(']')?;
        self.space.graph().parse_word(inner)
    }

    fn atom(&mut self) -> Result<Option<CanonicalTerm>> {
        let g = self.space.graph();
        let left = if self.eat("s[") { self.word()? } else { Word::empty() };
        self.expect("p{")?;
        let ids = self.until('}')?;
        let mid = g.vertex_set(
            ids.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty()),
        )?;
        let right = if self.eat("s*[") { self.word()? } else { Word::empty() };
        if mid.is_empty() {
            return Ok(None);
        }
        canonicalize(self.space, &left, &mid, &right)
    }

    fn element(&mut self) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        let mut sign = Rational::one();
        if self.eat("-") {
            sign = -sign;
        } else if self.peek() == Some('0') {
            let save = self.pos;
            self.eat("0");
            if self.peek().is_none() {
                return Ok(out);
            }
            self.pos = save;
        }
        loop {
            let c = self.coefficient()?;
            if c.is_some() {
                self.expect("*")?;
            }
            if let Some(t) = self.atom()? {
                out.add_term(t, sign * c.unwrap_or_else(Rational::one));
            }
            match self.peek() {
                None => return Ok(out),
                Some('+') => {
                    self.eat("+");
                    sign = Rational::one();
                }
                Some('-') => {
                    self.eat("-");
                    sign = -Rational::one();
                }
                Some(_) => return Err(self.error("expected `+`, `-` or end of expression")),
            }
        }
    }
}

/// Parses and canonicalizes a term expression over `space`.
pub fn parse_term(space: &LabeledSpace, text: &str) -> Result<AlgebraElement> {
    let mut p = TermParser { space, text, pos: 0 };
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    p.element()
}

/// `s[μ] p{A} s*[ν]`, omitting ε parts.
pub fn format_term(g: &LabeledGraph, t: &CanonicalTerm) -> String {
    let mut parts = Vec::with_capacity(3);
    if !t.left().is_empty() {
        parts.push(format!("s[{}]", g.format_word(t.left())));
    }
    let names: Vec<&str> = t.mid().iter().map(|v| g.vertex_name(v)).collect();
    parts.push(format!("p{{{}}}", names.join(",")));
    if !t.right().is_empty() {
        parts.push(format!("s*[{}]", g.format_word(t.right())));
    }
    parts.join(" ")
}

/// Renders an element in the grammar accepted by [`parse_term`]; zero is `0`.
pub fn format_element(g: &LabeledGraph, e: &AlgebraElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (t, c)) in e.iter().enumerate() {
        let magnitude = c.abs();
        match (i, c.is_negative()) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        if !magnitude.is_one() {
            out.push_str(&format!("{magnitude}*"));
        }
        out.push_str(&format_term(g, t));
    }
    out
}

pub fn format_family(g: &LabeledGraph, family: &SetFamily) -> String {
    family.render(g)
}
