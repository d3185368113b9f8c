use thiserror::Error;

use crate::text::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// Sets and words are rendered with vertex and label names at the point the
/// error is raised, so messages stay readable without the graph at hand.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("undeclared vertex {0}")]
    UndeclaredVertex(String),
    #[error("invalid identifier {0:?}: expected a non-empty alphanumeric string")]
    InvalidIdentifier(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown label {0}")]
    UnknownSymbol(String),
    #[error("the empty word has no standalone source or range")]
    EmptyWord,
    #[error("infinite language: the graph has a cycle, pass a length bound")]
    InfiniteLanguage,

    #[error("a family equal to {{∅}} is not allowed")]
    OnlyEmptySet,
    #[error("the family is empty")]
    EmptyFamily,
    #[error("closure exceeded the cap of {cap} sets")]
    ClosureCapExceeded { cap: usize },
    #[error("family is not closed under relative ranges: r({set}, {label}) = {range} is missing")]
    NotRangeClosed { set: String, label: String, range: String },
    #[error("{0} is not a member of the family")]
    NotInFamily(String),

    #[error("hereditary seeds must be non-empty sets")]
    EmptySeed,
    #[error("not hereditary: {0}")]
    NotHereditary(String),
    #[error("E^0_sink ∉ B")]
    SinksNotInFamily,
    #[error("the graph has no sinks")]
    NoSinks,
    #[error("{0} is not a minimal sinks set")]
    NotMinimalSinksSet(String),

    #[error("the graph has a cycle")]
    Cyclic,
    #[error("the labeled space is not normal: {0}")]
    NotNormal(String),
    #[error("the labeled space is not weakly left-resolving: {0}")]
    NotWeaklyLeftResolving(String),
    #[error("{0} contains a sink")]
    ContainsSink(String),
    #[error("undecided symbolically: no sink basis is available for this space")]
    SymbolicallyUndecided,

    #[error("{0}")]
    Parse(#[from] ParseError),
}
