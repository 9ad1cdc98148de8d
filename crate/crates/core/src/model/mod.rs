//! Labeled graphs, query strings, walks and match witnesses.

mod alphabet;
mod digraph;
mod format;
mod graph;
mod restrict;
mod witness;

use thiserror::Error;

pub use alphabet::{Alphabet, Symbol};
pub use digraph::Digraph;
pub use format::{parse_graph, parse_query, serialize_graph, serialize_query, ParseError};
pub use graph::{spell, LabelSlot, LabeledGraph, QueryString, Walk};
pub use restrict::restrict_alphabet;
pub use witness::{
    verify_witness, EditOp, EditTarget, LabelEditEntry, MappingEntry, MatchWitness, QueryEditEntry,
    WitnessDocument, WitnessError,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid symbol token `{0}`")]
    BadToken(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("vertex {0} has an empty label")]
    EmptyLabel(usize),
    #[error("edge {0} -> {1} has an endpoint outside the graph")]
    DanglingEdge(usize, usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
    #[error("query is empty")]
    EmptyQuery,
    #[error("walk is empty")]
    EmptyWalk,
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("{0} -> {1} is not an edge")]
    NotAnEdge(usize, usize),
}
