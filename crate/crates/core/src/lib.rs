//! String-to-labeled-graph matching.
//!
//! Exact and approximate (substitution-only) matching of a query string
//! against walks of a vertex-labeled directed graph, the color-coding
//! decider for compatibility, exhaustive reference solvers, and generators
//! for the hardness constructions relating these problems to h-Path and
//! Minimum Set Cover.

pub mod bench;
pub mod fpt;
pub mod gen;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod reductions;
