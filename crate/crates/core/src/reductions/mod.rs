//! Generators for the hardness constructions and the extractors that map a
//! solution of the constructed matching instance back to the source problem.
//!
//! * h-Path → compatibility with unit labels ([`reduce_hpath_unit`]).
//! * h-Path → compatibility over `{0, 1}` ([`reduce_hpath_binary`]).
//! * Minimum Set Cover → restricted approximate matching ([`reduce_setcover`]).

mod hpath;
mod setcover;

use thiserror::Error;

pub use hpath::{extract_hpath, reduce_hpath_binary, reduce_hpath_unit};
pub use setcover::{extract_cover, reduce_setcover};

use crate::model::{Digraph, LabeledGraph, ModelError, QueryString, WitnessError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("h = {h} must lie in 1..={vertices}")]
    PathLength { h: usize, vertices: usize },
    #[error("a set-cover instance needs at least one set")]
    NoSets,
    #[error("set S{0} is empty")]
    EmptySet(usize),
    #[error("set S{set} contains u{element}, outside 1..={universe}")]
    ElementOutOfRange { set: usize, element: usize, universe: usize },
    #[error("artifact was not produced by this reduction")]
    WrongArtifact,
    #[error("witness rejected: {0}")]
    Witness(#[from] WitnessError),
    #[error("witness edits the query; only label edits are allowed")]
    QueryEdited,
    #[error("witness walk has {found} vertices, expected {expected}")]
    WalkLength { expected: usize, found: usize },
    #[error("walk maps back to {0:?}, which is not a simple path")]
    NotSimple(Vec<usize>),
    #[error("vertex {0} has no source counterpart")]
    ProvenanceGap(usize),
    #[error("witness normalization failed: {0}")]
    Normalization(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A source instance of h-Path: is there a simple path on `h` vertices?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPathInstance {
    pub graph: Digraph,
    pub h: usize,
}

impl HPathInstance {
    pub fn new(graph: Digraph, h: usize) -> Result<Self, ReductionError> {
        if h == 0 || h > graph.vertex_count() {
            return Err(ReductionError::PathLength {
                h,
                vertices: graph.vertex_count(),
            });
        }
        Ok(HPathInstance { graph, h })
    }

    /// Text form: `n`, then one `src dst` line per edge, then `h`.
    /// Vertices are 0-based.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let lines: Vec<(usize, Vec<usize>)> = numeric_lines(text)?;
        let ((_, first), rest) = lines.split_first().ok_or(ReductionError::Parse {
            line: 1,
            message: "missing vertex count".into(),
        })?;
        let ((hline, last), middle) = rest.split_last().ok_or(ReductionError::Parse {
            line: lines[0].0,
            message: "missing path length".into(),
        })?;
        let [n] = first[..] else {
            return Err(ReductionError::Parse {
                line: lines[0].0,
                message: "first line must hold only the vertex count".into(),
            });
        };
        let [h] = last[..] else {
            return Err(ReductionError::Parse {
                line: *hline,
                message: "last line must hold only h".into(),
            });
        };
        let mut edges = Vec::with_capacity(middle.len());
        for (line, fields) in middle {
            let [u, v] = fields[..] else {
                return Err(ReductionError::Parse {
                    line: *line,
                    message: "edge lines hold two vertex ids".into(),
                });
            };
            edges.push((u, v));
        }
        HPathInstance::new(Digraph::new(n, edges)?, h)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.graph.vertex_count());
        for &(u, v) in self.graph.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out.push_str(&format!("{}\n", self.h));
        out
    }
}

/// A source instance of Minimum Set Cover over `U = {u_1, …, u_n}`.
/// Elements are 1-based; each set is kept in ascending element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self, ReductionError> {
        if sets.is_empty() {
            return Err(ReductionError::NoSets);
        }
        let mut normalized = Vec::with_capacity(sets.len());
        for (i, mut set) in sets.into_iter().enumerate() {
            if set.is_empty() {
                return Err(ReductionError::EmptySet(i + 1));
            }
            if let Some(&e) = set.iter().find(|&&e| e == 0 || e > n) {
                return Err(ReductionError::ElementOutOfRange {
                    set: i + 1,
                    element: e,
                    universe: n,
                });
            }
            set.sort_unstable();
            set.dedup();
            normalized.push(set);
        }
        Ok(SetCoverInstance { n, sets: normalized })
    }

    /// Small worked instance: n = 4,
    /// S1 = {u1, u3, u4}, S2 = {u2, u3}, S3 = {u2, u4}.
    pub fn worked_example() -> Self {
        SetCoverInstance::new(4, vec![vec![1, 3, 4], vec![2, 3], vec![2, 4]]).expect("well formed")
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    /// Text form: `n m`, then one line of element indices per set.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let lines = numeric_lines(text)?;
        let Some(((line, header), rest)) = lines.split_first() else {
            return Err(ReductionError::Parse {
                line: 1,
                message: "missing `n m` header".into(),
            });
        };
        let [n, m] = header[..] else {
            return Err(ReductionError::Parse {
                line: *line,
                message: "header must be `n m`".into(),
            });
        };
        if rest.len() != m {
            return Err(ReductionError::Parse {
                line: *line,
                message: format!("header announces {m} sets, found {}", rest.len()),
            });
        }
        SetCoverInstance::new(n, rest.iter().map(|(_, s)| s.clone()).collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for set in &self.sets {
            let items: Vec<String> = set.iter().map(|e| e.to_string()).collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
        out
    }

    /// True when the 0-based set indices cover the universe.
    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut covered = vec![false; self.n + 1];
        for &i in chosen {
            let Some(set) = self.sets.get(i) else {
                return false;
            };
            for &e in set {
                covered[e] = true;
            }
        }
        covered[1..].iter().all(|&c| c)
    }
}

/// What a target vertex encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    /// Copy of a source vertex in an h-Path construction.
    Source(usize),
    /// The hub `v_0` of the set-cover construction.
    Hub,
    /// `v_i` for the 0-based set index `i`.
    Set(usize),
    /// `v_{i,l}`: the `l`-th (0-based) element of set `i`, which is `element`.
    Element { set: usize, slot: usize, element: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionSource {
    HPathUnit(HPathInstance),
    HPathBinary(HPathInstance),
    SetCover {
        instance: SetCoverInstance,
        /// Whether the optimum cover has size `n`, when it was computed.
        /// The cost equivalence only holds for optima below `n`.
        optimum_is_n: Option<bool>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub target_graph: LabeledGraph,
    pub target_query: QueryString,
    /// Indexed by target vertex.
    pub back_map: Vec<VertexOrigin>,
    pub source: ReductionSource,
}

fn numeric_lines(text: &str) -> Result<Vec<(usize, Vec<usize>)>, ReductionError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields = line
            .split_whitespace()
            .map(|f| {
                f.parse().map_err(|_| ReductionError::Parse {
                    line: i + 1,
                    message: format!("expected a non-negative integer, found `{f}`"),
                })
            })
            .collect::<Result<Vec<usize>, _>>()?;
        out.push((i + 1, fields));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hpath_text_round_trip() {
        let inst = HPathInstance::new(Digraph::cycle(4), 3).unwrap();
        let text = inst.to_text();
        assert_eq!(text, "4\n0 1\n1 2\n2 3\n3 0\n3\n");
        assert_eq!(HPathInstance::parse(&text).unwrap(), inst);
    }

    #[test]
    fn hpath_parse_errors() {
        assert!(matches!(HPathInstance::parse(""), Err(ReductionError::Parse { .. })));
        assert!(matches!(HPathInstance::parse("3\n0 1 2\n2\n"), Err(ReductionError::Parse { line: 2, .. })));
        assert_eq!(
            HPathInstance::parse("2\n0 1\n3\n"),
            Err(ReductionError::PathLength { h: 3, vertices: 2 })
        );
    }

    #[test]
    fn set_cover_parse_and_validation() {
        let inst = SetCoverInstance::parse("4 3\n# sets\n4 1 3\n2 3\n2 4\n").unwrap();
        assert_eq!(inst, SetCoverInstance::worked_example());
        assert_eq!(inst.to_text(), "4 3\n1 3 4\n2 3\n2 4\n");
        assert!(matches!(SetCoverInstance::parse("2 2\n1\n"), Err(ReductionError::Parse { .. })));
        assert_eq!(
            SetCoverInstance::new(2, vec![vec![1, 3]]),
            Err(ReductionError::ElementOutOfRange {
                set: 1,
                element: 3,
                universe: 2
            })
        );
        assert_eq!(SetCoverInstance::new(2, vec![vec![]]), Err(ReductionError::EmptySet(1)));
        assert_eq!(SetCoverInstance::new(2, vec![]), Err(ReductionError::NoSets));
    }

    #[test]
    fn cover_check() {
        let inst = SetCoverInstance::worked_example();
        assert!(inst.is_cover(&[0, 1]));
        assert!(!inst.is_cover(&[1, 2]));
        assert!(!inst.is_cover(&[7]));
    }
}
