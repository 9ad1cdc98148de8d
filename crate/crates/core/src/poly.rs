//! Polynomial-time matchers: exact matching, query-only edits, and every edit
//! regime on acyclic graphs.
//!
//! All three run the same layered dynamic program over states (query
//! position, vertex). A walk consumes whole labels, so the state after
//! placing vertex `v` at position `i` is position `i + |σ(v)|`; positions
//! strictly increase and the state graph is acyclic. Ties between equal-cost
//! walks resolve to the lexicographically smallest vertex sequence.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::model::{LabeledGraph, MatchWitness, QueryString, Symbol, Walk};

/// Where the DAG solver places the substitutions it reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EditMode {
    LabelsOnly,
    QueryOnly,
    /// Either side is allowed. On a DAG no slot is revisited, so one edit
    /// per mismatch is optimal either way; the witness edits labels.
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("graph contains a directed cycle")]
    Cyclic,
}

/// Solver result: optimal cost together with a certifying witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matched {
    pub cost: usize,
    pub witness: MatchWitness,
}

/// Returns `Some(order)` with a topological order when the graph is acyclic.
/// The order is the lexicographically smallest one (Kahn with a min-heap).
pub fn is_dag(graph: &LabeledGraph) -> Option<Vec<usize>> {
    let n = graph.vertex_count();
    let mut indegree: Vec<usize> = (0..n).map(|v| graph.predecessors(v).len()).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &u in graph.successors(v) {
            indegree[u] -= 1;
            if indegree[u] == 0 {
                ready.push(Reverse(u));
            }
        }
    }
    (order.len() == n).then_some(order)
}

const UNREACHABLE: usize = usize::MAX;

/// `best[i][v]`: minimum mismatches of a walk that starts with `v` at
/// 0-based position `i` and spells exactly `s[i..]`, or `UNREACHABLE`.
/// `local` scores one label against the query window it covers.
struct SuffixTable {
    best: Vec<Vec<usize>>,
}

impl SuffixTable {
    fn build(graph: &LabeledGraph, query: &[Symbol], local: impl Fn(&[Symbol], &[Symbol]) -> Option<usize>) -> Self {
        let n = query.len();
        let vcount = graph.vertex_count();
        let mut best = vec![vec![UNREACHABLE; vcount]; n + 1];
        for i in (0..n).rev() {
            for v in 0..vcount {
                let label = graph.label(v);
                let end = i + label.len();
                if end > n {
                    continue;
                }
                let Some(here) = local(label, &query[i..end]) else {
                    continue;
                };
                let rest = if end == n {
                    0
                } else {
                    graph
                        .successors(v)
                        .iter()
                        .map(|&u| best[end][u])
                        .min()
                        .unwrap_or(UNREACHABLE)
                };
                if rest != UNREACHABLE {
                    best[i][v] = here + rest;
                }
            }
        }
        SuffixTable { best }
    }

    fn optimum(&self) -> Option<usize> {
        self.best[0].iter().copied().filter(|&c| c != UNREACHABLE).min()
    }

    /// Greedy reconstruction: at each step take the smallest vertex that
    /// still achieves the remaining optimum.
    fn walk(&self, graph: &LabeledGraph, query: &[Symbol], local: impl Fn(&[Symbol], &[Symbol]) -> Option<usize>) -> Option<(usize, Walk)> {
        let total = self.optimum()?;
        let n = query.len();
        let mut remaining = total;
        let mut pos = 0;
        let mut current = (0..graph.vertex_count()).find(|&v| self.best[0][v] == total)?;
        let mut vertices = vec![current];
        loop {
            let label = graph.label(current);
            let end = pos + label.len();
            remaining -= local(label, &query[pos..end]).expect("on an optimal walk");
            if end == n {
                break;
            }
            pos = end;
            current = *graph
                .successors(current)
                .iter()
                .find(|&&u| self.best[pos][u] == remaining)
                .expect("optimal continuation exists");
            vertices.push(current);
        }
        Some((total, Walk::new(vertices).expect("nonempty")))
    }
}

fn mismatches(label: &[Symbol], window: &[Symbol]) -> Option<usize> {
    Some(label.iter().zip(window).filter(|(a, b)| a != b).count())
}

fn equal(label: &[Symbol], window: &[Symbol]) -> Option<usize> {
    (label == window).then_some(0)
}

/// A walk spelling `query` exactly, if one exists.
pub fn exact_match(graph: &LabeledGraph, query: &QueryString) -> Option<MatchWitness> {
    let s = query.symbols();
    let table = SuffixTable::build(graph, s, equal);
    let (_, walk) = table.walk(graph, s, equal)?;
    Some(MatchWitness::unedited(graph, query, walk).expect("walk spells the query"))
}

/// Minimum number of query substitutions such that some walk spells the
/// edited query: the minimum Hamming distance between `s` and any σ(p) of
/// length |s|. `None` when no walk spells exactly |s| symbols.
pub fn min_edits_query_only(graph: &LabeledGraph, query: &QueryString) -> Option<Matched> {
    let s = query.symbols();
    let table = SuffixTable::build(graph, s, mismatches);
    let (cost, walk) = table.walk(graph, s, mismatches)?;
    let witness = MatchWitness::with_query_edits(graph, query, walk).expect("walk has spelled length |s|");
    Some(Matched { cost, witness })
}

/// Minimum edits on an acyclic graph under `mode`.
///
/// Every walk in a DAG is simple, so no label slot is ever mapped twice and
/// each mismatch costs exactly one substitution on whichever side `mode`
/// allows. All three modes therefore report the same cost.
pub fn min_edits_dag(graph: &LabeledGraph, query: &QueryString, mode: EditMode) -> Result<Option<Matched>, PolyError> {
    if is_dag(graph).is_none() {
        return Err(PolyError::Cyclic);
    }
    let s = query.symbols();
    let table = SuffixTable::build(graph, s, mismatches);
    let Some((cost, walk)) = table.walk(graph, s, mismatches) else {
        return Ok(None);
    };
    let witness = match mode {
        EditMode::QueryOnly => MatchWitness::with_query_edits(graph, query, walk),
        EditMode::LabelsOnly | EditMode::Both => MatchWitness::with_label_edits(graph, query, walk),
    }
    .expect("simple walk of spelled length |s|");
    Ok(Some(Matched { cost, witness }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::verify_witness;

    fn q(g: &LabeledGraph, toks: &[&str]) -> QueryString {
        QueryString::from_tokens(g.alphabet(), toks).unwrap()
    }

    #[test]
    fn self_loop_unrolls() {
        let g = LabeledGraph::from_tokens(&["a"], &[&["a"]], &[(0, 0)]).unwrap();
        let s = q(&g, &["a", "a", "a"]);
        let w = exact_match(&g, &s).unwrap();
        assert_eq!(w.walk.vertices(), [0, 0, 0]);
        assert_eq!(verify_witness(&g, &s, &w), Ok(0));
    }

    #[test]
    fn no_backward_edge() {
        let g = LabeledGraph::from_tokens(&["a", "b"], &[&["a"], &["b"]], &[(0, 1)]).unwrap();
        assert!(exact_match(&g, &q(&g, &["b", "a"])).is_none());
    }

    #[test]
    fn multi_symbol_labels_are_consumed_whole() {
        let g = LabeledGraph::from_tokens(&["a", "b"], &[&["a", "b"], &["b"]], &[(0, 1), (1, 0)]).unwrap();
        let w = exact_match(&g, &q(&g, &["a", "b", "b", "a", "b"])).unwrap();
        assert_eq!(w.walk.vertices(), [0, 1, 0]);
        // cannot stop halfway through σ(0)
        assert!(exact_match(&g, &q(&g, &["b", "a"])).is_none());
    }

    #[test]
    fn query_only_costs() {
        let g = LabeledGraph::from_tokens(&["a", "b"], &[&["a"]], &[(0, 0)]).unwrap();
        let s = q(&g, &["a", "b"]);
        let m = min_edits_query_only(&g, &s).unwrap();
        assert_eq!(m.cost, 1);
        assert_eq!(verify_witness(&g, &s, &m.witness), Ok(1));
        assert!(m.witness.graph_edits.is_empty());

        let path = LabeledGraph::from_tokens(&["a", "b"], &[&["a"], &["b"]], &[(0, 1)]).unwrap();
        assert_eq!(min_edits_query_only(&path, &q(&path, &["a", "b"])).unwrap().cost, 0);
        assert!(min_edits_query_only(&path, &q(&path, &["a", "b", "a"])).is_none());
    }

    #[test]
    fn dag_modes_agree() {
        let g = LabeledGraph::from_tokens(&["a", "b", "c"], &[&["a"], &["c"]], &[(0, 1)]).unwrap();
        let s = q(&g, &["a", "b"]);
        for mode in [EditMode::LabelsOnly, EditMode::QueryOnly, EditMode::Both] {
            let m = min_edits_dag(&g, &s, mode).unwrap().unwrap();
            assert_eq!(m.cost, 1);
            assert_eq!(verify_witness(&g, &s, &m.witness), Ok(1));
            match mode {
                EditMode::QueryOnly => assert_eq!(m.witness.query_edits.len(), 1),
                _ => assert_eq!(m.witness.graph_edits.len(), 1),
            }
        }
    }

    #[test]
    fn dag_solver_rejects_cycles() {
        let g = LabeledGraph::from_tokens(&["a"], &[&["a"]], &[(0, 0)]).unwrap();
        let s = q(&g, &["a"]);
        assert_eq!(min_edits_dag(&g, &s, EditMode::Both), Err(PolyError::Cyclic));
    }

    #[test]
    fn dag_detection() {
        let empty = LabeledGraph::from_tokens(&["a"], &[&["a"], &["a"]], &[]).unwrap();
        assert_eq!(is_dag(&empty), Some(vec![0, 1]));
        let chain = LabeledGraph::from_tokens(&["a"], &[&["a"], &["a"], &["a"]], &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(is_dag(&chain), Some(vec![2, 0, 1]));
        let cyc = LabeledGraph::from_tokens(&["a"], &[&["a"], &["a"]], &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(is_dag(&cyc), None);
    }

    #[test]
    fn lexicographic_tie_break() {
        // both 0->2 and 1->2 spell "a a"; the walk must start at 0
        let g = LabeledGraph::from_tokens(&["a"], &[&["a"], &["a"], &["a"]], &[(1, 2), (0, 2)]).unwrap();
        let w = exact_match(&g, &q(&g, &["a", "a"])).unwrap();
        assert_eq!(w.walk.vertices(), [0, 2]);
    }
}
