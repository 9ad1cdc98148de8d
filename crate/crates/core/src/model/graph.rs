use std::collections::HashSet;

use super::{Alphabet, ModelError, Symbol};

/// Directed graph whose vertices carry nonempty symbol strings.
///
/// Vertices are the indices `0..vertex_count()`. Edges are kept in insertion
/// order (the file format round-trips on it) and mirrored into sorted
/// adjacency lists, which every search walks in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    labels: Vec<Vec<Symbol>>,
    edges: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl LabeledGraph {
    pub fn new(
        alphabet: Alphabet,
        labels: Vec<Vec<Symbol>>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, ModelError> {
        let n = labels.len();
        for (v, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(ModelError::EmptyLabel(v));
            }
            if let Some(bad) = label.iter().find(|s| !alphabet.contains(**s)) {
                return Err(ModelError::UnknownSymbol(format!("#{}", bad.0)));
            }
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(ModelError::DanglingEdge(u, v));
            }
            if !seen.insert((u, v)) {
                return Err(ModelError::DuplicateEdge(u, v));
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        Ok(LabeledGraph {
            alphabet,
            labels,
            edges,
            out_adj,
            in_adj,
        })
    }

    /// Builds a graph straight from token strings; handy in tests and
    /// generators. Each label is a slice of tokens.
    pub fn from_tokens(
        alphabet: &[&str],
        labels: &[&[&str]],
        edges: &[(usize, usize)],
    ) -> Result<Self, ModelError> {
        let alphabet = Alphabet::new(alphabet.iter().copied())?;
        let labels = labels
            .iter()
            .map(|l| l.iter().map(|t| alphabet.resolve(t)).collect())
            .collect::<Result<Vec<_>, _>>()?;
        LabeledGraph::new(alphabet, labels, edges.to_vec())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: usize) -> &[Symbol] {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[Vec<Symbol>] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// N⁺(v), ascending.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// N⁻(v), ascending.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_adj
            .get(u)
            .is_some_and(|succ| succ.binary_search(&v).is_ok())
    }

    pub fn has_unit_labels(&self) -> bool {
        self.labels.iter().all(|l| l.len() == 1)
    }

    pub fn max_label_len(&self) -> usize {
        self.labels.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_label_len(&self) -> usize {
        self.labels.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Distinct symbols used by at least one label, ascending.
    pub fn label_symbols(&self) -> Vec<Symbol> {
        let mut syms: Vec<Symbol> = self.labels.iter().flatten().copied().collect();
        syms.sort_unstable();
        syms.dedup();
        syms
    }

    /// Returns the graph with vertex `removed` deleted, together with the
    /// map from new vertex indices to the old ones.
    pub fn without_vertex(&self, removed: usize) -> (LabeledGraph, Vec<usize>) {
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&v| v != removed).collect();
        let mut renumber = vec![usize::MAX; self.vertex_count()];
        for (new, &old) in keep.iter().enumerate() {
            renumber[old] = new;
        }
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| u != removed && v != removed)
            .map(|&(u, v)| (renumber[u], renumber[v]))
            .collect();
        let g = LabeledGraph::new(self.alphabet.clone(), labels, edges)
            .expect("induced subgraph of a valid graph is valid");
        (g, keep)
    }

    /// Same vertices and edges with a different alphabet/labelling.
    pub fn relabeled(
        &self,
        alphabet: Alphabet,
        labels: Vec<Vec<Symbol>>,
    ) -> Result<LabeledGraph, ModelError> {
        LabeledGraph::new(alphabet, labels, self.edges.clone())
    }
}

/// The pattern `s`. Positions are 1-based in the public API.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QueryString {
    symbols: Vec<Symbol>,
}

impl QueryString {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, ModelError> {
        if symbols.is_empty() {
            return Err(ModelError::EmptyQuery);
        }
        Ok(QueryString { symbols })
    }

    pub fn from_tokens(alphabet: &Alphabet, tokens: &[&str]) -> Result<Self, ModelError> {
        let symbols = tokens
            .iter()
            .map(|t| alphabet.resolve(t))
            .collect::<Result<Vec<_>, _>>()?;
        QueryString::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `s[i]`, 1-based.
    pub fn at(&self, position: usize) -> Symbol {
        self.symbols[position - 1]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Distinct symbols of the query, ascending.
    pub fn distinct_symbols(&self) -> Vec<Symbol> {
        let mut syms = self.symbols.clone();
        syms.sort_unstable();
        syms.dedup();
        syms
    }
}

/// A position inside a vertex label: `σ(vertex)[offset]`, offset 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSlot {
    pub vertex: usize,
    pub offset: usize,
}

/// Vertex sequence following edges; repeats allowed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Walk(Vec<usize>);

impl Walk {
    pub fn new(vertices: Vec<usize>) -> Result<Self, ModelError> {
        if vertices.is_empty() {
            return Err(ModelError::EmptyWalk);
        }
        Ok(Walk(vertices))
    }

    /// Builds a walk and checks every step against `graph`.
    pub fn in_graph(graph: &LabeledGraph, vertices: Vec<usize>) -> Result<Self, ModelError> {
        let walk = Walk::new(vertices)?;
        walk.check(graph)?;
        Ok(walk)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// V(p): the distinct vertices of the walk, ascending.
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut vs = self.0.clone();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn check(&self, graph: &LabeledGraph) -> Result<(), ModelError> {
        if let Some(&v) = self.0.iter().find(|&&v| v >= graph.vertex_count()) {
            return Err(ModelError::UnknownVertex(v));
        }
        for pair in self.0.windows(2) {
            if !graph.has_edge(pair[0], pair[1]) {
                return Err(ModelError::NotAnEdge(pair[0], pair[1]));
            }
        }
        Ok(())
    }

    /// Number of symbols the walk spells, without building the string.
    pub fn spelled_len(&self, graph: &LabeledGraph) -> usize {
        self.0.iter().map(|&v| graph.label(v).len()).sum()
    }

    /// The canonical left-to-right unrolling: slot `k` of the result is the
    /// label slot carrying symbol `k + 1` of σ(p).
    pub fn slots(&self, graph: &LabeledGraph) -> Vec<LabelSlot> {
        self.0
            .iter()
            .flat_map(|&v| (1..=graph.label(v).len()).map(move |offset| LabelSlot { vertex: v, offset }))
            .collect()
    }
}

/// σ(p): concatenation of the labels along `walk`.
pub fn spell(graph: &LabeledGraph, walk: &Walk) -> Result<Vec<Symbol>, ModelError> {
    walk.check(graph)?;
    Ok(walk
        .vertices()
        .iter()
        .flat_map(|&v| graph.label(v).iter().copied())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> LabeledGraph {
        LabeledGraph::from_tokens(&["a", "b"], &[&["a"], &["b"]], &[(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn spell_single_vertex() {
        let g = two_cycle();
        let w = Walk::new(vec![0]).unwrap();
        assert_eq!(g.alphabet().render(&spell(&g, &w).unwrap()), "a");
    }

    #[test]
    fn spell_repeats_vertices() {
        let g = two_cycle();
        let w = Walk::new(vec![0, 1, 0, 1]).unwrap();
        assert_eq!(g.alphabet().render(&spell(&g, &w).unwrap()), "a b a b");
    }

    #[test]
    fn spell_rejects_non_edge() {
        let g = LabeledGraph::from_tokens(&["a", "b"], &[&["a"], &["b"]], &[(0, 1)]).unwrap();
        let w = Walk::new(vec![1, 0]).unwrap();
        assert_eq!(spell(&g, &w), Err(ModelError::NotAnEdge(1, 0)));
    }

    #[test]
    fn graph_invariants() {
        assert_eq!(
            LabeledGraph::from_tokens(&["a"], &[&["a"]], &[(0, 3)]),
            Err(ModelError::DanglingEdge(0, 3))
        );
        assert_eq!(
            LabeledGraph::from_tokens(&["a"], &[&["a"]], &[(0, 0), (0, 0)]),
            Err(ModelError::DuplicateEdge(0, 0))
        );
        assert_eq!(
            LabeledGraph::from_tokens(&["a"], &[&[]], &[]),
            Err(ModelError::EmptyLabel(0))
        );
        // self-loops are fine
        assert!(LabeledGraph::from_tokens(&["a"], &[&["a"]], &[(0, 0)]).is_ok());
    }

    #[test]
    fn slots_unroll_left_to_right() {
        let g = LabeledGraph::from_tokens(&["a", "b"], &[&["a", "b"], &["b"]], &[(0, 1), (1, 0)]).unwrap();
        let w = Walk::new(vec![0, 1, 0]).unwrap();
        let slots = w.slots(&g);
        assert_eq!(slots.len(), w.spelled_len(&g));
        assert_eq!(slots[1], LabelSlot { vertex: 0, offset: 2 });
        assert_eq!(slots[3], LabelSlot { vertex: 0, offset: 1 });
    }

    #[test]
    fn empty_query_and_walk_rejected() {
        assert_eq!(QueryString::new(vec![]), Err(ModelError::EmptyQuery));
        assert_eq!(Walk::new(vec![]), Err(ModelError::EmptyWalk));
    }
}
