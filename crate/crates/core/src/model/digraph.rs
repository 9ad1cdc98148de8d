use super::ModelError;

/// Unlabeled directed graph, the source side of the h-Path constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, ModelError> {
        let mut out_adj = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(ModelError::DanglingEdge(u, v));
            }
            if out_adj[u].contains(&v) {
                return Err(ModelError::DuplicateEdge(u, v));
            }
            out_adj[u].push(v);
        }
        for list in &mut out_adj {
            list.sort_unstable();
        }
        Ok(Digraph {
            vertex_count,
            edges,
            out_adj,
        })
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Self {
        Digraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("cycle is well formed")
    }

    /// Vertex 0 with an edge to every other vertex.
    pub fn out_star(n: usize) -> Self {
        Digraph::new(n, (1..n).map(|i| (0, i)).collect()).expect("star is well formed")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    /// True when `path` visits distinct vertices along edges.
    pub fn is_simple_path(&self, path: &[usize]) -> bool {
        let mut seen = vec![false; self.vertex_count];
        for &v in path {
            if v >= self.vertex_count || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        path.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }
}
