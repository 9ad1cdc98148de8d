use super::{Coloring, FptError, RFunction};
use crate::model::{LabeledGraph, QueryString, Symbol, Walk};

/// The table `M_r[i][v]` for one (coloring, r) pair.
///
/// `M[1][v]` holds iff `r(c(v)) = s[1]`; for `i ≥ 2`, `M[i][v]` holds iff
/// `r(c(v)) = s[i]` and some predecessor `u` of `v` has `M[i-1][u]`.
/// Only `r ∘ c` matters, so the table is built from that per-vertex demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTable {
    rows: Vec<Vec<bool>>,
}

impl DpTable {
    pub fn compute(
        graph: &LabeledGraph,
        query: &QueryString,
        coloring: &Coloring,
        r: &RFunction,
    ) -> Result<Self, FptError> {
        check_unit_labels(graph)?;
        if coloring.vertex_count() != graph.vertex_count() {
            return Err(FptError::ColoringSize {
                expected: graph.vertex_count(),
                found: coloring.vertex_count(),
            });
        }
        if r.k() != coloring.k() {
            return Err(FptError::RFunctionSize {
                expected: coloring.k(),
                found: r.k(),
            });
        }
        let demand: Vec<Symbol> = (0..graph.vertex_count()).map(|v| r.symbol(coloring.color(v))).collect();
        Ok(Self::from_demand(graph, query.symbols(), &demand))
    }

    /// Fills the table; stops early once a row is all zero.
    pub(crate) fn from_demand(graph: &LabeledGraph, query: &[Symbol], demand: &[Symbol]) -> Self {
        let n = graph.vertex_count();
        let mut rows = Vec::with_capacity(query.len());
        rows.push(demand.iter().map(|&d| d == query[0]).collect::<Vec<bool>>());
        for &want in &query[1..] {
            let prev = rows.last().expect("first row pushed");
            if !prev.iter().any(|&b| b) {
                rows.push(vec![false; n]);
                continue;
            }
            let mut row = vec![false; n];
            for u in (0..n).filter(|&u| prev[u]) {
                for &v in graph.successors(u) {
                    if demand[v] == want {
                        row[v] = true;
                    }
                }
            }
            rows.push(row);
        }
        DpTable { rows }
    }

    /// `M[i][v]`, `i` 1-based.
    pub fn get(&self, i: usize, v: usize) -> bool {
        self.rows[i - 1][v]
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Rebuilds a walk ending in the smallest `v` with `M[|s|][v] = 1`,
    /// stepping back through the smallest qualifying predecessor.
    pub fn walk(&self, graph: &LabeledGraph) -> Option<Walk> {
        let last_row = self.rows.last()?;
        let mut v = last_row.iter().position(|&b| b)?;
        let mut rev = vec![v];
        for i in (0..self.rows.len() - 1).rev() {
            v = *graph
                .predecessors(v)
                .iter()
                .find(|&&u| self.rows[i][u])
                .expect("set entries have a set predecessor");
            rev.push(v);
        }
        rev.reverse();
        Some(Walk::new(rev).expect("nonempty"))
    }
}

pub(crate) fn check_unit_labels(graph: &LabeledGraph) -> Result<(), FptError> {
    match (0..graph.vertex_count()).find(|&v| graph.label(v).len() != 1) {
        Some(v) => Err(FptError::NonUnitLabel(v)),
        None => Ok(()),
    }
}

/// Runs the recurrence for one coloring and `r`, returning a walk that
/// is compatible with the query and satisfies `r`, if any.
pub fn dp_compatible_under(
    graph: &LabeledGraph,
    query: &QueryString,
    coloring: &Coloring,
    r: &RFunction,
) -> Result<Option<Walk>, FptError> {
    Ok(DpTable::compute(graph, query, coloring, r)?.walk(graph))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_position_picks_matching_vertex() {
        let g = LabeledGraph::from_tokens(&["a", "b"], &[&["b"], &["a"], &["a"]], &[]).unwrap();
        let q = QueryString::from_tokens(g.alphabet(), &["a"]).unwrap();
        let coloring = Coloring::new(vec![0, 1, 1], 2).unwrap();
        let a = g.alphabet().symbol("a").unwrap();
        let b = g.alphabet().symbol("b").unwrap();
        let r = RFunction::new(vec![b, a]);
        let w = dp_compatible_under(&g, &q, &coloring, &r).unwrap().unwrap();
        assert_eq!(w.vertices(), [1]);
        let none = RFunction::new(vec![b, b]);
        assert_eq!(dp_compatible_under(&g, &q, &coloring, &none).unwrap(), None);
    }

    #[test]
    fn self_loop_relabelled_by_r() {
        let g = LabeledGraph::from_tokens(&["a", "b"], &[&["b"]], &[(0, 0)]).unwrap();
        let q = QueryString::from_tokens(g.alphabet(), &["a", "a"]).unwrap();
        let r = RFunction::new(vec![g.alphabet().symbol("a").unwrap()]);
        let w = dp_compatible_under(&g, &q, &Coloring::uniform(1), &r).unwrap().unwrap();
        assert_eq!(w.vertices(), [0, 0]);
    }

    #[test]
    fn rejects_long_labels() {
        let g = LabeledGraph::from_tokens(&["a"], &[&["a", "a"]], &[]).unwrap();
        let q = QueryString::from_tokens(g.alphabet(), &["a"]).unwrap();
        let r = RFunction::new(vec![g.alphabet().symbol("a").unwrap()]);
        assert_eq!(
            dp_compatible_under(&g, &q, &Coloring::uniform(1), &r),
            Err(FptError::NonUnitLabel(0))
        );
    }
}
