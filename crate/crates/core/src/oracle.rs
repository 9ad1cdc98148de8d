//! Exhaustive reference solvers.
//!
//! Everything here is deliberately exponential and exists to check the fast
//! solvers. Instances are size-capped by [`OracleBudget`]: the exact number
//! of walks of the required spelled length is counted up front (a cheap
//! polynomial DP) and the call is refused when it exceeds the budget.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{Digraph, LabelSlot, LabeledGraph, QueryString, Symbol, Walk};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_walks: u128,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_walks: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {walks} candidate walks, over the budget of {budget}")]
    BudgetExceeded { walks: u128, budget: u128 },
    #[error("spelled length must be at least 1")]
    ZeroLength,
    #[error("set-cover search over {sets} sets exceeds the 2^{max} subset limit")]
    TooManySets { sets: usize, max: usize },
}

/// Best solution found by a cost-minimising oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSolution {
    pub cost: usize,
    pub walk: Walk,
}

/// Number of walks whose labels concatenate to exactly `length` symbols
/// (saturating).
pub fn count_walks(graph: &LabeledGraph, length: usize) -> u128 {
    let n = graph.vertex_count();
    // from[rem][v]: walks starting at v spelling exactly `rem` symbols
    let mut from = vec![vec![0u128; n]; length + 1];
    for rem in 1..=length {
        for v in 0..n {
            let len = graph.label(v).len();
            from[rem][v] = match len.cmp(&rem) {
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Greater => 0,
                std::cmp::Ordering::Less => graph
                    .successors(v)
                    .iter()
                    .fold(0u128, |acc, &u| acc.saturating_add(from[rem - len][u])),
            };
        }
    }
    from[length].iter().fold(0u128, |acc, &c| acc.saturating_add(c))
}

fn check_budget(graph: &LabeledGraph, length: usize, budget: OracleBudget) -> Result<(), OracleError> {
    if length == 0 {
        return Err(OracleError::ZeroLength);
    }
    let walks = count_walks(graph, length);
    if walks > budget.max_walks {
        return Err(OracleError::BudgetExceeded {
            walks,
            budget: budget.max_walks,
        });
    }
    Ok(())
}

/// Lexicographic stream of all walks with spelled length exactly `length`.
pub fn enumerate_walks(graph: &LabeledGraph, length: usize) -> Walks<'_> {
    Walks {
        graph,
        target: length,
        stack: Vec::new(),
        spelled: 0,
        next_root: 0,
    }
}

pub struct Walks<'g> {
    graph: &'g LabeledGraph,
    target: usize,
    /// (vertex, index of the next successor to try)
    stack: Vec<(usize, usize)>,
    spelled: usize,
    next_root: usize,
}

impl Walks<'_> {
    fn current(&self) -> Walk {
        Walk::new(self.stack.iter().map(|&(v, _)| v).collect()).expect("stack is nonempty")
    }

    fn push(&mut self, v: usize) -> bool {
        let len = self.graph.label(v).len();
        if self.spelled + len > self.target {
            return false;
        }
        self.stack.push((v, 0));
        self.spelled += len;
        true
    }

    fn pop(&mut self) {
        if let Some((v, _)) = self.stack.pop() {
            self.spelled -= self.graph.label(v).len();
        }
    }
}

impl Iterator for Walks<'_> {
    type Item = Walk;

    fn next(&mut self) -> Option<Walk> {
        if self.target == 0 {
            return None;
        }
        loop {
            let Some(&(v, next)) = self.stack.last() else {
                if self.next_root >= self.graph.vertex_count() {
                    return None;
                }
                let root = self.next_root;
                self.next_root += 1;
                if self.push(root) && self.spelled == self.target {
                    return Some(self.current());
                }
                continue;
            };
            if self.spelled == self.target {
                self.pop();
                continue;
            }
            let succ = self.graph.successors(v);
            if next < succ.len() {
                let u = succ[next];
                self.stack.last_mut().expect("nonempty").1 += 1;
                if self.push(u) && self.spelled == self.target {
                    return Some(self.current());
                }
            } else {
                self.pop();
            }
        }
    }
}

/// Depth-first search over walks that keeps, for every label slot, the
/// symbol demanded by the query positions mapped into it. A walk is pruned
/// as soon as one slot is demanded two different symbols.
struct RestrictedSearch<'a> {
    graph: &'a LabeledGraph,
    query: &'a [Symbol],
    slot_base: Vec<usize>,
    /// (demanded symbol, number of positions demanding it)
    demand: Vec<Option<(Symbol, usize)>>,
    walk: Vec<usize>,
    pos: usize,
    cost: usize,
    best: Option<OracleSolution>,
    first_only: bool,
}

impl<'a> RestrictedSearch<'a> {
    fn new(graph: &'a LabeledGraph, query: &'a QueryString, first_only: bool) -> Self {
        let mut slot_base = Vec::with_capacity(graph.vertex_count());
        let mut total = 0;
        for label in graph.labels() {
            slot_base.push(total);
            total += label.len();
        }
        RestrictedSearch {
            graph,
            query: query.symbols(),
            slot_base,
            demand: vec![None; total],
            walk: Vec::new(),
            pos: 0,
            cost: 0,
            best: None,
            first_only,
        }
    }

    fn run(mut self) -> Option<OracleSolution> {
        for v in 0..self.graph.vertex_count() {
            if self.visit(v) {
                break;
            }
        }
        self.best
    }

    fn done(&self) -> bool {
        self.first_only && self.best.is_some()
    }

    /// Returns true when the search should stop entirely.
    fn visit(&mut self, v: usize) -> bool {
        let label = self.graph.label(v);
        if self.pos + label.len() > self.query.len() {
            return false;
        }
        let base = self.slot_base[v];
        let mut applied = 0;
        let mut consistent = true;
        for (j, &orig) in label.iter().enumerate() {
            let want = self.query[self.pos + j];
            match &mut self.demand[base + j] {
                slot @ None => {
                    *slot = Some((want, 1));
                    self.cost += usize::from(want != orig);
                }
                Some((have, count)) if *have == want => *count += 1,
                Some(_) => {
                    consistent = false;
                    break;
                }
            }
            applied += 1;
        }

        let mut stop = false;
        let bounded = self.best.as_ref().is_some_and(|b| self.cost >= b.cost);
        if consistent && !bounded {
            self.pos += label.len();
            self.walk.push(v);
            if self.pos == self.query.len() {
                self.best = Some(OracleSolution {
                    cost: self.cost,
                    walk: Walk::new(self.walk.clone()).expect("nonempty"),
                });
                stop = self.first_only;
            } else {
                for &u in self.graph.successors(v) {
                    if self.visit(u) {
                        stop = true;
                        break;
                    }
                }
            }
            self.walk.pop();
            self.pos -= label.len();
        }

        for j in (0..applied).rev() {
            let entry = &mut self.demand[base + j];
            let (sym, count) = entry.as_mut().expect("applied above");
            *count -= 1;
            if *count == 0 {
                self.cost -= usize::from(*sym != label[j]);
                *entry = None;
            }
        }
        stop || self.done()
    }
}

/// A walk compatible with `query`: every label slot on the walk is demanded
/// a single symbol, so some relabelling spells the query exactly. Returns
/// the lexicographically smallest such walk.
pub fn oracle_compatible(
    graph: &LabeledGraph,
    query: &QueryString,
    budget: OracleBudget,
) -> Result<Option<Walk>, OracleError> {
    check_budget(graph, query.len(), budget)?;
    Ok(RestrictedSearch::new(graph, query, true).run().map(|s| s.walk))
}

/// Minimum number of label substitutions over all compatible walks.
pub fn oracle_min_edits_restricted(
    graph: &LabeledGraph,
    query: &QueryString,
    budget: OracleBudget,
) -> Result<Option<OracleSolution>, OracleError> {
    check_budget(graph, query.len(), budget)?;
    Ok(RestrictedSearch::new(graph, query, false).run())
}

/// Minimum label + query substitutions over all walks of spelled length |s|.
pub fn oracle_min_edits_both(
    graph: &LabeledGraph,
    query: &QueryString,
    budget: OracleBudget,
) -> Result<Option<OracleSolution>, OracleError> {
    check_budget(graph, query.len(), budget)?;
    let mut best: Option<OracleSolution> = None;
    for walk in enumerate_walks(graph, query.len()) {
        let cost = both_sides_cost(graph, query, &walk);
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(OracleSolution { cost, walk });
        }
    }
    Ok(best)
}

/// Cheapest repair of one walk when both sides may be edited: every slot
/// independently chooses its final symbol.
fn both_sides_cost(graph: &LabeledGraph, query: &QueryString, walk: &Walk) -> usize {
    let mut groups: HashMap<LabelSlot, Vec<Symbol>> = HashMap::new();
    for (i, slot) in walk.slots(graph).into_iter().enumerate() {
        groups.entry(slot).or_default().push(query.symbols()[i]);
    }
    groups
        .into_iter()
        .map(|(slot, demanded)| {
            let original = graph.label(slot.vertex)[slot.offset - 1];
            graph
                .alphabet()
                .symbols()
                .map(|cand| usize::from(cand != original) + demanded.iter().filter(|&&d| d != cand).count())
                .min()
                .expect("alphabet is nonempty")
        })
        .sum()
}

/// Minimum Hamming distance between `query` and σ(p) over all walks of
/// spelled length |s|: the query-only edit cost.
pub fn oracle_min_edits_query_only(
    graph: &LabeledGraph,
    query: &QueryString,
    budget: OracleBudget,
) -> Result<Option<OracleSolution>, OracleError> {
    check_budget(graph, query.len(), budget)?;
    let mut best: Option<OracleSolution> = None;
    for walk in enumerate_walks(graph, query.len()) {
        let cost = walk
            .slots(graph)
            .iter()
            .zip(query.symbols())
            .filter(|(slot, &want)| graph.label(slot.vertex)[slot.offset - 1] != want)
            .count();
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(OracleSolution { cost, walk });
        }
    }
    Ok(best)
}

/// A simple path on exactly `h` vertices, lexicographically smallest.
pub fn oracle_hpath(graph: &Digraph, h: usize) -> Option<Vec<usize>> {
    fn extend(graph: &Digraph, h: usize, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if path.len() == h {
            return true;
        }
        let last = *path.last().expect("path is seeded");
        for &u in graph.successors(last) {
            if !used[u] {
                used[u] = true;
                path.push(u);
                if extend(graph, h, path, used) {
                    return true;
                }
                path.pop();
                used[u] = false;
            }
        }
        false
    }

    if h == 0 || h > graph.vertex_count() {
        return None;
    }
    let mut used = vec![false; graph.vertex_count()];
    let mut path = Vec::with_capacity(h);
    for start in 0..graph.vertex_count() {
        used[start] = true;
        path.push(start);
        if extend(graph, h, &mut path, &mut used) {
            return Some(path);
        }
        path.pop();
        used[start] = false;
    }
    None
}

const MAX_SET_COVER_SETS: usize = 24;

/// Exact minimum set cover by enumerating subcollections in increasing
/// size. Elements are `1..=universe`; the result lists 0-based set indices.
/// `Ok(None)` when the sets do not cover the universe.
pub fn oracle_set_cover(universe: usize, sets: &[Vec<usize>]) -> Result<Option<Vec<usize>>, OracleError> {
    if sets.len() > MAX_SET_COVER_SETS {
        return Err(OracleError::TooManySets {
            sets: sets.len(),
            max: MAX_SET_COVER_SETS,
        });
    }
    let full: u64 = if universe == 0 { 0 } else { (1u64 << universe) - 1 };
    let masks: Vec<u64> = sets
        .iter()
        .map(|s| {
            s.iter()
                .filter(|&&e| (1..=universe).contains(&e))
                .fold(0u64, |m, &e| m | (1 << (e - 1)))
        })
        .collect();
    if masks.iter().fold(0, |a, m| a | m) != full {
        return Ok(None);
    }
    fn choose(masks: &[u64], full: u64, k: usize, from: usize, covered: u64, picked: &mut Vec<usize>) -> bool {
        if picked.len() == k {
            return covered == full;
        }
        for i in from..masks.len() {
            if masks.len() - i < k - picked.len() {
                break;
            }
            picked.push(i);
            if choose(masks, full, k, i + 1, covered | masks[i], picked) {
                return true;
            }
            picked.pop();
        }
        false
    }

    let mut picked = Vec::new();
    for k in 0..=sets.len() {
        if choose(&masks, full, k, 0, 0, &mut picked) {
            return Ok(Some(picked));
        }
    }
    unreachable!("the full collection covers the universe")
}
