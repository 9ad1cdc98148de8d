use std::collections::BTreeSet;

use super::{ReductionArtifact, ReductionError, ReductionSource, SetCoverInstance, VertexOrigin};
use crate::model::{verify_witness, Alphabet, EditTarget, LabeledGraph, MatchWitness, QueryString, Symbol, Walk};
use crate::oracle::oracle_set_cover;

/// Largest collection for which the optimum is computed to tag the artifact.
const TAG_MAX_SETS: usize = 20;

const HUB: usize = 0;

/// Builds the restricted-matching instance whose optimum edit count equals
/// the minimum cover size (when that size is below `n`).
///
/// Vertex order: `v_0`, then `v_1 … v_m`, then the element vertices
/// `v_{i,l}` set by set. `σ(v_0) = x_0`, `σ(v_i) = x_i` and `σ(v_{i,l}) = y_j`
/// for the `l`-th element `u_j` of `S_i`. Edges: all `v_0 → v_i`, then for
/// each set the pairs `v_i → v_{i,l}`, `v_{i,l} → v_0`. The query is
/// `x_0 z y_1 x_0 z y_2 … x_0 z y_n`.
pub fn reduce_setcover(instance: &SetCoverInstance) -> ReductionArtifact {
    let (n, m) = (instance.n, instance.m());
    let tokens = (0..=m)
        .map(|i| format!("x{i}"))
        .chain((1..=n).map(|j| format!("y{j}")))
        .chain(std::iter::once("z".to_string()));
    let alphabet = Alphabet::new(tokens).expect("generated tokens are distinct");
    let x = |i: usize| Symbol(i as u32);
    let y = |j: usize| Symbol((m + j) as u32);
    let z = Symbol((m + n + 1) as u32);

    let mut labels: Vec<Vec<Symbol>> = (0..=m).map(|i| vec![x(i)]).collect();
    let mut back_map: Vec<VertexOrigin> = std::iter::once(VertexOrigin::Hub)
        .chain((0..m).map(VertexOrigin::Set))
        .collect();
    let mut edges: Vec<(usize, usize)> = (1..=m).map(|i| (HUB, i)).collect();
    for (i, set) in instance.sets.iter().enumerate() {
        for (slot, &element) in set.iter().enumerate() {
            let v = labels.len();
            labels.push(vec![y(element)]);
            back_map.push(VertexOrigin::Element { set: i, slot, element });
            edges.push((i + 1, v));
            edges.push((v, HUB));
        }
    }
    let graph = LabeledGraph::new(alphabet, labels, edges).expect("construction is well formed");
    let query = (1..=n).flat_map(|j| [x(0), z, y(j)]).collect();
    let optimum_is_n = (m <= TAG_MAX_SETS)
        .then(|| oracle_set_cover(n, &instance.sets).ok().flatten())
        .flatten()
        .map(|cover| cover.len() == n);
    ReductionArtifact {
        target_graph: graph,
        target_query: QueryString::new(query).expect("n >= 1"),
        back_map,
        source: ReductionSource::SetCover {
            instance: instance.clone(),
            optimum_is_n,
        },
    }
}

/// Recovers a cover of size at most the witness cost from a restricted
/// matching of the constructed query.
///
/// The witness is first normalized: every round `x_0 z y_j` whose element
/// vertex was relabelled is rerouted through a set that contains `u_j`,
/// preferring sets the walk already pays for. The result is a walk whose
/// only edits turn set vertices into `z`, at no greater cost, and the cover
/// is read off those edits. Walks that do not start at `v_0` are only
/// possible when the cost is at least `n`; then one set per element is
/// returned.
pub fn extract_cover(artifact: &ReductionArtifact, witness: &MatchWitness) -> Result<Vec<usize>, ReductionError> {
    let ReductionSource::SetCover { instance, .. } = &artifact.source else {
        return Err(ReductionError::WrongArtifact);
    };
    let (graph, query) = (&artifact.target_graph, &artifact.target_query);
    let cost = verify_witness(graph, query, witness)?;
    if !witness.query_edits.is_empty() {
        return Err(ReductionError::QueryEdited);
    }
    let containing = |j: usize| -> Vec<usize> { (0..instance.m()).filter(|&i| instance.sets[i].contains(&j)).collect() };

    let walk = witness.walk.vertices();
    if walk[0] != HUB {
        if cost < instance.n {
            return Err(ReductionError::Normalization(format!(
                "walk starts at vertex {} with cost {cost} < n",
                walk[0]
            )));
        }
        let mut cover = BTreeSet::new();
        for j in 1..=instance.n {
            let Some(&i) = containing(j).first() else {
                return Err(ReductionError::Normalization(format!("no set contains u{j}")));
            };
            cover.insert(i);
        }
        return Ok(cover.into_iter().collect());
    }

    let mut paid = BTreeSet::new();
    let mut rounds = Vec::with_capacity(instance.n);
    for j in 1..=instance.n {
        let (sv, ev) = (walk[3 * j - 2], walk[3 * j - 1]);
        match (artifact.back_map[sv], artifact.back_map[ev]) {
            (VertexOrigin::Set(a), VertexOrigin::Element { set, element, .. }) if set == a => {
                paid.insert(a);
                rounds.push((a, element));
            }
            _ => return Err(ReductionError::Normalization(format!("round {j} does not pass v_i, v_(i,l)"))),
        }
    }
    let mut route = Vec::with_capacity(instance.n);
    for (j, &(a, element)) in (1..).zip(&rounds) {
        let set = if element == j {
            a
        } else {
            let options = containing(j);
            match options.iter().find(|i| paid.contains(i)).or(options.first()) {
                Some(&i) => i,
                None => return Err(ReductionError::Normalization(format!("no set contains u{j}"))),
            }
        };
        route.push((set, j));
    }

    let offsets: Vec<usize> = instance
        .sets
        .iter()
        .scan(1 + instance.m(), |next, set| {
            let start = *next;
            *next += set.len();
            Some(start)
        })
        .collect();
    let mut normalized = Vec::with_capacity(3 * instance.n);
    for &(set, j) in &route {
        let slot = instance.sets[set].binary_search(&j).expect("set contains the element");
        normalized.extend([HUB, set + 1, offsets[set] + slot]);
    }
    let normalized = MatchWitness::with_label_edits(graph, query, Walk::new(normalized)?)?;
    let normalized_cost = verify_witness(graph, query, &normalized)?;
    if normalized_cost > cost {
        return Err(ReductionError::Normalization(format!(
            "normalized cost {normalized_cost} exceeds {cost}"
        )));
    }
    let z = Symbol(graph.alphabet().len() as u32 - 1);
    let mut cover = Vec::new();
    for op in &normalized.graph_edits {
        match (op.target, op.new_symbol) {
            (EditTarget::Label(slot), sym) if sym == z => match artifact.back_map[slot.vertex] {
                VertexOrigin::Set(i) => cover.push(i),
                _ => return Err(ReductionError::Normalization("edit outside set vertices".into())),
            },
            _ => return Err(ReductionError::Normalization("edit other than to z".into())),
        }
    }
    cover.sort_unstable();
    if !instance.is_cover(&cover) {
        return Err(ReductionError::Normalization("selected sets do not cover U".into()));
    }
    Ok(cover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_min_edits_restricted, OracleBudget};
    use crate::poly::is_dag;

    fn example() -> ReductionArtifact {
        reduce_setcover(&SetCoverInstance::worked_example())
    }

    #[test]
    fn worked_example_shape() {
        let a = example();
        assert_eq!(a.target_graph.vertex_count(), 11);
        assert_eq!(a.target_graph.edge_count(), 17);
        assert_eq!(a.target_query.len(), 12);
        assert_eq!(
            a.target_graph.alphabet().render(a.target_query.symbols()),
            "x0 z y1 x0 z y2 x0 z y3 x0 z y4"
        );
        let labels: Vec<String> = (0..11)
            .map(|v| a.target_graph.alphabet().render(a.target_graph.label(v)))
            .collect();
        assert_eq!(labels, ["x0", "x1", "x2", "x3", "y1", "y3", "y4", "y2", "y3", "y2", "y4"]);
        assert_eq!(
            a.source,
            ReductionSource::SetCover {
                instance: SetCoverInstance::worked_example(),
                optimum_is_n: Some(false)
            }
        );
        let (rest, _) = a.target_graph.without_vertex(0);
        assert!(is_dag(&rest).is_some());
    }

    #[test]
    fn worked_example_optimal_witness() {
        let a = example();
        let walk = Walk::new(vec![0, 1, 4, 0, 2, 7, 0, 1, 5, 0, 1, 6]).unwrap();
        let w = MatchWitness::with_label_edits(&a.target_graph, &a.target_query, walk).unwrap();
        assert_eq!(w.cost(), 2);
        assert_eq!(extract_cover(&a, &w), Ok(vec![0, 1]));
    }

    #[test]
    fn element_edits_are_normalized_away() {
        let a = example();
        // round 2 relabels v_(1,2) from y3 to y2; round 3 takes u3 from S2
        let walk = Walk::new(vec![0, 1, 4, 0, 1, 5, 0, 2, 8, 0, 1, 6]).unwrap();
        let w = MatchWitness::with_label_edits(&a.target_graph, &a.target_query, walk).unwrap();
        assert_eq!(w.cost(), 3);
        assert_eq!(extract_cover(&a, &w), Ok(vec![0, 1]));
    }

    #[test]
    fn single_set_instance() {
        let inst = SetCoverInstance::new(2, vec![vec![1, 2]]).unwrap();
        let a = reduce_setcover(&inst);
        let best = oracle_min_edits_restricted(&a.target_graph, &a.target_query, OracleBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(best.cost, 1);
        let w = MatchWitness::with_label_edits(&a.target_graph, &a.target_query, best.walk).unwrap();
        assert_eq!(extract_cover(&a, &w), Ok(vec![0]));
    }

    #[test]
    fn rejects_query_edits_and_foreign_artifacts() {
        let a = example();
        let walk = Walk::new(vec![0, 1, 4, 0, 2, 7, 0, 1, 5, 0, 1, 6]).unwrap();
        let w = MatchWitness::with_query_edits(&a.target_graph, &a.target_query, walk).unwrap();
        assert_eq!(extract_cover(&a, &w), Err(ReductionError::QueryEdited));

        let h = super::super::reduce_hpath_unit(
            &super::super::HPathInstance::new(crate::model::Digraph::cycle(2), 1).unwrap(),
        );
        let w1 = MatchWitness::with_label_edits(&h.target_graph, &h.target_query, Walk::new(vec![0]).unwrap()).unwrap();
        assert_eq!(extract_cover(&h, &w1), Err(ReductionError::WrongArtifact));
    }

    #[test]
    fn optimum_equal_to_n_is_tagged() {
        let a = reduce_setcover(&SetCoverInstance::new(2, vec![vec![1], vec![2]]).unwrap());
        assert!(matches!(a.source, ReductionSource::SetCover { optimum_is_n: Some(true), .. }));
    }
}
