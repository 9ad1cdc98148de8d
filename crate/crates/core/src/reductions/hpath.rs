use super::{HPathInstance, ReductionArtifact, ReductionError, ReductionSource, VertexOrigin};
use crate::model::{verify_witness, Alphabet, LabeledGraph, MatchWitness, QueryString, Symbol, Walk};

/// Copies the source graph with the distinct unit label `x_i` on vertex
/// `i` and asks for `y_1 … y_h`, all fresh symbols. A compatible walk has
/// `h` vertices that must take `h` distinct labels, so it is a simple path.
pub fn reduce_hpath_unit(instance: &HPathInstance) -> ReductionArtifact {
    let n = instance.graph.vertex_count();
    let h = instance.h;
    let tokens = (1..=n).map(|i| format!("x{i}")).chain((1..=h).map(|j| format!("y{j}")));
    let alphabet = Alphabet::new(tokens).expect("generated tokens are distinct");
    let labels = (0..n).map(|i| vec![Symbol(i as u32)]).collect();
    let graph =
        LabeledGraph::new(alphabet, labels, instance.graph.edges().to_vec()).expect("source graph is well formed");
    let query = QueryString::new((0..h).map(|j| Symbol((n + j) as u32)).collect()).expect("h >= 1");
    ReductionArtifact {
        target_graph: graph,
        target_query: query,
        back_map: (0..n).map(VertexOrigin::Source).collect(),
        source: ReductionSource::HPathUnit(instance.clone()),
    }
}

/// Same graph over `{0, 1}`: every vertex is labeled `0^h` and the query is
/// the `h` blocks `s_1 … s_h`, where `s_l` has its single `1` at offset `l`.
/// A vertex used for two different blocks would need two different labels.
pub fn reduce_hpath_binary(instance: &HPathInstance) -> ReductionArtifact {
    let n = instance.graph.vertex_count();
    let h = instance.h;
    let alphabet = Alphabet::new(["0", "1"]).expect("two tokens");
    let (zero, one) = (Symbol(0), Symbol(1));
    let labels = vec![vec![zero; h]; n];
    let graph =
        LabeledGraph::new(alphabet, labels, instance.graph.edges().to_vec()).expect("source graph is well formed");
    let mut query = Vec::with_capacity(h * h);
    for l in 0..h {
        query.extend((0..h).map(|i| if i == l { one } else { zero }));
    }
    ReductionArtifact {
        target_graph: graph,
        target_query: QueryString::new(query).expect("h >= 1"),
        back_map: (0..n).map(VertexOrigin::Source).collect(),
        source: ReductionSource::HPathBinary(instance.clone()),
    }
}

/// Maps a walk compatible with the constructed query back to a simple path
/// on `h` vertices of the source graph.
pub fn extract_hpath(artifact: &ReductionArtifact, walk: &Walk) -> Result<Vec<usize>, ReductionError> {
    let instance = match &artifact.source {
        ReductionSource::HPathUnit(inst) | ReductionSource::HPathBinary(inst) => inst,
        ReductionSource::SetCover { .. } => return Err(ReductionError::WrongArtifact),
    };
    let (graph, query) = (&artifact.target_graph, &artifact.target_query);
    let witness = MatchWitness::with_label_edits(graph, query, walk.clone())?;
    verify_witness(graph, query, &witness)?;
    if walk.len() != instance.h {
        return Err(ReductionError::WalkLength {
            expected: instance.h,
            found: walk.len(),
        });
    }
    let path = walk
        .vertices()
        .iter()
        .map(|&v| match artifact.back_map.get(v) {
            Some(VertexOrigin::Source(u)) => Ok(*u),
            _ => Err(ReductionError::ProvenanceGap(v)),
        })
        .collect::<Result<Vec<usize>, _>>()?;
    if !instance.graph.is_simple_path(&path) {
        return Err(ReductionError::NotSimple(path));
    }
    Ok(path)
}
