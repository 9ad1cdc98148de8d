use super::{Alphabet, LabeledGraph, QueryString, Symbol};

/// Shrinks the alphabet to the symbols that occur in `query`.
///
/// Label symbols that never occur in the query can only ever be edited, so
/// all of them are replaced by one placeholder: the query's first symbol.
/// The returned alphabet keeps the original relative order of the query
/// symbols and has at most `|s|` entries.
///
/// Compatibility is preserved. Edit counts are not: a slot rewritten to the
/// placeholder stops costing an edit wherever the query demands that symbol.
pub fn restrict_alphabet(graph: &LabeledGraph, query: &QueryString) -> (LabeledGraph, QueryString) {
    let old = graph.alphabet();
    let kept = query.distinct_symbols();
    let mut remap: Vec<Option<Symbol>> = vec![None; old.len()];
    for (new, &sym) in kept.iter().enumerate() {
        remap[sym.index()] = Some(Symbol(new as u32));
    }
    let placeholder = remap[query.at(1).index()].expect("query symbols are kept");
    let alphabet = Alphabet::new(kept.iter().map(|&s| old.token(s).to_string()))
        .expect("query symbols are distinct, valid tokens");
    let labels = graph
        .labels()
        .iter()
        .map(|label| label.iter().map(|s| remap[s.index()].unwrap_or(placeholder)).collect())
        .collect();
    let graph = graph
        .relabeled(alphabet, labels)
        .expect("relabelling keeps the graph well formed");
    let query = QueryString::new(
        query
            .symbols()
            .iter()
            .map(|s| remap[s.index()].expect("query symbols are kept"))
            .collect(),
    )
    .expect("query stays nonempty");
    (graph, query)
}
