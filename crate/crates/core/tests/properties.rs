use proptest::collection::vec;
use proptest::prelude::*;

use strgraph_core::fpt::{
    canonical_colorings, fpt_compatible, Coloring, DpTable, FptConfig, FptDecision, RFunction,
};
use strgraph_core::gen::alphabet_of_size;
use strgraph_core::model::{
    parse_graph, parse_query, restrict_alphabet, serialize_graph, serialize_query, spell, verify_witness, Digraph,
    LabeledGraph, MatchWitness, QueryString, Symbol, WitnessDocument,
};
use strgraph_core::oracle::{
    count_walks, enumerate_walks, oracle_compatible, oracle_hpath, oracle_min_edits_both, oracle_min_edits_query_only,
    oracle_min_edits_restricted, oracle_set_cover, OracleBudget,
};
use strgraph_core::poly::{exact_match, is_dag, min_edits_dag, min_edits_query_only, EditMode};
use strgraph_core::reductions::{
    extract_cover, extract_hpath, reduce_hpath_unit, reduce_setcover, HPathInstance, SetCoverInstance,
};

#[derive(Clone, Copy, Debug)]
struct Limits {
    max_n: usize,
    alpha: usize,
    max_label: usize,
    max_q: usize,
    dag: bool,
}

const SMALL: Limits = Limits {
    max_n: 6,
    alpha: 3,
    max_label: 2,
    max_q: 5,
    dag: false,
};

fn instance(l: Limits) -> impl Strategy<Value = (LabeledGraph, QueryString)> {
    (1..=l.max_n)
        .prop_flat_map(move |n| {
            (
                vec(vec(0..l.alpha as u32, 1..=l.max_label), n),
                vec(proptest::bool::weighted(0.35), n * n),
                vec(0..l.alpha as u32, 1..=l.max_q),
            )
        })
        .prop_map(move |(labels, adj, query)| {
            let n = labels.len();
            let edges = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| adj[u * n + v] && (!l.dag || u < v))
                .collect();
            let labels = labels.into_iter().map(|l| l.into_iter().map(Symbol).collect()).collect();
            let g = LabeledGraph::new(alphabet_of_size(l.alpha), labels, edges).unwrap();
            let q = QueryString::new(query.into_iter().map(Symbol).collect()).unwrap();
            (g, q)
        })
}

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), vec(proptest::bool::weighted(0.3), n * n)))
        .prop_map(|(n, adj)| {
            let edges = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v && adj[u * n + v])
                .collect();
            Digraph::new(n, edges).unwrap()
        })
}

fn set_cover(max_n: usize, max_m: usize) -> impl Strategy<Value = SetCoverInstance> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| (Just(n), vec(vec(1..=n, 1..=n), m)))
        .prop_map(|(n, sets)| SetCoverInstance::new(n, sets).unwrap())
}

fn budget() -> OracleBudget {
    OracleBudget::default()
}

proptest! {
    #[test]
    fn spelled_length_matches_slots((g, q) in instance(SMALL)) {
        for walk in enumerate_walks(&g, q.len()) {
            prop_assert_eq!(spell(&g, &walk).unwrap().len(), q.len());
            prop_assert_eq!(walk.slots(&g).len(), q.len());
        }
        prop_assert_eq!(enumerate_walks(&g, q.len()).count() as u128, count_walks(&g, q.len()));
    }

    #[test]
    fn exact_match_iff_zero_hamming((g, q) in instance(SMALL)) {
        let oracle = oracle_min_edits_query_only(&g, &q, budget()).unwrap().map(|s| s.cost);
        match exact_match(&g, &q) {
            Some(w) => {
                prop_assert_eq!(verify_witness(&g, &q, &w), Ok(0));
                prop_assert_eq!(spell(&g, &w.walk).unwrap(), q.symbols().to_vec());
                prop_assert_eq!(oracle, Some(0));
            }
            None => prop_assert_ne!(oracle, Some(0)),
        }
    }

    #[test]
    fn query_only_dp_matches_oracle((g, q) in instance(SMALL)) {
        let dp = min_edits_query_only(&g, &q);
        let oracle = oracle_min_edits_query_only(&g, &q, budget()).unwrap();
        prop_assert_eq!(dp.as_ref().map(|m| m.cost), oracle.map(|s| s.cost));
        if let Some(m) = dp {
            prop_assert_eq!(verify_witness(&g, &q, &m.witness), Ok(m.cost));
            prop_assert!(m.witness.graph_edits.is_empty());
        }
    }

    #[test]
    fn dag_modes_match_oracles((g, q) in instance(Limits { dag: true, ..SMALL })) {
        prop_assert!(is_dag(&g).is_some());
        let restricted = oracle_min_edits_restricted(&g, &q, budget()).unwrap().map(|s| s.cost);
        let both = oracle_min_edits_both(&g, &q, budget()).unwrap().map(|s| s.cost);
        prop_assert_eq!(restricted, both);
        for mode in [EditMode::LabelsOnly, EditMode::QueryOnly, EditMode::Both] {
            let m = min_edits_dag(&g, &q, mode).unwrap();
            prop_assert_eq!(m.as_ref().map(|m| m.cost), restricted);
            if let Some(m) = m {
                prop_assert_eq!(verify_witness(&g, &q, &m.witness), Ok(m.cost));
            }
        }
    }

    #[test]
    fn cost_ordering((g, q) in instance(SMALL)) {
        let compat = oracle_compatible(&g, &q, budget()).unwrap();
        let restricted = oracle_min_edits_restricted(&g, &q, budget()).unwrap();
        let both = oracle_min_edits_both(&g, &q, budget()).unwrap();
        let query_only = oracle_min_edits_query_only(&g, &q, budget()).unwrap();
        prop_assert_eq!(compat.is_some(), restricted.is_some());
        prop_assert_eq!(both.is_some(), query_only.is_some());
        if let Some(b) = &both {
            prop_assert!(b.cost <= query_only.as_ref().unwrap().cost);
            if let Some(r) = &restricted {
                prop_assert!(b.cost <= r.cost);
            }
        }
        if let Some(walk) = compat {
            let w = MatchWitness::with_label_edits(&g, &q, walk).unwrap();
            prop_assert!(verify_witness(&g, &q, &w).is_ok());
        }
        if let Some(r) = restricted {
            let w = MatchWitness::with_label_edits(&g, &q, r.walk).unwrap();
            prop_assert_eq!(verify_witness(&g, &q, &w), Ok(r.cost));
        }
        if let Some(b) = both {
            let w = MatchWitness::cheapest(&g, &q, b.walk).unwrap();
            prop_assert_eq!(verify_witness(&g, &q, &w), Ok(b.cost));
        }
    }

    #[test]
    fn deterministic_fpt_matches_oracle(
        (g, q) in instance(Limits { max_n: 6, alpha: 3, max_label: 1, max_q: 4, dag: false })
    ) {
        let oracle = oracle_compatible(&g, &q, budget()).unwrap();
        let out = fpt_compatible(&g, &q, &FptConfig::deterministic()).unwrap();
        prop_assert_eq!(out.decision.is_yes(), oracle.is_some());
        prop_assert_eq!(out.witness.is_some(), oracle.is_some());
        if let Some(w) = out.witness {
            prop_assert!(verify_witness(&g, &q, &w).is_ok());
        }
    }

    #[test]
    fn randomized_fpt_is_sound(
        (g, q) in instance(Limits { max_n: 6, alpha: 3, max_label: 1, max_q: 4, dag: false }),
        seed in any::<u64>(),
    ) {
        let oracle = oracle_compatible(&g, &q, budget()).unwrap();
        let out = fpt_compatible(&g, &q, &FptConfig::randomized(0.1, seed).unwrap()).unwrap();
        match out.decision {
            FptDecision::Yes(_) => {
                prop_assert!(oracle.is_some());
                prop_assert!(verify_witness(&g, &q, out.witness.as_ref().unwrap()).is_ok());
            }
            FptDecision::ProbablyNo { delta } => prop_assert_eq!(delta, 0.1),
            FptDecision::No => prop_assert!(false, "randomized mode never answers a definitive no"),
        }
    }

    #[test]
    fn dp_rows_follow_the_recurrence(
        (g, q) in instance(Limits { max_n: 6, alpha: 3, max_label: 1, max_q: 5, dag: false }),
        k in 1usize..=4,
        raw_colors in vec(0u16..4, 6),
        raw_r in vec(0u32..3, 4),
    ) {
        let n = g.vertex_count();
        let coloring = Coloring::new(raw_colors[..n].iter().map(|&c| c % k as u16).collect(), k).unwrap();
        let r = RFunction::new(raw_r[..k].iter().map(|&s| Symbol(s)).collect());
        let table = DpTable::compute(&g, &q, &coloring, &r).unwrap();
        let demand = |v: usize| r.symbol(coloring.color(v));
        prop_assert_eq!(table.rows(), q.len());
        for v in 0..n {
            prop_assert_eq!(table.get(1, v), demand(v) == q.at(1));
        }
        for i in 2..=q.len() {
            for v in 0..n {
                let expected = demand(v) == q.at(i) && g.predecessors(v).iter().any(|&u| table.get(i - 1, u));
                prop_assert_eq!(table.get(i, v), expected);
            }
        }
        if let Some(walk) = table.walk(&g) {
            for (i, &v) in walk.vertices().iter().enumerate() {
                prop_assert_eq!(demand(v), q.at(i + 1));
            }
            let w = MatchWitness::with_label_edits(&g, &q, walk).unwrap();
            prop_assert!(verify_witness(&g, &q, &w).is_ok());
        }
    }

    #[test]
    fn restriction_preserves_compatibility(
        (g, q) in instance(Limits { max_n: 6, alpha: 6, max_label: 2, max_q: 4, dag: false })
    ) {
        let (rg, rq) = restrict_alphabet(&g, &q);
        prop_assert!(rg.alphabet().len() <= q.len());
        prop_assert_eq!(rg.alphabet().render(rq.symbols()), g.alphabet().render(q.symbols()));
        let before = oracle_compatible(&g, &q, budget()).unwrap().is_some();
        let after = oracle_compatible(&rg, &rq, budget()).unwrap().is_some();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn text_formats_round_trip((g, q) in instance(SMALL)) {
        let g2 = parse_graph(&serialize_graph(&g)).unwrap();
        prop_assert_eq!(&g2, &g);
        prop_assert_eq!(parse_query(&serialize_query(&q, g.alphabet()), g.alphabet()).unwrap(), q.clone());
        if let Some(walk) = enumerate_walks(&g, q.len()).next() {
            let w = MatchWitness::cheapest(&g, &q, walk).unwrap();
            let doc = WitnessDocument::from_json(&w.to_json(&g, &q)).unwrap();
            let back = doc.into_witness(&g).unwrap();
            prop_assert_eq!(&back, &w);
            prop_assert_eq!(verify_witness(&g, &q, &back), Ok(w.cost()));
        }
    }

    #[test]
    fn setcover_structure(inst in set_cover(6, 6)) {
        let a = reduce_setcover(&inst);
        let total: usize = inst.sets.iter().map(Vec::len).sum();
        prop_assert_eq!(a.target_graph.vertex_count(), 1 + inst.m() + total);
        prop_assert_eq!(a.target_graph.edge_count(), inst.m() + 2 * total);
        prop_assert_eq!(a.target_query.len(), 3 * inst.n);
        let (rest, _) = a.target_graph.without_vertex(0);
        prop_assert!(is_dag(&rest).is_some());
        prop_assert_eq!(a.back_map.len(), a.target_graph.vertex_count());
    }

    #[test]
    fn setcover_cost_equivalence(inst in set_cover(4, 4)) {
        let a = reduce_setcover(&inst);
        let cover = oracle_set_cover(inst.n, &inst.sets).unwrap();
        let best = oracle_min_edits_restricted(&a.target_graph, &a.target_query, budget()).unwrap();
        // an uncoverable universe can still be matched by relabelling element vertices
        if let Some(cover) = cover {
            let best = best.expect("a cover yields a matching");
            if cover.len() < inst.n {
                prop_assert_eq!(best.cost, cover.len());
                let w = MatchWitness::with_label_edits(&a.target_graph, &a.target_query, best.walk).unwrap();
                let extracted = extract_cover(&a, &w).unwrap();
                prop_assert_eq!(extracted.len(), cover.len());
                prop_assert!(inst.is_cover(&extracted));
            }
        }
    }

    #[test]
    fn hpath_unit_equivalence(g in digraph(6), h in 1usize..=4) {
        prop_assume!(h <= g.vertex_count());
        let inst = HPathInstance::new(g.clone(), h).unwrap();
        let a = reduce_hpath_unit(&inst);
        prop_assert!(a.target_graph.has_unit_labels());
        let found = oracle_compatible(&a.target_graph, &a.target_query, budget()).unwrap();
        prop_assert_eq!(found.is_some(), oracle_hpath(&g, h).is_some());
        if let Some(walk) = found {
            let path = extract_hpath(&a, &walk).unwrap();
            prop_assert_eq!(path.len(), h);
            prop_assert!(g.is_simple_path(&path));
        }
    }

    #[test]
    fn canonical_family_is_perfect(n in 1usize..=6, k in 1usize..=4, subset in vec(any::<bool>(), 6)) {
        prop_assume!(k <= n);
        let chosen: Vec<usize> = (0..n).filter(|&v| subset[v]).take(k).collect();
        prop_assume!(chosen.len() == k);
        prop_assert!(canonical_colorings(n, k).any(|c| c.is_colorful_on(&chosen)));
    }
}
