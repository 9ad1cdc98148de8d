//! The ten acceptance criteria. Each runs on seeded random instances and
//! compares the fast solvers against the exhaustive oracles.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strgraph_core::fpt::{fpt_compatible, FptConfig, FptDecision};
use strgraph_core::gen::{gen_instance, gen_planted, GenSpec, Shape};
use strgraph_core::model::{restrict_alphabet, verify_witness, Digraph, LabeledGraph, MatchWitness, QueryString};
use strgraph_core::oracle::{
    count_walks, oracle_compatible, oracle_hpath, oracle_min_edits_both, oracle_min_edits_query_only,
    oracle_min_edits_restricted, oracle_set_cover, OracleBudget,
};
use strgraph_core::poly::{is_dag, min_edits_dag, min_edits_query_only, EditMode};
use strgraph_core::reductions::{
    extract_cover, extract_hpath, reduce_hpath_binary, reduce_hpath_unit, reduce_setcover, HPathInstance,
    ReductionArtifact, SetCoverInstance,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}: {} ({})",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

pub type Criterion = fn() -> Verdict;

pub const CRITERIA: [Criterion; 10] = [
    fpt_deterministic_vs_oracle,
    fpt_randomized_on_planted,
    hpath_unit_round_trip,
    hpath_binary_round_trip,
    setcover_cost_equivalence,
    setcover_structure,
    dag_solver_vs_oracles,
    query_only_vs_oracle,
    restriction_preserves_answers,
    fpt_scalability,
];

fn budget() -> OracleBudget {
    OracleBudget::default()
}

fn random_digraph(rng: &mut ChaCha8Rng, max_n: usize) -> Digraph {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.1..0.5);
    let edges = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .filter(|_| rng.gen_bool(p))
        .collect();
    Digraph::new(n, edges).expect("generated edges are valid")
}

fn random_set_cover(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> SetCoverInstance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let sets = (0..m)
        .map(|_| {
            let mut set: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
            if set.is_empty() {
                set.push(rng.gen_range(1..=n));
            }
            set
        })
        .collect();
    SetCoverInstance::new(n, sets).expect("generated sets are valid")
}

fn random_spec(rng: &mut ChaCha8Rng, shape: Shape, max_n: usize, alpha: (usize, usize), max_label: usize, q: (usize, usize)) -> GenSpec {
    GenSpec {
        vertex_count: rng.gen_range(1..=max_n),
        edge_probability: rng.gen_range(0.05..0.6),
        alphabet_size: rng.gen_range(alpha.0..=alpha.1),
        max_label_length: max_label,
        query_length: rng.gen_range(q.0..=q.1),
        seed: rng.gen(),
        shape,
    }
}

/// Deterministic color coding agrees with the exhaustive search on every
/// small unit-label instance.
pub fn fpt_deterministic_vs_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let total = 500;
    let (mut agree, mut yes, mut unsound) = (0, 0, 0);
    for _ in 0..total {
        let spec = random_spec(&mut rng, Shape::UnitLabels, 8, (1, 4), 1, (1, 5));
        let (g, q) = gen_instance(&spec).expect("valid spec");
        let oracle = oracle_compatible(&g, &q, budget()).expect("within budget");
        let out = fpt_compatible(&g, &q, &FptConfig::deterministic()).expect("within exhaustive bound");
        if !matches!(out.decision, FptDecision::ProbablyNo { .. }) && out.decision.is_yes() == oracle.is_some() {
            agree += 1;
        }
        if let Some(w) = &out.witness {
            yes += 1;
            if verify_witness(&g, &q, w).is_err() {
                unsound += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict {
        id: 1,
        title: "deterministic color coding vs oracle",
        passed: agree == total && unsound == 0 && secs < 300.0,
        detail: format!("{agree}/{total} agree, {yes} yes, {unsound} unsound witnesses, {secs:.1} s"),
    }
}

/// Randomized color coding with delta = 0.01 finds planted compatible walks.
pub fn fpt_randomized_on_planted() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let total = 1000;
    let (mut instances, mut yes, mut unsound) = (0, 0, 0);
    while instances < total {
        let mut spec = random_spec(&mut rng, Shape::UnitLabels, 8, (1, 4), 1, (2, 5));
        spec.edge_probability = rng.gen_range(0.2..0.7);
        let Some((g, q, walk)) = gen_planted(&spec).expect("valid spec") else {
            continue;
        };
        let planted = MatchWitness::with_label_edits(&g, &q, walk).expect("planted walk is compatible");
        assert!(verify_witness(&g, &q, &planted).is_ok());
        instances += 1;
        let cfg = FptConfig::randomized(0.01, instances as u64).expect("valid delta");
        let out = fpt_compatible(&g, &q, &cfg).expect("unit labels");
        if let Some(w) = &out.witness {
            yes += 1;
            if verify_witness(&g, &q, w).is_err() {
                unsound += 1;
            }
        }
    }
    let rate = yes as f64 / total as f64;
    Verdict {
        id: 2,
        title: "randomized color coding on compatible instances",
        passed: rate >= 0.95 && unsound == 0,
        detail: format!("{yes}/{total} yes ({:.1}%), {unsound} unsound witnesses", 100.0 * rate),
    }
}

fn hpath_round_trip(
    id: u8,
    title: &'static str,
    seed: u64,
    max_n: usize,
    max_h: usize,
    reduce: fn(&HPathInstance) -> ReductionArtifact,
) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = 300;
    let (mut agree, mut yes, mut bad_paths) = (0, 0, 0);
    for _ in 0..total {
        let g = random_digraph(&mut rng, max_n);
        let h = rng.gen_range(1..=max_h.min(g.vertex_count()));
        let inst = HPathInstance::new(g.clone(), h).expect("h in range");
        let a = reduce(&inst);
        let found = oracle_compatible(&a.target_graph, &a.target_query, budget()).expect("within budget");
        if found.is_some() == oracle_hpath(&g, h).is_some() {
            agree += 1;
        }
        if let Some(walk) = found {
            yes += 1;
            match extract_hpath(&a, &walk) {
                Ok(path) if path.len() == h && g.is_simple_path(&path) => {}
                _ => bad_paths += 1,
            }
        }
    }
    Verdict {
        id,
        title,
        passed: agree == total && bad_paths == 0,
        detail: format!("{agree}/{total} agree, {yes} yes, {bad_paths} invalid extracted paths"),
    }
}

pub fn hpath_unit_round_trip() -> Verdict {
    hpath_round_trip(3, "h-Path to unit-label compatibility", 3, 8, 5, reduce_hpath_unit)
}

pub fn hpath_binary_round_trip() -> Verdict {
    hpath_round_trip(4, "h-Path to binary compatibility", 4, 6, 3, reduce_hpath_binary)
}

/// Minimum restricted edits on the reduction equal the minimum cover size.
pub fn setcover_cost_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let total = 200;
    let (mut checked, mut equal, mut extracted_ok) = (0, 0, 0);
    while checked < total {
        let inst = random_set_cover(&mut rng, 5, 5);
        let Some(cover) = oracle_set_cover(inst.n, &inst.sets).expect("few sets") else {
            continue;
        };
        if cover.len() >= inst.n {
            continue;
        }
        checked += 1;
        let a = reduce_setcover(&inst);
        let best = oracle_min_edits_restricted(&a.target_graph, &a.target_query, budget()).expect("within budget");
        let Some(best) = best else { continue };
        if best.cost == cover.len() {
            equal += 1;
        }
        let w = MatchWitness::with_label_edits(&a.target_graph, &a.target_query, best.walk).expect("compatible walk");
        if let Ok(sets) = extract_cover(&a, &w) {
            if sets.len() == cover.len() && inst.is_cover(&sets) {
                extracted_ok += 1;
            }
        }
    }
    let example = reduce_setcover(&SetCoverInstance::worked_example());
    let example_cost = oracle_min_edits_restricted(&example.target_graph, &example.target_query, budget())
        .expect("within budget")
        .map(|s| s.cost);
    Verdict {
        id: 5,
        title: "set cover to restricted matching, cost equivalence",
        passed: equal == total && extracted_ok == total && example_cost == Some(2),
        detail: format!(
            "{equal}/{total} equal costs, {extracted_ok}/{total} valid extracted covers, worked example cost {example_cost:?}"
        ),
    }
}

/// Structure of every generated set-cover reduction.
pub fn setcover_structure() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut instances: Vec<SetCoverInstance> = (0..1000).map(|_| random_set_cover(&mut rng, 8, 8)).collect();
    instances.push(SetCoverInstance::worked_example());
    let total = instances.len();
    let ok = instances
        .iter()
        .filter(|inst| {
            let a = reduce_setcover(inst);
            let elements: usize = inst.sets.iter().map(Vec::len).sum();
            let (rest, _) = a.target_graph.without_vertex(0);
            is_dag(&rest).is_some()
                && a.target_query.len() == 3 * inst.n
                && a.target_graph.vertex_count() == 1 + inst.m() + elements
        })
        .count();
    Verdict {
        id: 6,
        title: "set cover reduction structure",
        passed: ok == total,
        detail: format!("{ok}/{total} acyclic without the hub with |s| = 3n and |V| = 1 + m + sum |S_i|"),
    }
}

/// All three DAG modes return one cost, equal to both oracles.
pub fn dag_solver_vs_oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let total = 300;
    let (mut agree, mut found) = (0, 0);
    for _ in 0..total {
        let spec = random_spec(&mut rng, Shape::Dag, 10, (1, 4), 2, (1, 6));
        let (g, q) = gen_instance(&spec).expect("valid spec");
        let restricted = oracle_min_edits_restricted(&g, &q, budget()).expect("within budget").map(|s| s.cost);
        let both = oracle_min_edits_both(&g, &q, budget()).expect("within budget").map(|s| s.cost);
        let costs: Vec<Option<usize>> = [EditMode::LabelsOnly, EditMode::QueryOnly, EditMode::Both]
            .into_iter()
            .map(|mode| {
                min_edits_dag(&g, &q, mode).expect("acyclic").map(|m| {
                    assert_eq!(verify_witness(&g, &q, &m.witness), Ok(m.cost));
                    m.cost
                })
            })
            .collect();
        if costs.iter().all(|&c| c == restricted && c == both) {
            agree += 1;
        }
        found += usize::from(restricted.is_some());
    }
    Verdict {
        id: 7,
        title: "DAG solver vs oracles",
        passed: agree == total,
        detail: format!("{agree}/{total} agree, {found} with a matching walk"),
    }
}

/// The query-only DP returns the minimum Hamming distance over walks.
pub fn query_only_vs_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let total = 300;
    let (mut agree, mut empty_ok, mut none) = (0, 0, 0);
    for _ in 0..total {
        let spec = random_spec(&mut rng, Shape::General, 8, (1, 4), 2, (1, 6));
        let (g, q) = gen_instance(&spec).expect("valid spec");
        let dp = min_edits_query_only(&g, &q);
        let oracle = oracle_min_edits_query_only(&g, &q, budget()).expect("within budget");
        if dp.as_ref().map(|m| m.cost) == oracle.map(|s| s.cost) {
            agree += 1;
        }
        if dp.is_none() == (count_walks(&g, q.len()) == 0) {
            empty_ok += 1;
        }
        none += usize::from(dp.is_none());
    }
    Verdict {
        id: 8,
        title: "query-only solver vs oracle",
        passed: agree == total && empty_ok == total,
        detail: format!("{agree}/{total} agree, {empty_ok}/{total} empty exactly without walks ({none} empty)"),
    }
}

/// Alphabet restriction leaves compatibility and the restricted optimum
/// unchanged.
pub fn restriction_preserves_answers() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let total = 300;
    let (mut compat_same, mut cost_same) = (0, 0);
    let mut example = None;
    for _ in 0..total {
        let spec = random_spec(&mut rng, Shape::General, 8, (10, 10), 2, (4, 4));
        let (g, q) = gen_instance(&spec).expect("valid spec");
        let (rg, rq) = restrict_alphabet(&g, &q);
        let before = oracle_compatible(&g, &q, budget()).expect("within budget").is_some();
        let after = oracle_compatible(&rg, &rq, budget()).expect("within budget").is_some();
        compat_same += usize::from(before == after);
        let before = oracle_min_edits_restricted(&g, &q, budget()).expect("within budget").map(|s| s.cost);
        let after = oracle_min_edits_restricted(&rg, &rq, budget()).expect("within budget").map(|s| s.cost);
        if before == after {
            cost_same += 1;
        } else if example.is_none() {
            example = Some((spec.seed, before, after));
        }
    }
    let mut detail = format!("compatibility unchanged {compat_same}/{total}, restricted optimum unchanged {cost_same}/{total}");
    if let Some((seed, before, after)) = example {
        detail.push_str(&format!("; first change: seed {seed}, {before:?} -> {after:?}"));
    }
    Verdict {
        id: 9,
        title: "alphabet restriction preserves answers",
        passed: compat_same == total && cost_same == total,
        detail,
    }
}

/// Randomized color coding on large sparse unit-label graphs: under a
/// minute at 10k vertices, and at most quadratic growth.
/// Unit-label graph on three layers with about `5n` edges between
/// consecutive layers. No walk has four vertices, so a length-four query
/// forces the randomized engine through its whole family.
fn layered_graph(n: usize, seed: u64) -> LabeledGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layer = |l: usize| -> Vec<usize> { (0..n).filter(|v| v % 3 == l).collect() };
    let layers = [layer(0), layer(1), layer(2)];
    let mut edges = std::collections::BTreeSet::new();
    for _ in 0..5 * n {
        let l = rng.gen_range(0..2);
        let u = layers[l][rng.gen_range(0..layers[l].len())];
        let v = layers[l + 1][rng.gen_range(0..layers[l + 1].len())];
        edges.insert((u, v));
    }
    let tokens = ["a", "b", "c", "d"];
    let labels: Vec<Vec<&str>> = (0..n).map(|_| vec![tokens[rng.gen_range(0..4)]]).collect();
    let labels: Vec<&[&str]> = labels.iter().map(Vec::as_slice).collect();
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    LabeledGraph::from_tokens(&tokens, &labels, &edges).expect("layered graph is well formed")
}

/// Best of three wall-clock runs, with the last decision.
fn time_fpt(g: &LabeledGraph, q: &QueryString) -> (f64, FptDecision) {
    let cfg = FptConfig::randomized(0.01, 10).expect("valid delta");
    let mut best = f64::INFINITY;
    let mut decision = FptDecision::No;
    for _ in 0..3 {
        let start = Instant::now();
        let out = fpt_compatible(g, q, &cfg).expect("unit labels");
        best = best.min(start.elapsed().as_secs_f64());
        decision = out.decision;
    }
    (best, decision)
}

fn answer(d: &FptDecision) -> &'static str {
    match d {
        FptDecision::Yes(_) => "yes",
        FptDecision::No => "no",
        FptDecision::ProbablyNo { .. } => "probably-no",
    }
}

pub fn fpt_scalability() -> Verdict {
    let sizes = [1000usize, 2000, 4000, 8000];
    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let random_at = |n: usize| {
        let spec = GenSpec {
            vertex_count: n,
            edge_probability: 5.0 / n as f64,
            alphabet_size: 4,
            max_label_length: 1,
            query_length: 4,
            seed: n as u64,
            shape: Shape::UnitLabels,
        };
        let (g, q) = gen_instance(&spec).expect("valid spec");
        time_fpt(&g, &q)
    };
    let layered_at = |n: usize| {
        let g = layered_graph(n, n as u64);
        let q = QueryString::from_tokens(g.alphabet(), &["a", "b", "c", "d"]).expect("tokens exist");
        time_fpt(&g, &q)
    };

    let mut passed = true;
    let mut parts = Vec::new();
    for (name, run) in [("random", &random_at as &dyn Fn(usize) -> (f64, FptDecision)), ("layered", &layered_at)] {
        let times: Vec<(f64, FptDecision)> = sizes.iter().map(|&n| run(n)).collect();
        let (t10k, d10k) = run(10_000);
        let ys: Vec<f64> = times.iter().map(|(t, _)| t.max(1e-6).ln()).collect();
        let slope = least_squares_slope(&xs, &ys);
        passed &= t10k < 60.0 && slope <= 2.3;
        let timings: Vec<String> = sizes
            .iter()
            .zip(&times)
            .map(|(n, (t, _))| format!("{n}: {:.2} ms", t * 1e3))
            .collect();
        parts.push(format!(
            "{name}: 10000 vertices in {:.2} ms (answer {}), log-log slope {slope:.2} over [{}]",
            t10k * 1e3,
            answer(&d10k),
            timings.join(", ")
        ));
    }
    Verdict {
        id: 10,
        title: "randomized color coding scalability",
        passed,
        detail: parts.join("; "),
    }
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_laws() {
        let xs: Vec<f64> = [1.0f64, 2.0, 4.0, 8.0].iter().map(|x| x.ln()).collect();
        let quad: Vec<f64> = [1.0f64, 4.0, 16.0, 64.0].iter().map(|y| y.ln()).collect();
        assert!((least_squares_slope(&xs, &quad) - 2.0).abs() < 1e-12);
    }
}
