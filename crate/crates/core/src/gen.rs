//! Seeded random instances.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Alphabet, LabeledGraph, QueryString, Symbol, Walk};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// Any edge, self-loops included.
    General,
    /// Only edges `u -> v` with `u < v`.
    Dag,
    /// Like `General`, with every label of length one.
    UnitLabels,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub vertex_count: usize,
    /// Independent probability of each allowed edge.
    pub edge_probability: f64,
    pub alphabet_size: usize,
    pub max_label_length: usize,
    pub query_length: usize,
    pub seed: u64,
    pub shape: Shape,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            vertex_count: 6,
            edge_probability: 0.3,
            alphabet_size: 3,
            max_label_length: 2,
            query_length: 4,
            seed: 0,
            shape: Shape::General,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GenError {
    #[error("{0} must be at least 1")]
    Zero(&'static str),
    #[error("edge probability {0} outside [0, 1]")]
    Probability(f64),
}

impl GenSpec {
    pub fn validate(&self) -> Result<(), GenError> {
        for (value, name) in [
            (self.vertex_count, "vertex_count"),
            (self.alphabet_size, "alphabet_size"),
            (self.max_label_length, "max_label_length"),
            (self.query_length, "query_length"),
        ] {
            if value == 0 {
                return Err(GenError::Zero(name));
            }
        }
        if !(0.0..=1.0).contains(&self.edge_probability) {
            return Err(GenError::Probability(self.edge_probability));
        }
        Ok(())
    }
}

/// Tokens `a`..`z` for alphabets of at most 26 symbols, `s0`, `s1`, … above.
pub fn alphabet_of_size(size: usize) -> Alphabet {
    let tokens: Vec<String> = if size <= 26 {
        (0..size).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..size).map(|i| format!("s{i}")).collect()
    };
    Alphabet::new(tokens).expect("size >= 1")
}

pub fn gen_instance(spec: &GenSpec) -> Result<(LabeledGraph, QueryString), GenError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let graph = gen_graph(spec, &mut rng);
    let query = (0..spec.query_length)
        .map(|_| Symbol(rng.gen_range(0..spec.alphabet_size) as u32))
        .collect();
    Ok((graph, QueryString::new(query).expect("query_length >= 1")))
}

/// An instance that is compatible by construction: the query is read off a
/// random walk of the generated graph, with each visited vertex demanding
/// one random symbol throughout. The query is the spelled length of the
/// shortest such walk reaching `query_length` symbols, so it can run longer
/// when labels do. `None` when the walk gets stuck at a vertex without
/// successors.
pub fn gen_planted(spec: &GenSpec) -> Result<Option<(LabeledGraph, QueryString, Walk)>, GenError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let graph = gen_graph(spec, &mut rng);
    let n = graph.vertex_count();
    let mut walk = vec![rng.gen_range(0..n)];
    let mut spelled: usize = graph.label(walk[0]).len();
    while spelled < spec.query_length {
        let succ = graph.successors(*walk.last().expect("nonempty"));
        if succ.is_empty() {
            return Ok(None);
        }
        let v = succ[rng.gen_range(0..succ.len())];
        spelled += graph.label(v).len();
        walk.push(v);
    }
    let demand: Vec<Vec<Symbol>> = (0..n)
        .map(|v| {
            (0..graph.label(v).len())
                .map(|_| Symbol(rng.gen_range(0..spec.alphabet_size) as u32))
                .collect()
        })
        .collect();
    let query: Vec<Symbol> = walk.iter().flat_map(|&v| demand[v].iter().copied()).collect();
    Ok(Some((
        graph,
        QueryString::new(query).expect("nonempty"),
        Walk::new(walk).expect("nonempty"),
    )))
}

fn gen_graph(spec: &GenSpec, rng: &mut ChaCha8Rng) -> LabeledGraph {
    let n = spec.vertex_count;
    let alphabet = alphabet_of_size(spec.alphabet_size);
    let max_len = match spec.shape {
        Shape::UnitLabels => 1,
        Shape::General | Shape::Dag => spec.max_label_length,
    };
    let labels: Vec<Vec<Symbol>> = (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len)
                .map(|_| Symbol(rng.gen_range(0..spec.alphabet_size) as u32))
                .collect()
        })
        .collect();

    // geometric skipping over the candidate pairs in row-major order
    let p = spec.edge_probability;
    let mut edges = Vec::new();
    let mut gap = next_gap(rng, p);
    for u in 0..n {
        let (lo, hi) = match spec.shape {
            Shape::Dag => (u + 1, n),
            Shape::General | Shape::UnitLabels => (0, n),
        };
        let mut v = lo;
        while v < hi {
            let room = (hi - v) as u64;
            if gap >= room {
                gap -= room;
                break;
            }
            v += gap as usize;
            edges.push((u, v));
            v += 1;
            gap = next_gap(rng, p);
        }
    }
    LabeledGraph::new(alphabet, labels, edges).expect("generated graph is well formed")
}

/// Failures before the next success of a Bernoulli(p) sequence.
fn next_gap(rng: &mut ChaCha8Rng, p: f64) -> u64 {
    if p <= 0.0 {
        return u64::MAX;
    }
    if p >= 1.0 {
        return 0;
    }
    let u: f64 = 1.0 - rng.gen::<f64>();
    let g = (u.ln() / (1.0 - p).ln()).floor();
    if g >= u64::MAX as f64 {
        u64::MAX
    } else {
        g as u64
    }
}
