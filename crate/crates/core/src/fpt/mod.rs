//! Color-coding decider for compatibility on unit-label graphs,
//! parameterized by the query length.
//!
//! A compatible walk `p` touches `k = |V(p)| ≤ |s|` distinct vertices. Once
//! those vertices are colored with distinct colors and every color `c` is
//! assigned the query symbol `r(c)` its vertex must spell, a linear DP
//! (`M_r`, see [`DpTable`]) finds the walk. The engine loops over `k`, over
//! a coloring family, and over the maps `r` into the query's symbols.
//!
//! Two coloring families are supported:
//!
//! * **deterministic**: one representative of every coloring that uses all
//!   `k` colors, up to renaming colors. Since `r` ranges over all maps,
//!   renaming colors cannot change any outcome, and a coloring that makes a
//!   `k`-set colorful uses all `k` colors. This is exact.
//! * **randomized**: `⌈e^k ln(1/δ)⌉` seeded uniform colorings per `k`, so a
//!   compatible instance is missed with probability at most `δ`.
//!
//! A `yes` is always certified by re-verifying the walk as a label-edit
//! witness, so only `no` answers can be wrong, and only in randomized mode.
//!
//! Trials whose outcome is already known are not evaluated: maps `r` whose
//! image misses a query symbol (no position holding that symbol can be
//! mapped anywhere), and, on small graphs, trials whose per-vertex demand
//! `r ∘ c` was already tried.

mod coloring;
mod dp;

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

pub use coloring::{
    build_coloring_family, canonical_colorings, canonical_count, family_size, randomized_family_size, Coloring,
    ColoringFamily, RFunction,
};
pub use dp::{dp_compatible_under, DpTable};

use crate::model::{verify_witness, LabeledGraph, MatchWitness, QueryString, Symbol, Walk};

/// Graphs up to this size remember every demand vector already evaluated.
const DEDUP_MAX_VERTICES: usize = 64;

/// Soft cap on the number of vertex slots held by one evaluation batch.
const BATCH_CELLS: usize = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FptMode {
    Deterministic,
    Randomized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FptConfig {
    pub mode: FptMode,
    /// Failure probability bound for randomized mode; ignored otherwise.
    pub delta: f64,
    pub seed: u64,
    /// Maximum number of DP evaluations before giving up with an error.
    pub trial_budget: Option<u64>,
    /// Largest coloring family deterministic mode agrees to enumerate.
    pub exhaustive_limit: u128,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl FptConfig {
    pub fn deterministic() -> Self {
        FptConfig {
            mode: FptMode::Deterministic,
            delta: 0.01,
            seed: 0,
            trial_budget: None,
            exhaustive_limit: 10_000_000,
            workers: None,
        }
    }

    pub fn randomized(delta: f64, seed: u64) -> Result<Self, FptError> {
        let cfg = FptConfig {
            mode: FptMode::Randomized,
            delta,
            seed,
            ..FptConfig::deterministic()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), FptError> {
        if self.mode == FptMode::Randomized && !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(FptError::InvalidDelta(self.delta));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FptError {
    #[error("vertex {0} has a label of length other than one")]
    NonUnitLabel(usize),
    #[error("confidence parameter {0} must lie strictly between 0 and 1")]
    InvalidDelta(f64),
    #[error("invalid number of colors {0}")]
    BadColorCount(usize),
    #[error("color {color} out of range for {k} colors")]
    ColorOutOfRange { color: usize, k: usize },
    #[error("coloring covers {found} vertices, graph has {expected}")]
    ColoringSize { expected: usize, found: usize },
    #[error("r maps {found} colors, coloring uses {expected}")]
    RFunctionSize { expected: usize, found: usize },
    #[error("deterministic family needs {colorings} colorings, limit is {limit}")]
    BeyondExhaustiveBound { colorings: u128, limit: u128 },
    #[error("trial budget of {0} DP evaluations exhausted")]
    TrialBudgetExceeded(u64),
    #[error("could not start worker pool: {0}")]
    WorkerPool(String),
    #[error("internal error: DP walk failed verification: {0}")]
    Unsound(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FptDecision {
    Yes(Walk),
    No,
    ProbablyNo { delta: f64 },
}

impl FptDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, FptDecision::Yes(_))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FptStats {
    pub colorings: u64,
    /// DP tables actually filled.
    pub trials: u64,
    /// Trials skipped because their demand vector was already evaluated.
    pub duplicates: u64,
    /// Largest number of colors reached.
    pub max_k: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FptOutcome {
    pub decision: FptDecision,
    /// Label-edit witness for a `yes`, already verified.
    pub witness: Option<MatchWitness>,
    pub stats: FptStats,
}

/// Decides whether some walk of `graph` is compatible with `query`.
pub fn fpt_compatible(graph: &LabeledGraph, query: &QueryString, config: &FptConfig) -> Result<FptOutcome, FptError> {
    config.validate()?;
    dp::check_unit_labels(graph)?;
    let n = graph.vertex_count();

    if query.len() == 1 || n == 0 {
        let decision = if n == 0 {
            FptDecision::No
        } else {
            FptDecision::Yes(Walk::new(vec![0]).expect("nonempty"))
        };
        return finish(graph, query, decision, FptStats::default());
    }

    let pool = match config.workers {
        Some(w) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| FptError::WorkerPool(e.to_string()))?,
        ),
        None => None,
    };
    let needed = query.distinct_symbols();
    let mut runner = TrialRunner {
        graph,
        query: query.symbols(),
        pool: pool.as_ref(),
        batch: Vec::new(),
        batch_cap: (BATCH_CELLS / n.max(1)).clamp(1, 4096),
        seen: (n <= DEDUP_MAX_VERTICES).then(HashSet::new),
        stats: FptStats::default(),
        budget: config.trial_budget,
    };

    for k in needed.len()..=query.len() {
        runner.stats.max_k = k;
        let colorings: Box<dyn Iterator<Item = Coloring>> = match config.mode {
            FptMode::Deterministic => {
                let count = canonical_count(n, k);
                if count > config.exhaustive_limit {
                    return Err(FptError::BeyondExhaustiveBound {
                        colorings: count,
                        limit: config.exhaustive_limit,
                    });
                }
                Box::new(canonical_colorings(n, k))
            }
            FptMode::Randomized => Box::new(build_coloring_family(n, k, config)?),
        };
        for coloring in colorings {
            runner.stats.colorings += 1;
            let mut used = vec![false; k];
            for &c in coloring.colors() {
                used[c as usize] = true;
            }
            for r in RFunctions::new(k, &needed) {
                if !covers(&r, &used, &needed) {
                    continue;
                }
                let demand: Vec<Symbol> = coloring.colors().iter().map(|&c| r[c as usize]).collect();
                if let Some(walk) = runner.push(demand)? {
                    return finish(graph, query, FptDecision::Yes(walk), runner.stats);
                }
            }
        }
    }
    if let Some(walk) = runner.flush()? {
        return finish(graph, query, FptDecision::Yes(walk), runner.stats);
    }
    let decision = match config.mode {
        FptMode::Deterministic => FptDecision::No,
        FptMode::Randomized => FptDecision::ProbablyNo { delta: config.delta },
    };
    finish(graph, query, decision, runner.stats)
}

fn finish(
    graph: &LabeledGraph,
    query: &QueryString,
    decision: FptDecision,
    stats: FptStats,
) -> Result<FptOutcome, FptError> {
    let witness = match &decision {
        FptDecision::Yes(walk) => {
            let w = MatchWitness::with_label_edits(graph, query, walk.clone())
                .map_err(|e| FptError::Unsound(e.to_string()))?;
            verify_witness(graph, query, &w).map_err(|e| FptError::Unsound(e.to_string()))?;
            Some(w)
        }
        _ => None,
    };
    Ok(FptOutcome {
        decision,
        witness,
        stats,
    })
}

/// True when the colors actually used by the coloring map onto every
/// symbol of the query.
fn covers(r: &[Symbol], used: &[bool], needed: &[Symbol]) -> bool {
    needed
        .iter()
        .all(|sym| r.iter().zip(used).any(|(s, &u)| u && s == sym))
}

/// All maps from `k` colors into `symbols`, lexicographic in symbol index.
struct RFunctions<'a> {
    symbols: &'a [Symbol],
    digits: Option<Vec<usize>>,
}

impl<'a> RFunctions<'a> {
    fn new(k: usize, symbols: &'a [Symbol]) -> Self {
        RFunctions {
            symbols,
            digits: (!symbols.is_empty()).then(|| vec![0; k]),
        }
    }
}

impl Iterator for RFunctions<'_> {
    type Item = Vec<Symbol>;

    fn next(&mut self) -> Option<Vec<Symbol>> {
        let digits = self.digits.as_mut()?;
        let out = digits.iter().map(|&d| self.symbols[d]).collect();
        let mut advanced = false;
        for d in digits.iter_mut().rev() {
            if *d + 1 < self.symbols.len() {
                *d += 1;
                advanced = true;
                break;
            }
            *d = 0;
        }
        if !advanced {
            self.digits = None;
        }
        Some(out)
    }
}

/// Buffers trials in enumeration order and evaluates them batch by batch.
/// Within a batch the earliest successful trial wins, so the answer does
/// not depend on how many workers run the batch.
struct TrialRunner<'a> {
    graph: &'a LabeledGraph,
    query: &'a [Symbol],
    pool: Option<&'a rayon::ThreadPool>,
    batch: Vec<Vec<Symbol>>,
    batch_cap: usize,
    seen: Option<HashSet<Vec<Symbol>>>,
    stats: FptStats,
    budget: Option<u64>,
}

impl TrialRunner<'_> {
    fn push(&mut self, demand: Vec<Symbol>) -> Result<Option<Walk>, FptError> {
        if let Some(seen) = &mut self.seen {
            if !seen.insert(demand.clone()) {
                self.stats.duplicates += 1;
                return Ok(None);
            }
        }
        if let Some(budget) = self.budget {
            if self.stats.trials + self.batch.len() as u64 >= budget {
                return Err(FptError::TrialBudgetExceeded(budget));
            }
        }
        self.batch.push(demand);
        if self.batch.len() >= self.batch_cap {
            return self.flush();
        }
        Ok(None)
    }

    fn flush(&mut self) -> Result<Option<Walk>, FptError> {
        if self.batch.is_empty() {
            return Ok(None);
        }
        let batch = std::mem::take(&mut self.batch);
        let (graph, query) = (self.graph, self.query);
        let eval = || {
            batch
                .par_iter()
                .enumerate()
                .find_map_first(|(i, demand)| DpTable::from_demand(graph, query, demand).walk(graph).map(|w| (i, w)))
        };
        let found = match self.pool {
            Some(pool) => pool.install(eval),
            None => eval(),
        };
        self.stats.trials += match &found {
            Some((i, _)) => *i as u64 + 1,
            None => batch.len() as u64,
        };
        Ok(found.map(|(_, w)| w))
    }
}
