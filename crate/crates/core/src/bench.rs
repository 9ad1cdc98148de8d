//! Benchmark harness: runs a selection of solvers over a corpus, records
//! one row per (instance, solver) pair and cross-checks comparable answers.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fpt::{fpt_compatible, FptConfig, FptDecision};
use crate::model::{LabeledGraph, QueryString};
use crate::oracle::{
    oracle_compatible, oracle_min_edits_both, oracle_min_edits_query_only, oracle_min_edits_restricted, OracleBudget,
};
use crate::poly::{exact_match, is_dag, min_edits_dag, min_edits_query_only, EditMode};

pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Solver {
    OracleCompat,
    OracleRestricted,
    OracleBoth,
    OracleQueryOnly,
    Exact,
    QueryOnly,
    DagLabels,
    DagQuery,
    DagBoth,
    FptDet,
    FptMc,
}

impl Solver {
    pub const ALL: [Solver; 11] = [
        Solver::OracleCompat,
        Solver::OracleRestricted,
        Solver::OracleBoth,
        Solver::OracleQueryOnly,
        Solver::Exact,
        Solver::QueryOnly,
        Solver::DagLabels,
        Solver::DagQuery,
        Solver::DagBoth,
        Solver::FptDet,
        Solver::FptMc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Solver::OracleCompat => "oracle-compat",
            Solver::OracleRestricted => "oracle-restricted",
            Solver::OracleBoth => "oracle-both",
            Solver::OracleQueryOnly => "oracle-query",
            Solver::Exact => "exact",
            Solver::QueryOnly => "query-dp",
            Solver::DagLabels => "dag-labels",
            Solver::DagQuery => "dag-query",
            Solver::DagBoth => "dag-both",
            Solver::FptDet => "fpt-det",
            Solver::FptMc => "fpt-mc",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Solver::ALL
            .into_iter()
            .find(|solver| solver.name() == s)
            .ok_or_else(|| format!("unknown solver `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Yes,
    No,
    ProbablyNo,
    Skip,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub schema_version: u32,
    pub instance: String,
    pub solver: String,
    pub answer: Answer,
    pub cost: Option<usize>,
    pub time_us: u128,
    /// DP evaluations, for the color-coding solvers.
    pub trials: Option<u64>,
    pub seed: u64,
    /// Reason for a skip or an error.
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchInstance {
    pub id: String,
    pub graph: LabeledGraph,
    pub query: QueryString,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub budget: OracleBudget,
    pub delta: f64,
    /// Worker threads across instances; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            budget: OracleBudget::default(),
            delta: 0.01,
            workers: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub instance: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub records: Vec<BenchRecord>,
    pub disagreements: Vec<Disagreement>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("could not start worker pool: {0}")]
    WorkerPool(String),
}

/// Runs every solver on every instance. Instances are processed in
/// parallel; records come back in corpus order, solvers in the given order.
pub fn run_suite(corpus: &[BenchInstance], solvers: &[Solver], config: &SuiteConfig) -> Result<SuiteReport, BenchError> {
    let run = || -> Vec<(Vec<BenchRecord>, Vec<Disagreement>)> {
        corpus
            .par_iter()
            .map(|inst| {
                let records: Vec<BenchRecord> = solvers.iter().map(|&s| run_one(inst, s, config)).collect();
                let disagreements = cross_check(inst, &records);
                (records, disagreements)
            })
            .collect()
    };
    let per_instance = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| BenchError::WorkerPool(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut report = SuiteReport::default();
    for (records, disagreements) in per_instance {
        report.records.extend(records);
        report.disagreements.extend(disagreements);
    }
    Ok(report)
}

/// Writes the records as CSV, header first (also for an empty list).
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record([
        "schema_version",
        "instance",
        "solver",
        "answer",
        "cost",
        "time_us",
        "trials",
        "seed",
        "note",
    ])?;
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}

struct Outcome {
    answer: Answer,
    cost: Option<usize>,
    trials: Option<u64>,
    note: String,
}

impl Outcome {
    fn found(cost: Option<usize>) -> Self {
        Outcome {
            answer: if cost.is_some() { Answer::Yes } else { Answer::No },
            cost,
            trials: None,
            note: String::new(),
        }
    }

    fn skip(note: impl Into<String>) -> Self {
        Outcome {
            answer: Answer::Skip,
            cost: None,
            trials: None,
            note: note.into(),
        }
    }

    fn error(note: impl fmt::Display) -> Self {
        Outcome {
            answer: Answer::Error,
            cost: None,
            trials: None,
            note: note.to_string(),
        }
    }
}

fn run_one(inst: &BenchInstance, solver: Solver, config: &SuiteConfig) -> BenchRecord {
    let (g, q) = (&inst.graph, &inst.query);
    let start = Instant::now();
    let outcome = match solver {
        Solver::OracleCompat => match oracle_compatible(g, q, config.budget) {
            Ok(w) => Outcome {
                cost: None,
                ..Outcome::found(w.map(|_| 0))
            },
            Err(e) => Outcome::error(e),
        },
        Solver::OracleRestricted => match oracle_min_edits_restricted(g, q, config.budget) {
            Ok(sol) => Outcome::found(sol.map(|s| s.cost)),
            Err(e) => Outcome::error(e),
        },
        Solver::OracleBoth => match oracle_min_edits_both(g, q, config.budget) {
            Ok(sol) => Outcome::found(sol.map(|s| s.cost)),
            Err(e) => Outcome::error(e),
        },
        Solver::OracleQueryOnly => match oracle_min_edits_query_only(g, q, config.budget) {
            Ok(sol) => Outcome::found(sol.map(|s| s.cost)),
            Err(e) => Outcome::error(e),
        },
        Solver::Exact => Outcome::found(exact_match(g, q).map(|_| 0)),
        Solver::QueryOnly => Outcome::found(min_edits_query_only(g, q).map(|m| m.cost)),
        Solver::DagLabels | Solver::DagQuery | Solver::DagBoth => {
            if is_dag(g).is_none() {
                Outcome::skip("graph is cyclic")
            } else {
                let mode = match solver {
                    Solver::DagLabels => EditMode::LabelsOnly,
                    Solver::DagQuery => EditMode::QueryOnly,
                    _ => EditMode::Both,
                };
                match min_edits_dag(g, q, mode) {
                    Ok(m) => Outcome::found(m.map(|m| m.cost)),
                    Err(e) => Outcome::error(e),
                }
            }
        }
        Solver::FptDet | Solver::FptMc => {
            if !g.has_unit_labels() {
                Outcome::skip("labels longer than one symbol")
            } else {
                let cfg = if solver == Solver::FptDet {
                    Ok(FptConfig::deterministic())
                } else {
                    FptConfig::randomized(config.delta, inst.seed)
                };
                match cfg.and_then(|cfg| fpt_compatible(g, q, &cfg)) {
                    Ok(out) => Outcome {
                        answer: match out.decision {
                            FptDecision::Yes(_) => Answer::Yes,
                            FptDecision::No => Answer::No,
                            FptDecision::ProbablyNo { .. } => Answer::ProbablyNo,
                        },
                        cost: None,
                        trials: Some(out.stats.trials),
                        note: String::new(),
                    },
                    Err(e) => Outcome::error(e),
                }
            }
        }
    };
    BenchRecord {
        schema_version: CSV_SCHEMA_VERSION,
        instance: inst.id.clone(),
        solver: solver.name().to_string(),
        answer: outcome.answer,
        cost: outcome.cost,
        time_us: start.elapsed().as_micros(),
        trials: outcome.trials,
        seed: inst.seed,
        note: outcome.note,
    }
}

/// Comparable groups:
/// * compatibility: oracle-compat, fpt-det, a `yes` from fpt-mc, and the
///   existence of a restricted matching;
/// * cost classes: restricted (oracle-restricted, dag-labels), both
///   (oracle-both, dag-both), query-only (oracle-query, query-dp, dag-query);
///   on acyclic graphs the three classes coincide;
/// * exact matching succeeds iff the query-only optimum is 0.
fn cross_check(inst: &BenchInstance, records: &[BenchRecord]) -> Vec<Disagreement> {
    let mut out = Vec::new();
    let get = |name: Solver| records.iter().find(|r| r.solver == name.name() && matches!(r.answer, Answer::Yes | Answer::No | Answer::ProbablyNo));
    let mut flag = |detail: String| {
        out.push(Disagreement {
            instance: inst.id.clone(),
            detail,
        })
    };

    let mut compat: Vec<(&str, bool)> = Vec::new();
    for s in [Solver::OracleCompat, Solver::FptDet, Solver::OracleRestricted] {
        if let Some(r) = get(s) {
            compat.push((s.name(), r.answer == Answer::Yes));
        }
    }
    if let Some(r) = get(Solver::FptMc) {
        if r.answer == Answer::Yes {
            compat.push((Solver::FptMc.name(), true));
        }
    }
    if let Some(&(first, v)) = compat.first() {
        for &(name, w) in &compat[1..] {
            if v != w {
                flag(format!("compatibility: {first} says {v}, {name} says {w}"));
            }
        }
    }

    let acyclic = is_dag(&inst.graph).is_some();
    let classes: [&[Solver]; 3] = [
        &[Solver::OracleRestricted, Solver::DagLabels],
        &[Solver::OracleBoth, Solver::DagBoth],
        &[Solver::OracleQueryOnly, Solver::QueryOnly, Solver::DagQuery],
    ];
    let mut groups: Vec<Vec<Solver>> = classes.iter().map(|c| c.to_vec()).collect();
    if acyclic {
        groups = vec![classes.concat()];
    }
    for group in groups {
        let costs: Vec<(Solver, Option<usize>)> = group.iter().filter_map(|&s| get(s).map(|r| (s, r.cost))).collect();
        if let Some(&(first, c)) = costs.first() {
            for &(s, d) in &costs[1..] {
                if c != d {
                    flag(format!("cost: {first} gives {c:?}, {s} gives {d:?}"));
                }
            }
        }
    }

    if let Some(exact) = get(Solver::Exact) {
        for s in [Solver::OracleQueryOnly, Solver::QueryOnly] {
            if let Some(r) = get(s) {
                if (exact.answer == Answer::Yes) != (r.cost == Some(0)) {
                    flag(format!("exact says {:?}, {s} optimum is {:?}", exact.answer, r.cost));
                }
            }
        }
    }
    out
}
