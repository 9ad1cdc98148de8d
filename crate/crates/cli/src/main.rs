use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use strgraph_core::bench::{run_suite, write_csv, BenchInstance, Solver, SuiteConfig};
use strgraph_core::fpt::{fpt_compatible, FptConfig, FptDecision};
use strgraph_core::gen::{gen_instance, GenSpec, Shape};
use strgraph_core::model::{
    parse_graph, parse_query, serialize_graph, serialize_query, verify_witness, LabeledGraph, MatchWitness, QueryString,
    WitnessDocument,
};
use strgraph_core::oracle::{
    oracle_compatible, oracle_hpath, oracle_min_edits_both, oracle_min_edits_query_only, oracle_min_edits_restricted,
    oracle_set_cover, OracleBudget, DEFAULT_BUDGET,
};
use strgraph_core::poly::{exact_match, is_dag, min_edits_dag, min_edits_query_only, EditMode};
use strgraph_core::reductions::{
    reduce_hpath_binary, reduce_hpath_unit, reduce_setcover, HPathInstance, ReductionSource, SetCoverInstance,
};

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_CROSS_CHECK: u8 = 3;

/// Match query strings against walks of labeled directed graphs.
#[derive(Parser, Debug)]
#[command(name = "strgraph", version)]
struct Cli {
    /// Graph file (`sigma` / `v` / `e` lines).
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Query file: one line of symbols.
    #[arg(long, global = true)]
    query: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact matching: a walk spelling the query.
    Match,
    /// Minimum number of substitutions.
    MinEdits {
        #[arg(long, value_enum, default_value_t = EditSide::Both)]
        mode: EditSide,
        /// Refuse cyclic graphs instead of falling back to exhaustive search
        /// for label edits.
        #[arg(long)]
        dag_only: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Compatibility by color coding (unit labels only).
    Compat {
        #[arg(long, value_enum, default_value_t = CompatMode::Det)]
        mode: CompatMode,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Maximum number of DP evaluations.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Exhaustive reference solvers.
    Oracle {
        #[command(subcommand)]
        problem: OracleProblem,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Build a matching instance from an h-Path or Set Cover instance.
    Reduce {
        #[arg(value_enum)]
        kind: ReductionKind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_graph: PathBuf,
        #[arg(long)]
        out_query: PathBuf,
    },
    /// Generate a seeded random instance.
    Gen {
        #[command(flatten)]
        spec: GenArgs,
        #[arg(long)]
        out_graph: PathBuf,
        #[arg(long)]
        out_query: PathBuf,
    },
    /// Run solvers over a seeded corpus and cross-check their answers.
    Bench {
        #[command(flatten)]
        spec: GenArgs,
        /// Number of instances; instance i uses seed `--seed + i`.
        #[arg(long, default_value_t = 20)]
        count: u64,
        /// Comma-separated solver names (default: all).
        #[arg(long, value_delimiter = ',')]
        solvers: Vec<Solver>,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        workers: Option<usize>,
        /// CSV destination (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a witness document against the graph and query.
    Verify {
        #[arg(long)]
        witness: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EditSide {
    Query,
    Labels,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CompatMode {
    Det,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReductionKind {
    HpathUnit,
    HpathBin,
    Setcover,
}

#[derive(Subcommand, Debug)]
enum OracleProblem {
    Compat,
    MinEdits {
        #[arg(long, value_enum, default_value_t = EditSide::Both)]
        mode: EditSide,
    },
    Hpath {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Setcover {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 6)]
    vertices: usize,
    #[arg(long, default_value_t = 0.3)]
    edge_probability: f64,
    #[arg(long, default_value_t = 3)]
    alphabet: usize,
    #[arg(long, default_value_t = 2)]
    max_label: usize,
    #[arg(long, default_value_t = 4)]
    query_length: usize,
    #[arg(long, value_enum, default_value_t = ShapeArg::General)]
    shape: ShapeArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    General,
    Dag,
    UnitLabels,
}

impl GenArgs {
    fn spec(&self, seed: u64) -> GenSpec {
        GenSpec {
            vertex_count: self.vertices,
            edge_probability: self.edge_probability,
            alphabet_size: self.alphabet,
            max_label_length: self.max_label,
            query_length: self.query_length,
            seed,
            shape: match self.shape {
                ShapeArg::General => Shape::General,
                ShapeArg::Dag => Shape::Dag,
                ShapeArg::UnitLabels => Shape::UnitLabels,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let mut out = std::io::stdout().lock();
    match &cli.command {
        Command::Match => {
            let (g, q) = load_instance(cli)?;
            let witness = exact_match(&g, &q);
            report(&mut out, cli.format, &g, &q, witness.as_ref(), "no")
        }
        Command::MinEdits { mode, dag_only, budget } => {
            let (g, q) = load_instance(cli)?;
            let witness = min_edits(&g, &q, *mode, *dag_only, OracleBudget { max_walks: *budget })?;
            report(&mut out, cli.format, &g, &q, witness.as_ref(), "no")
        }
        Command::Compat {
            mode,
            delta,
            trials,
            workers,
        } => {
            let (g, q) = load_instance(cli)?;
            let mut config = match mode {
                CompatMode::Det => FptConfig::deterministic(),
                CompatMode::Mc => FptConfig::randomized(*delta, cli.seed)?,
            };
            config.trial_budget = *trials;
            config.workers = *workers;
            let outcome = fpt_compatible(&g, &q, &config)?;
            let negative = match outcome.decision {
                FptDecision::ProbablyNo { delta } => format!("probably-no (delta {delta})"),
                _ => "no".to_string(),
            };
            report(&mut out, cli.format, &g, &q, outcome.witness.as_ref(), &negative)
        }
        Command::Oracle { problem, budget } => {
            let budget = OracleBudget { max_walks: *budget };
            match problem {
                OracleProblem::Compat => {
                    let (g, q) = load_instance(cli)?;
                    let witness = oracle_compatible(&g, &q, budget)?
                        .map(|walk| MatchWitness::with_label_edits(&g, &q, walk))
                        .transpose()?;
                    report(&mut out, cli.format, &g, &q, witness.as_ref(), "no")
                }
                OracleProblem::MinEdits { mode } => {
                    let (g, q) = load_instance(cli)?;
                    let witness = match mode {
                        EditSide::Labels => oracle_min_edits_restricted(&g, &q, budget)?
                            .map(|s| MatchWitness::with_label_edits(&g, &q, s.walk))
                            .transpose()?,
                        EditSide::Both => oracle_min_edits_both(&g, &q, budget)?
                            .map(|s| MatchWitness::cheapest(&g, &q, s.walk))
                            .transpose()?,
                        EditSide::Query => oracle_min_edits_query_only(&g, &q, budget)?
                            .map(|s| MatchWitness::with_query_edits(&g, &q, s.walk))
                            .transpose()?,
                    };
                    report(&mut out, cli.format, &g, &q, witness.as_ref(), "no")
                }
                OracleProblem::Hpath { input } => {
                    let inst = HPathInstance::parse(&read(input)?)?;
                    let path = oracle_hpath(&inst.graph, inst.h);
                    let rendered = path.as_ref().map(|p| join(p.iter()));
                    answer_line(&mut out, cli.format, "path", rendered)
                }
                OracleProblem::Setcover { input } => {
                    let inst = SetCoverInstance::parse(&read(input)?)?;
                    let cover = oracle_set_cover(inst.n, &inst.sets)?;
                    let rendered = cover.as_ref().map(|c| join(c.iter().map(|i| format!("S{}", i + 1))));
                    answer_line(&mut out, cli.format, "cover", rendered)
                }
            }
        }
        Command::Reduce {
            kind,
            input,
            out_graph,
            out_query,
        } => {
            let text = read(input)?;
            let artifact = match kind {
                ReductionKind::HpathUnit => reduce_hpath_unit(&HPathInstance::parse(&text)?),
                ReductionKind::HpathBin => reduce_hpath_binary(&HPathInstance::parse(&text)?),
                ReductionKind::Setcover => reduce_setcover(&SetCoverInstance::parse(&text)?),
            };
            let (g, q) = (&artifact.target_graph, &artifact.target_query);
            write(out_graph, &serialize_graph(g))?;
            write(out_query, &serialize_query(q, g.alphabet()))?;
            writeln!(out, "vertices {}", g.vertex_count())?;
            writeln!(out, "edges {}", g.edge_count())?;
            writeln!(out, "query-length {}", q.len())?;
            if let ReductionSource::SetCover { optimum_is_n, .. } = artifact.source {
                let tag = optimum_is_n.map_or("unknown".to_string(), |b| b.to_string());
                writeln!(out, "optimum-equals-n {tag}")?;
            }
            Ok(EXIT_YES)
        }
        Command::Gen {
            spec,
            out_graph,
            out_query,
        } => {
            let (g, q) = gen_instance(&spec.spec(cli.seed))?;
            write(out_graph, &serialize_graph(&g))?;
            write(out_query, &serialize_query(&q, g.alphabet()))?;
            Ok(EXIT_YES)
        }
        Command::Bench {
            spec,
            count,
            solvers,
            delta,
            budget,
            workers,
            out: dest,
        } => {
            let corpus = (0..*count)
                .map(|i| {
                    let seed = cli.seed.wrapping_add(i);
                    let (graph, query) = gen_instance(&spec.spec(seed))?;
                    Ok(BenchInstance {
                        id: format!("inst-{i}"),
                        graph,
                        query,
                        seed,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let solvers = if solvers.is_empty() {
                Solver::ALL.to_vec()
            } else {
                solvers.clone()
            };
            let config = SuiteConfig {
                budget: OracleBudget { max_walks: *budget },
                delta: *delta,
                workers: *workers,
            };
            let suite = run_suite(&corpus, &solvers, &config)?;
            match dest {
                Some(path) => {
                    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    write_csv(&suite.records, file)?;
                }
                None => write_csv(&suite.records, &mut out)?,
            }
            for d in &suite.disagreements {
                eprintln!("disagreement on {}: {}", d.instance, d.detail);
            }
            Ok(if suite.passed() { EXIT_YES } else { EXIT_CROSS_CHECK })
        }
        Command::Verify { witness } => {
            let (g, q) = load_instance(cli)?;
            let doc = WitnessDocument::from_json(&read(witness)?).context("parsing witness")?;
            let w = doc.into_witness(&g)?;
            match verify_witness(&g, &q, &w) {
                Ok(cost) => {
                    writeln!(out, "valid cost {cost}")?;
                    Ok(EXIT_YES)
                }
                Err(e) => {
                    writeln!(out, "invalid: {e}")?;
                    Ok(EXIT_NO)
                }
            }
        }
    }
}

fn min_edits(
    g: &LabeledGraph,
    q: &QueryString,
    mode: EditSide,
    dag_only: bool,
    budget: OracleBudget,
) -> Result<Option<MatchWitness>> {
    if mode == EditSide::Query {
        return Ok(min_edits_query_only(g, q).map(|m| m.witness));
    }
    if is_dag(g).is_some() {
        let edit_mode = if mode == EditSide::Labels {
            EditMode::LabelsOnly
        } else {
            EditMode::Both
        };
        return Ok(min_edits_dag(g, q, edit_mode)?.map(|m| m.witness));
    }
    if dag_only {
        bail!("graph is cyclic and --dag-only was given");
    }
    eprintln!("note: graph is cyclic, using exhaustive search");
    Ok(match mode {
        EditSide::Labels => oracle_min_edits_restricted(g, q, budget)?
            .map(|s| MatchWitness::with_label_edits(g, q, s.walk))
            .transpose()?,
        _ => oracle_min_edits_both(g, q, budget)?
            .map(|s| MatchWitness::cheapest(g, q, s.walk))
            .transpose()?,
    })
}

/// Prints the answer and, on success, the witness. Exit code 0 on a
/// witness, 1 otherwise.
fn report(
    out: &mut impl Write,
    format: Format,
    g: &LabeledGraph,
    q: &QueryString,
    witness: Option<&MatchWitness>,
    negative: &str,
) -> Result<u8> {
    match (format, witness) {
        (Format::Text, Some(w)) => {
            writeln!(out, "yes cost {}", w.cost())?;
            writeln!(out, "{}", w.to_json(g, q))?;
        }
        (Format::Text, None) => writeln!(out, "{negative}")?,
        (Format::Csv, w) => {
            writeln!(out, "answer,cost,walk")?;
            match w {
                Some(w) => writeln!(out, "yes,{},{}", w.cost(), join(w.walk.vertices().iter()))?,
                None => writeln!(out, "{negative},,")?,
            }
        }
    }
    Ok(if witness.is_some() { EXIT_YES } else { EXIT_NO })
}

fn answer_line(out: &mut impl Write, format: Format, what: &str, found: Option<String>) -> Result<u8> {
    match (format, &found) {
        (Format::Text, Some(v)) => writeln!(out, "yes {what} {v}")?,
        (Format::Text, None) => writeln!(out, "no")?,
        (Format::Csv, _) => {
            writeln!(out, "answer,{what}")?;
            writeln!(out, "{},{}", if found.is_some() { "yes" } else { "no" }, found.as_deref().unwrap_or(""))?;
        }
    }
    Ok(if found.is_some() { EXIT_YES } else { EXIT_NO })
}

fn load_instance(cli: &Cli) -> Result<(LabeledGraph, QueryString)> {
    let Some(gpath) = &cli.graph else {
        bail!("--graph is required");
    };
    let Some(qpath) = &cli.query else {
        bail!("--query is required");
    };
    let g = parse_graph(&read(gpath)?).with_context(|| format!("parsing {}", gpath.display()))?;
    let q = parse_query(&read(qpath)?, g.alphabet()).with_context(|| format!("parsing {}", qpath.display()))?;
    Ok((g, q))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
