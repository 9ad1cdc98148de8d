use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn strgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

/// Reduces `source` with `kind` into `dir`, returning (graph, query) paths.
fn reduce(dir: &TempDir, kind: &str, source: &Path) -> (String, String) {
    let (g, q) = (path(dir, &format!("{kind}.graph")), path(dir, &format!("{kind}.query")));
    let out = strgraph(&["reduce", kind, "--in", source.to_str().unwrap(), "--out-graph", &g, "--out-query", &q]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    (g, q)
}

#[test]
fn setcover_reduction_matches_fixture() {
    let dir = TempDir::new().unwrap();
    let out = strgraph(&[
        "reduce",
        "setcover",
        "--in",
        fixture("worked.setcover").to_str().unwrap(),
        "--out-graph",
        &path(&dir, "g"),
        "--out-query",
        &path(&dir, "q"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "vertices 11\nedges 17\nquery-length 12\noptimum-equals-n false\n"
    );
    assert_eq!(fs::read_to_string(path(&dir, "g")).unwrap(), fs::read_to_string(fixture("worked.graph")).unwrap());
    assert_eq!(fs::read_to_string(path(&dir, "q")).unwrap(), fs::read_to_string(fixture("worked.query")).unwrap());
}

#[test]
fn restricted_oracle_on_worked_example() {
    let g = fixture("worked.graph");
    let q = fixture("worked.query");
    let out = strgraph(&[
        "--graph",
        g.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
        "--format",
        "csv",
        "oracle",
        "min-edits",
        "--mode",
        "labels",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "answer,cost,walk\nyes,2,0 1 4 0 2 7 0 1 5 0 1 6\n");

    let out = strgraph(&["oracle", "setcover", "--in", fixture("worked.setcover").to_str().unwrap()]);
    assert_eq!(stdout(&out), "yes cover S1 S2\n");
}

#[test]
fn match_exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = fixture("worked.graph");
    let yes = path(&dir, "yes.query");
    let no = path(&dir, "no.query");
    fs::write(&yes, "x0 x1 y1 x0\n").unwrap();
    fs::write(&no, "x1 x0\n").unwrap();
    let out = strgraph(&["--graph", g.to_str().unwrap(), "--query", &yes, "match"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("yes cost 0\n"));
    let out = strgraph(&["--graph", g.to_str().unwrap(), "--query", &no, "match"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "no\n");
}

#[test]
fn min_edits_modes() {
    let g = fixture("worked.graph");
    let q = fixture("worked.query");
    let base = ["--graph", g.to_str().unwrap(), "--query", q.to_str().unwrap(), "--format", "csv"];
    let run = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        strgraph(&args)
    };
    let out = run(&["min-edits", "--mode", "query"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("answer,cost,walk\nyes,"));
    let out = run(&["min-edits", "--mode", "labels"]);
    assert!(stdout(&out).contains("yes,2,"));
    let out = run(&["min-edits", "--mode", "labels", "--dag-only"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compat_on_hpath_reductions() {
    let dir = TempDir::new().unwrap();
    let (g, q) = reduce(&dir, "hpath-unit", &fixture("cycle4_h3.hpath"));
    let out = strgraph(&["--graph", &g, "--query", &q, "compat", "--mode", "det"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("yes cost 3\n"), "{text}");

    // the witness printed by compat verifies
    let witness = path(&dir, "w.json");
    fs::write(&witness, text.split_once('\n').unwrap().1).unwrap();
    let out = strgraph(&["--graph", &g, "--query", &q, "verify", "--witness", &witness]);
    assert_eq!(stdout(&out), "valid cost 3\n");
    assert_eq!(out.status.code(), Some(0));
    let tampered = fs::read_to_string(&witness).unwrap().replace("\"to\": \"y1\"", "\"to\": \"y2\"");
    fs::write(&witness, tampered).unwrap();
    let out = strgraph(&["--graph", &g, "--query", &q, "verify", "--witness", &witness]);
    assert_eq!(out.status.code(), Some(1));

    let star = path(&dir, "star.hpath");
    fs::write(&star, "4\n0 1\n0 2\n0 3\n3\n").unwrap();
    let (g, q) = reduce(&dir, "hpath-bin", Path::new(&star));
    let out = strgraph(&["--graph", &g, "--query", &q, "compat"]);
    assert_eq!(out.status.code(), Some(2), "binary labels are not unit labels");
    let (g, q) = reduce(&dir, "hpath-unit", Path::new(&star));
    let out = strgraph(&["--graph", &g, "--query", &q, "compat", "--mode", "det"]);
    assert_eq!((out.status.code(), stdout(&out)), (Some(1), "no\n".to_string()));
    let out = strgraph(&["--graph", &g, "--query", &q, "--seed", "4", "compat", "--mode", "mc", "--delta", "0.05"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "probably-no (delta 0.05)\n");
    let out = strgraph(&["--graph", &g, "--query", &q, "compat", "--mode", "mc", "--delta", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hpath_oracle() {
    let out = strgraph(&["oracle", "hpath", "--in", fixture("cycle4_h3.hpath").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "yes path 0 1 2\n");
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let (g, q) = (path(&dir, &format!("g{run}")), path(&dir, &format!("q{run}")));
        let out = strgraph(&["--seed", "17", "gen", "--vertices", "9", "--shape", "dag", "--out-graph", &g, "--out-query", &q]);
        assert_eq!(out.status.code(), Some(0));
        outputs.push((fs::read_to_string(g).unwrap(), fs::read_to_string(q).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(outputs[0].0.starts_with("sigma a b c\n"));
}

#[test]
fn bench_is_deterministic_apart_from_timings() {
    let strip_time = |csv: &str| -> Vec<String> {
        csv.lines()
            .map(|l| {
                let mut cols: Vec<&str> = l.split(',').collect();
                cols.remove(5);
                cols.join(",")
            })
            .collect()
    };
    let run = || {
        let out = strgraph(&["--seed", "3", "bench", "--count", "6", "--shape", "unit-labels", "--vertices", "5"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    let (a, b) = (run(), run());
    assert_eq!(strip_time(&a), strip_time(&b));
    assert_eq!(a.lines().count(), 1 + 6 * 11);
    assert!(a.starts_with("schema_version,instance,solver,answer,cost,time_us,trials,seed,note\n"));
}

#[test]
fn bench_empty_corpus_and_solver_selection() {
    let out = strgraph(&["bench", "--count", "0"]);
    assert_eq!(stdout(&out), "schema_version,instance,solver,answer,cost,time_us,trials,seed,note\n");
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "out.csv");
    let out = strgraph(&["bench", "--count", "4", "--shape", "dag", "--solvers", "oracle-restricted,dag-labels", "--out", &csv]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(csv).unwrap().lines().count(), 1 + 8);
    let out = strgraph(&["bench", "--solvers", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(strgraph(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(strgraph(&["match"]).status.code(), Some(2));
    let out = strgraph(&["--graph", "/nonexistent", "--query", "/nonexistent", "match"]);
    assert_eq!(out.status.code(), Some(2));
}
