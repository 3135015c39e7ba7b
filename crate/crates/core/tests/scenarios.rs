//! Builtin scenarios, scenario files and the command-line runner.

use std::path::Path;
use std::process::Command;

use depth_charge::rb::Backend;
use depth_charge::scenario::{self, RunOptions, Scenario, ScenarioError, BUILTINS};

const BIN: &str = env!("CARGO_BIN_EXE_depth-charge");

fn builtin_text(name: &str) -> &'static str {
    BUILTINS.iter().find(|(n, _)| *n == name).expect("builtin").1
}

fn without_mtf(name: &str) -> String {
    builtin_text(name).replacen("[table]\n", "[table]\nmove_to_front = false\n", 1)
}

#[test]
fn every_builtin_passes_for_twenty_seeds() {
    for (name, _) in BUILTINS {
        let sc = Scenario::builtin(name).unwrap();
        for seed in 0..20 {
            let out = scenario::run(&sc, &RunOptions { seed, ..Default::default() }).unwrap();
            let failed: Vec<_> = out.summary.checks.iter().filter(|c| !c.satisfied).collect();
            assert!(out.summary.passed, "{name} seed {seed}: {failed:?}");
            assert!(!out.summary.checks.is_empty());
        }
    }
}

#[test]
fn trace_has_one_row_per_serviced_request() {
    for (name, _) in BUILTINS {
        let sc = Scenario::builtin(name).unwrap();
        let out = scenario::run(&sc, &RunOptions { seed: 1, trace: true, ..Default::default() }).unwrap();
        let rows = out.trace.unwrap();
        let ops = out.summary.ops;
        assert_eq!(rows.len() as u64, ops.settled + ops.free_probes, "{name}");
        let rb: u64 = rows.iter().map(|r| r.rb_charged).sum();
        assert_eq!(rb, out.summary.ledger.algorithm_rb + out.summary.ledger.adversary_rb, "{name}");
        assert!(rows.windows(2).all(|w| w[0].seq < w[1].seq));
    }
}

#[test]
fn seed_changes_the_run() {
    let sc = Scenario::builtin("no-attack").unwrap();
    let a = scenario::run(&sc, &RunOptions { seed: 1, ..Default::default() }).unwrap();
    let b = scenario::run(&sc, &RunOptions { seed: 2, ..Default::default() }).unwrap();
    assert_ne!(a.summary.ledger, b.summary.ledger);
}

#[test]
fn pow_backend_gives_same_ledger_as_accounting_backend() {
    let sc = Scenario::builtin("even-spread-insert").unwrap();
    let ledger = scenario::run(&sc, &RunOptions { seed: 4, backend: Some(Backend::Ledger), trace: false }).unwrap();
    let pow = scenario::run(&sc, &RunOptions { seed: 4, backend: Some(Backend::pow()), trace: false }).unwrap();
    assert_eq!(ledger.summary.ledger, pow.summary.ledger);
    assert_eq!(pow.summary.work.verify_evaluations, pow.summary.work.client.rb_units + pow.summary.work.adversary.rb_units);
    assert!(pow.summary.work.client.hash_evaluations > 0);
    assert_eq!(ledger.summary.work.client.hash_evaluations, 0);
}

#[test]
fn disabling_move_to_front_fails_pump_scenario() {
    let sc = Scenario::from_toml(&without_mtf("mtf-pump-repeat")).unwrap();
    let out = scenario::run(&sc, &RunOptions::default()).unwrap();
    assert!(!out.summary.passed);
    assert!(out.summary.wallet.unwrap().violations > 0);
}

#[test]
fn validation_names_the_offending_field() {
    let bad = builtin_text("no-attack").replace("index_count = 1024", "index_count = 0");
    match Scenario::from_toml(&bad) {
        Err(ScenarioError::Invalid { field, .. }) => assert_eq!(field, "table.index_count"),
        other => panic!("expected a validation error, got {other:?}"),
    }
    let bad = builtin_text("single-list-flood").replace("index = 17", "index = 5000");
    match Scenario::from_toml(&bad) {
        Err(ScenarioError::Invalid { field, .. }) => assert!(field.contains("index"), "{field}"),
        other => panic!("expected a validation error, got {other:?}"),
    }
    assert!(matches!(Scenario::from_toml("name = 3"), Err(ScenarioError::Parse(_))));
    assert!(matches!(Scenario::load("no-such-scenario"), Err(ScenarioError::UnknownBuiltin(_))));
}

#[test]
fn scenario_file_loads_like_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.toml");
    std::fs::write(&path, builtin_text("no-attack")).unwrap();
    let from_file = Scenario::load(path.to_str().unwrap()).unwrap();
    assert_eq!(from_file, Scenario::builtin("no-attack").unwrap());
}

fn run_cli(args: &[&str], out_dir: Option<&Path>) -> std::process::Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("DEPTH_CHARGE_OUT_DIR");
    if let Some(d) = out_dir {
        cmd.env("DEPTH_CHARGE_OUT_DIR", d);
    }
    cmd.output().expect("runs")
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run_cli(&["run", "single-list-flood", "--seed", "3"], None);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["seed"], 3);

    let negative = dir.path().join("negative.toml");
    std::fs::write(&negative, without_mtf("mtf-pump-repeat")).unwrap();
    let failed = run_cli(&["run", negative.to_str().unwrap()], None);
    assert_eq!(failed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&failed.stderr).contains("check failed: per_list_query"));

    let invalid = dir.path().join("invalid.toml");
    std::fs::write(&invalid, builtin_text("no-attack").replace("index_count = 1024", "index_count = 0")).unwrap();
    let err = run_cli(&["run", invalid.to_str().unwrap()], None);
    assert_eq!(err.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&err.stderr).contains("table.index_count"));

    assert_eq!(run_cli(&["run", "nonexistent"], None).status.code(), Some(2));
}

#[test]
fn cli_writes_csv_and_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("summary.csv");
    let trace = dir.path().join("trace.csv");
    let r = run_cli(
        &[
            "run",
            "even-spread-insert",
            "--seed",
            "5",
            "--backend",
            "pow",
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("field,value\n"));
    assert!(csv.contains("backend.kind,pow\n"), "{csv}");
    let mut reader = csv::Reader::from_path(&trace).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "seq");
    assert!(reader.records().count() > 0);
}

#[test]
fn cli_uses_output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_cli(&["run", "no-attack", "--seed", "9"], Some(dir.path()));
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty());
    let written = dir.path().join("no-attack-seed9.json");
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(written).unwrap()).unwrap();
    assert_eq!(summary["scenario"], "no-attack");
}

#[test]
fn cli_lists_and_shows_builtins() {
    let list = run_cli(&["list"], None);
    let text = String::from_utf8_lossy(&list.stdout);
    for (name, _) in BUILTINS {
        assert!(text.contains(name));
    }
    let show = run_cli(&["show", "mtf-pump-repeat"], None);
    assert_eq!(String::from_utf8_lossy(&show.stdout), builtin_text("mtf-pump-repeat"));
}
