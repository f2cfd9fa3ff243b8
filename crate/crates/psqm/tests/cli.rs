use std::path::Path;
use std::process::{Command, Output};

use psqm::report::Report;
use serde_json::Value;

fn psqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psqm")).args(args).output().expect("binary runs")
}

fn report_of(out: &Output) -> Report {
    Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).expect("stdout is a report")
}

fn write_table(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn transcript_outputs(r: &Report) -> Value {
    r.transcripts.as_ref().unwrap()[0]["output_distribution"].clone()
}

#[test]
fn run_examples() {
    let out = psqm(&["run", "--protocol", "sum2", "--k", "2", "--inputs", "00,00"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(transcript_outputs(&report_of(&out))["00"], 1.0);

    let out = psqm(&["run", "--protocol", "dj", "--n", "4", "--inputs", "0011,0011"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(transcript_outputs(&report_of(&out))["1"], 1.0);

    let out = psqm(&["run", "--protocol", "geq", "--k", "2", "--l", "1", "--inputs", "01,10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(transcript_outputs(&report_of(&out))["0"], 1.0);
}

#[test]
fn run_enumerates_inputs() {
    let out = psqm(&["run", "--protocol", "sum2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report_of(&out);
    assert_eq!(r.transcripts.unwrap().as_array().unwrap().len(), 16);
    assert_eq!(r.cost.unwrap().value, 2);
}

#[test]
fn off_promise_run_is_unchecked() {
    let out = psqm(&["run", "--protocol", "dj", "--n", "4", "--inputs", "0000,0001"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report_of(&out);
    assert_eq!(r.checks[0].pass, None);
    assert_eq!(r.transcripts.unwrap()[0]["reference"], Value::Null);
}

#[test]
fn verify_examples() {
    for (args, cost, unit) in [
        (&["verify", "--protocol", "sum2", "--k", "3"][..], 4, "qubits"),
        (&["verify", "--protocol", "geq", "--k", "4", "--l", "1"][..], 4, "qubits"),
        (&["verify", "--protocol", "dj", "--n", "4"][..], 4, "bits"),
    ] {
        let out = psqm(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let r = report_of(&out);
        let c = r.cost.unwrap();
        assert_eq!((c.value, c.unit.as_str()), (cost, unit));
        assert_eq!(r.elapsed_ms, None);
    }
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["verify", "--protocol", "sum2", "--k", "1"][..],
        &["verify", "--protocol", "sum2"][..],
        &["verify", "--protocol", "dj", "--n", "6"][..],
        &["verify", "--protocol", "dj", "--n", "4", "--k", "2"][..],
        &["verify", "--protocol", "sum2", "--k", "2", "--tol", "-1"][..],
        &["verify", "--protocol", "geq", "--k", "3", "--l", "3"][..],
        &["run", "--protocol", "sum2", "--k", "2", "--inputs", "00"][..],
        &["run", "--protocol", "sum2", "--k", "2", "--inputs", "00,0x"][..],
        &["stats", "--n", "3", "--trials", "1", "--seed", "1"][..],
        &["stats", "--n", "2", "--trials", "5"][..],
        &["bound", "--table", "/nonexistent/table.json"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(psqm(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sampled_verify_needs_a_seed() {
    let base = ["verify", "--protocol", "sum2", "--k", "2", "--budget", "4"];
    assert_eq!(psqm(&base).status.code(), Some(2));
    let mut seeded = base.to_vec();
    seeded.extend(["--seed", "3"]);
    let out = psqm(&seeded);
    assert_eq!(out.status.code(), Some(0));
    let r = report_of(&out);
    assert_eq!(r.check("correctness").unwrap().coverage["kind"], "sampled");
}

#[test]
fn bound_examples() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_table(dir.path(), "eq.json", r#"{"rows":["0","1"],"cols":["0","1"],"entries":[[1,0],[0,1]]}"#);
    let out = psqm(&["bound", "--table", &eq]);
    assert_eq!(out.status.code(), Some(0));
    let r = report_of(&out);
    assert_eq!(r.check("lower_bound").unwrap().witnesses["value"], 0.0);
    assert_eq!(r.check("alpha").unwrap().witnesses["value"], 1.0);
    assert_eq!(r.check("beta").unwrap().witnesses["value"], 0.5);
    assert_eq!(r.check("alpha").unwrap().witnesses["witness"][1]["rows"], serde_json::json!(["1", "0"]));

    let dj =
        write_table(dir.path(), "dj2.json", &psqm::table_io::table_to_json(&psqm_core::bounds::dj_table(2).unwrap()));
    let r = report_of(&psqm(&["bound", "--table", &dj]));
    let cl = &r.check("clique_sizes").unwrap().witnesses;
    assert_eq!((cl["rows"].as_u64(), cl["cols"].as_u64()), (Some(2), Some(2)));

    let constant = write_table(dir.path(), "c.json", r#"{"rows":["a","b"],"cols":["a","b"],"entries":[[1,1],[1,1]]}"#);
    let out = psqm(&["bound", "--table", &constant]);
    assert_eq!(out.status.code(), Some(1));
    let r = report_of(&out);
    assert_eq!(r.check("non_degenerate").unwrap().pass, Some(false));
    assert!(r.check("lower_bound").unwrap().witnesses["refused"].is_string());

    let bad = write_table(dir.path(), "bad.json", r#"{"rows":["a"],"cols":["a","b"],"entries":[[1]]}"#);
    assert_eq!(psqm(&["bound", "--table", &bad]).status.code(), Some(2));
}

#[test]
fn stats_examples() {
    let out = psqm(&["stats", "--n", "1", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let w = report_of(&out).checks[0].witnesses.clone();
    assert_eq!(w["tables"], 16);
    assert_eq!(w["non_degenerate"], 10);

    let out = psqm(&["stats", "--n", "2", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let w = report_of(&out).checks[0].witnesses.clone();
    assert_eq!(w["tables"], 0);
    assert_eq!(w["bound"], Value::Null);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["stats", "--n", "2", "--trials", "30", "--seed", "9"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = psqm(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), psqm(&args).stdout);
}

#[test]
fn help_exits_zero() {
    let out = psqm(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify"));
}
