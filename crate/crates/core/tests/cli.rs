//! End-to-end runs of the `lucaswalk` binary.

use std::process::{Command, Output};

use lucaswalk::report::{Payload, ReportEnvelope};
use lucaswalk::walker::SimulationOutcome;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lucaswalk"))
        .args(args)
        .env_remove("LUCASWALK_MAX_INDEX")
        .env_remove("LUCASWALK_MARGIN")
        .output()
        .expect("binary runs")
}

fn envelope(args: &[&str]) -> ReportEnvelope {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    ReportEnvelope::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_base_ten() {
    let env = envelope(&["analyze", "--base", "10", "--digits", "1"]);
    let Payload::BoundReport(r) = env.payload else { panic!("wrong payload") };
    assert_eq!((r.n_star, r.k_paper, r.theorem_bound, r.l_max), (6, Some(8), 14, 2));
    assert_eq!(env.schema_version, 1);
}

#[test]
fn analyze_csv_is_one_row() {
    let out = run(&["analyze", "--base", "4", "--digits", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("schema_version,p,q,base,digits,n_star,k_paper,k_exact"));
    assert!(lines[1].starts_with("1,1,-1,4,1,"));
}

#[test]
fn analyze_rejects_bad_flags() {
    let out = run(&["analyze", "--base", "1", "--digits", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("b >= 2"));
    let out = run(&["analyze", "--base", "10", "--digits", "1", "--params", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("|Q|"));
    assert_eq!(run(&["analyze", "--base", "10"]).status.code(), Some(2));
}

#[test]
fn analyze_is_deterministic() {
    let args = ["analyze", "--base", "7", "--digits", "3", "--format", "json"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

fn witnesses(args: &[&str]) -> Vec<(u64, u64, u32, String)> {
    let Payload::Witnesses(ws) = envelope(args).payload else { panic!("wrong payload") };
    ws.into_iter().map(|w| (w.m, w.k, w.t, w.r.to_string())).collect()
}

#[test]
fn steps_examples() {
    let all4 = witnesses(&["steps", "--base", "4", "--digits", "1", "--all"]);
    assert!(all4.contains(&(7, 3, 1, "3".into())));
    let mut sorted = all4.clone();
    sorted.sort_by_key(|w| (w.0, w.2, w.1));
    assert_eq!(sorted, all4);
    assert!(witnesses(&["steps", "--base", "10", "--digits", "1", "--from-index", "7"]).is_empty());
    let all11 = witnesses(&["steps", "--base", "11", "--digits", "1", "--all"]);
    assert!(all11.contains(&(11, 5, 1, "8".into())));
}

#[test]
fn steps_csv_header() {
    let out = run(&["steps", "--base", "10", "--digits", "1", "--from-index", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "m,k,t,r\n2,5,1,3\n");
}

#[test]
fn walk_examples() {
    let Payload::Walk(w) = envelope(&["walk", "--base", "10", "--digits", "1", "--start-value", "1", "--blocks", "1:3"]).payload
    else {
        panic!("wrong payload")
    };
    assert!(matches!(w.outcome, SimulationOutcome::Completed { .. }));
    let values: Vec<String> = w.values.iter().map(ToString::to_string).collect();
    assert_eq!(values, ["1", "13"]);

    let Payload::Walk(w) = envelope(&["walk", "--base", "4", "--digits", "1", "--longest"]).payload else {
        panic!("wrong payload")
    };
    assert_eq!(w.length, 3);

    let out = run(&["walk", "--base", "10", "--digits", "1", "--start-value", "4", "--blocks", "1:1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("3 and 5"));
}

#[test]
fn walk_failing_block_exits_three() {
    let out = run(&["walk", "--base", "10", "--digits", "1", "--start-value", "1", "--blocks", "1:4"]);
    assert_eq!(out.status.code(), Some(3));
    let env = ReportEnvelope::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let Payload::Walk(w) = env.payload else { panic!("wrong payload") };
    assert!(matches!(w.outcome, SimulationOutcome::Failed { .. }));
}

#[test]
fn verify_examples() {
    for args in [
        &["verify", "--suite", "identities", "--max-m", "200"][..],
        &["verify", "--suite", "differential", "--base", "4", "--digits", "1"],
        &["verify", "--suite", "growth", "--max-m", "500"],
    ] {
        let Payload::Suites(rs) = envelope(args).payload else { panic!("wrong payload") };
        assert!(rs.iter().all(|r| r.passed && r.checks > 0), "{args:?}: {rs:?}");
    }
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(2));
}

#[test]
fn certify_examples() {
    for (args, threshold) in [
        (&["certify", "--base", "10", "--digits", "1"][..], Some(13)),
        (&["certify", "--base", "14", "--digits", "1", "--params", "2,-1"], None),
        (&["certify", "--base", "8", "--digits", "1", "--params", "3,1"], None),
    ] {
        let Payload::Certificate(c) = envelope(args).payload else { panic!("wrong payload") };
        assert_eq!(c.conclusion, "TERMINATES");
        if let Some(t) = threshold {
            assert_eq!(c.threshold, t);
        }
        c.check().unwrap();
    }
    let Payload::Certificate(c) = envelope(&["certify", "--base", "14", "--digits", "1", "--params", "2,-1"]).payload
    else {
        panic!("wrong payload")
    };
    assert_eq!(c.rigidity_solutions.iter().map(|s| (s.k, s.t)).collect::<Vec<_>>(), [(3, 1)]);
}

#[test]
fn certify_failures() {
    assert_eq!(run(&["certify", "--base", "10", "--digits", "1", "--margin", "0"]).status.code(), Some(2));
    let out = run(&["certify", "--base", "10", "--digits", "1", "--max-index", "14"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("certification"));
}

#[test]
fn environment_sets_defaults_and_flags_win() {
    let bin = env!("CARGO_BIN_EXE_lucaswalk");
    let args = ["certify", "--base", "10", "--digits", "1"];
    let out = Command::new(bin).args(args).env("LUCASWALK_MAX_INDEX", "14").output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = Command::new(bin).args(args).args(["--max-index", "1000"]).env("LUCASWALK_MAX_INDEX", "14").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(bin).args(args).env("LUCASWALK_MARGIN", "7").output().unwrap();
    let env = ReportEnvelope::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let Payload::Certificate(c) = env.payload else { panic!("wrong payload") };
    assert_eq!(c.scan_margin, 7);
}
