//! The `acm` command line, driven in process through `run_cli`.

use std::fs;

use acm_harness::{run_cli, Report, VerdictStatus};
use acm_trace::Trace;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(std::iter::once("acm").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn passing_exploration_exits_zero() {
    let (code, out, _) = run(&["explore", "--machine", "fourslot", "--writes", "2", "--reads", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("slot-disjointness"));
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn swap_pair_exits_one_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, out, _) = run(&[
        "explore", "--machine", "fourslot", "--writes", "2", "--reads", "2", "--mutation", "swap-pair", "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("counterexample for slot-disjointness:"), "{out}");
    let report = Report::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    let v = report.verdict("slot-disjointness").unwrap();
    assert_eq!(v.status, VerdictStatus::Fail);
    // The embedded trace is in the trace text format.
    let tr: Trace = v.counterexample.as_deref().unwrap().parse().unwrap();
    assert!(tr.len() > 1);
}

#[test]
fn law_two_exits_zero() {
    let (code, out, _) = run(&["laws", "--law", "2", "--values", "3", "--env-steps", "4"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn weakened_law_exits_one() {
    let (code, out, _) = run(&["laws", "--law", "3", "--values", "2", "--env-steps", "2", "--weakened"]);
    assert_eq!(code, 1);
    assert!(out.contains("counterexample for single-reference:"), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["explore", "--machine", "fourslot", "--writes", "1", "--reads", "1", "--bogus"][..],
        &["explore", "--machine", "nine-slot", "--writes", "1", "--reads", "1"],
        &["explore", "--machine", "fourslot", "--writes", "1"],
        &["explore", "--machine", "fourslot", "--writes", "1", "--reads", "1", "--mutation", "off-by-one"],
        &["laws", "--law", "5", "--values", "2", "--env-steps", "1"],
        &["frobnicate"],
        &[],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.contains("Usage:") || err.contains("--help"), "{args:?}: {err}");
    }
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["laws", "--law", "2", "--values", "9", "--env-steps", "1"][..],
        &["explore", "--machine", "oneplace", "--writes", "1", "--reads", "1", "--mutation", "swap-pair"],
        &["stress", "--ops", "10", "--payload-words", "0", "--seed", "1"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.starts_with("error:"), "{err}");
    }
}

#[test]
fn truncated_search_exits_one() {
    let (code, out, _) =
        run(&["explore", "--machine", "fourslot", "--writes", "2", "--reads", "2", "--state-cap", "100"]);
    assert_eq!(code, 1);
    assert!(out.contains("fail     state-space"), "{out}");
}

#[test]
fn unwritable_sink_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("r.json");
    let (code, _, err) =
        run(&["laws", "--law", "2", "--values", "2", "--env-steps", "1", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot write report"), "{err}");
}

#[test]
fn json_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("{i}.json"));
        let p = path.to_str().unwrap();
        run(&["explore", "--machine", "intermediate:4", "--writes", "2", "--reads", "2", "--json", p]);
        bodies.push(fs::read(&path).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let report = Report::from_json(std::str::from_utf8(&bodies[0]).unwrap()).unwrap();
    assert_eq!(report.command, "explore");
    assert_eq!(report.config["machine"], "intermediate:4");
}

#[test]
fn stress_report_has_five_counters() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let (code, out, _) =
        run(&["stress", "--ops", "5000", "--payload-words", "8", "--seed", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let report = Report::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    let names: Vec<&str> = report.counters.keys().map(String::as_str).collect();
    assert_eq!(names, ["monotonicity_violations", "reads", "torn_count", "window_violations", "writes"]);
    assert_eq!(report.counters["reads"], 5000);
    assert_eq!(report.config["seed"], 3);
}

#[test]
fn zero_op_stress_is_empty() {
    let (code, out, _) = run(&["stress", "--ops", "0", "--payload-words", "1", "--seed", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("reads=0"), "{out}");
}

#[test]
fn demo_narrates_and_passes() {
    let (code, out, _) = run(&["demo"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("all checks held"));
    assert!(!out.contains("WRONG"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["explore", "laws", "stress", "demo"] {
        assert!(out.contains(sub), "{out}");
    }
}
