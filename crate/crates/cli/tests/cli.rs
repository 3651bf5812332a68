use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const A2: &str = "[[0,1],[-1,0]]";

fn clustersync(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clustersync"))
        .args(args)
        .env_remove("CLUSTERSYNC_MAX_NODES")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn mutate_a2_once() {
    let out = clustersync(&["mutate", "--B", A2, "--coeff", "trivial", "--word", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "mutate");
    assert_eq!(v["node"]["seeds"][0]["x"], serde_json::json!(["(x2 + 1)/(x1)", "x2"]));
    assert_eq!(v["node"]["seeds"][0]["b"], serde_json::json!([[0, -1], [1, 0]]));
}

#[test]
fn empty_word_echoes_the_initial_seed() {
    let v = json(&clustersync(&["mutate", "--B", A2, "--coeff", "principal"]));
    let seed = &v["node"]["seeds"][0];
    assert_eq!(seed["x"], serde_json::json!(["x1", "x2"]));
    assert_eq!(seed["y"], serde_json::json!(["y1", "y2"]));
    assert_eq!(seed["b"], serde_json::json!([[0, 1], [-1, 0]]));
    assert_eq!(v["node"]["fgc"]["c"], serde_json::json!([[1, 0], [0, 1]]));
}

#[test]
fn unreduced_word_is_rejected() {
    let out = clustersync(&["mutate", "--B", A2, "--word", "11"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not reduced") && err.contains("normalizes to the empty word"), "{err}");
    let out = clustersync(&["mutate", "--B", A2, "--word", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_skew_symmetrizable_b_is_a_usage_error() {
    let out = clustersync(&["verify", "--B", "[[0,1],[1,0]]", "--closure"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn a2_exchange_graph_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("a2.dot");
    let report = dir.path().join("a2.json");
    let out = clustersync(&[
        "exchange-graph",
        "--B",
        A2,
        "--closure",
        "--dot",
        dot.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph exchange {"));
    assert_eq!(text.lines().filter(|l| l.contains("[label=")).count(), 5);
    assert_eq!(text.matches(" -- ").count(), 5);
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 5);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn a2_period_search() {
    let v = json(&clustersync(&["period-search", "--B", A2, "--closure"]));
    let periods = v["periods"].as_array().unwrap();
    assert!(periods
        .iter()
        .any(|p| p["start"] == "" && p["word"] == "12121" && p["cycles"] == "(1 2)" && p["sigma"] == serde_json::json!([2, 1])));
    assert!(v["replay_failures"].as_array().unwrap().is_empty());
}

#[test]
fn a2_verify_all_suites() {
    let out = clustersync(&["verify", "--B", A2, "--closure", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["critical_failures"], 0);
    assert_eq!(v["sections"].as_array().unwrap().len(), 2);
}

#[test]
fn a2_synchronicity_trivial_and_universal() {
    let out = clustersync(&[
        "synchronicity", "--B", A2, "--closure", "--suite", "ca", "--coeff", "trivial", "--coeff", "universal",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let claims = v["sections"][0]["report"]["claims"].as_array().unwrap();
    assert!(claims.iter().any(|c| c["claim"] == "x[universal] <=> yseed[universal]"));
    assert!(claims.iter().all(|c| c["passed"] == true));
}

#[test]
fn node_cap_has_its_own_exit_code() {
    let out = clustersync(&["exchange-graph", "--B", "[[0,2],[-2,0]]", "--closure", "--max-nodes", "20"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["outcome"], "truncated");
    let out = Command::new(env!("CARGO_BIN_EXE_clustersync"))
        .args(["verify", "--B", "[[0,2],[-2,0]]", "--closure", "--suite", "ca"])
        .env("CLUSTERSYNC_MAX_NODES", "15")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn markov_depth_six_verifies() {
    let out = clustersync(&["verify", "--B", "[[0,2,-2],[-2,0,2],[2,-2,0]]", "--depth", "6", "--suite", "ca"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["sections"][0]["nodes"], 1 + 3 + 6 + 12 + 24 + 48 + 96);
}

#[test]
fn jobs_do_not_change_reports() {
    let args = |jobs: &str| {
        let out = clustersync(&["verify", "--B", "[[0,1,0],[-1,0,1],[0,-1,0]]", "--closure", "--jobs", jobs]);
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    assert_eq!(args("1"), args("4"));
}
