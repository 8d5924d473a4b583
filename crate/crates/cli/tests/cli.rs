use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

const E8712: &str = r#"{"label": "8712.u5", "a_invariants": [0, 0, 0, 726, 9317], "rank_zero_asserted": true}"#;
const E49_SHORT: &str = r#"{"label": "49.a3 short", "ainvs": ["0", "0", "0", "-595", "-5586"]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chabauty")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn keys(v: &Value) -> Vec<&str> {
    v.as_object().unwrap().keys().map(String::as_str).collect()
}

#[test]
fn locus_of_8712_u5() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "e.json", E8712);
    let r = report(&run(&["locus", "--input", &input, "--n-max", "4", "--degree-max", "2"]));
    assert_eq!(keys(&r), ["command", "config", "curve", "result", "undecided", "warnings"]);
    assert_eq!(r["command"], "locus");
    let res = &r["result"];
    assert_eq!(res["completeness"], "complete-within-bounds");
    assert_eq!(res["galois_stable"], true);
    let members = res["members"].as_array().unwrap();
    assert_eq!(members.len(), 7);
    let golden: Vec<&Value> = members.iter().filter(|m| m["field"]["base_polynomial"] == "t^2 + 3").collect();
    assert_eq!(golden.len(), 2);
    for m in golden {
        assert_eq!(m["order"], 2);
        assert_eq!(m["decision"]["hst"]["rational_part"], serde_json::json!({"2": "1/3", "3": "-1/24"}));
        assert_eq!(m["decision"]["hst"]["display"], "2^(1/3) * 3^(-1/24)");
    }
    assert!(r["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("rank 0")));
}

#[test]
fn short_49a3_points_are_rejected() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "e.json", E49_SHORT);
    let r = report(&run(&["locus", "--input", &input, "--assert-rank-zero", "--n-max", "2", "--degree-max", "2"]));
    assert!(r["result"]["members"].as_array().unwrap().is_empty());
    let reasons: Vec<&str> = r["result"]["rejected"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["decision"]["reason"].as_str().unwrap())
        .collect();
    assert_eq!(reasons, ["valuation-failed(2)", "membership-failed", "membership-failed"]);
}

#[test]
fn qp_embeddings() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "e.json", E8712);
    let r = report(&run(&["qp", "--input", &input, "--n-max", "2", "--degree-max", "2", "--prime", "7", "--prime", "5"]));
    let primes = r["result"]["primes"].as_array().unwrap();
    let count = |i: usize, key: &str| primes[i][key].as_array().unwrap().len();
    assert_eq!(primes[0]["prime"], "7");
    assert_eq!((count(0, "embeddable"), count(0, "not_embeddable")), (3, 0));
    assert_eq!((count(1, "embeddable"), count(1, "not_embeddable")), (1, 2));
}

#[test]
fn witt_genus_four_is_obstructed() {
    let r = report(&run(&["witt", "--genus", "4"]));
    assert_eq!(r["curve"], Value::Null);
    assert_eq!(r["result"]["obstructed"], true);
    assert_eq!(r["result"]["bound"], "224/27");
    let r = report(&run(&["witt", "--genus", "3"]));
    assert_eq!(r["result"]["obstructed"], false);
}

#[test]
fn hst_from_stdin_and_output_file() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("out.json");
    let mut child = Command::new(env!("CARGO_BIN_EXE_chabauty"))
        .args(["hst", "--n", "2", "--input", "-", "--output", out_path.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(E49_SHORT.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&out_path)).unwrap()).unwrap();
    let points = r["result"]["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    assert!(points.iter().any(|p| p["hst"]["rational_part"].is_null()));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let singular = write(&dir, "s.json", r#"{"ainvs": [0, 0, 0, 0, 0]}"#);
    let float = write(&dir, "f.json", r#"{"ainvs": [0, 0, 0, 1.5, 1]}"#);
    let short = write(&dir, "e.json", E49_SHORT);
    assert_eq!(run(&["invariants", "--input", &singular]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "--input", &float]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "--input", "/nonexistent/curve.json"]).status.code(), Some(2));
    assert_eq!(run(&["witt", "--genus", "1"]).status.code(), Some(2));
    // Rank 0 is neither asserted in the file nor on the command line.
    assert_eq!(run(&["locus", "--input", &short]).status.code(), Some(3));
    let too_big = run(&["beta-check", "--input", &short, "--n", "40", "--m", "40", "--samples", "1"]);
    assert_eq!(too_big.status.code(), Some(4));
}

#[test]
fn parallel_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "e.json", E8712);
    let one = run(&["locus", "--input", &input, "--n-max", "6", "--degree-max", "2", "--jobs", "1"]);
    let four = run(&["locus", "--input", &input, "--n-max", "6", "--degree-max", "2", "--jobs", "4"]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn every_command_reports_completeness() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "e.json", E8712);
    let runs: [&[&str]; 6] = [
        &["invariants"],
        &["reduction", "--prime", "5"],
        &["hst", "--n", "2"],
        &["beta-check", "--n", "2", "--m", "3", "--samples", "5"],
        &["heights", "--x", "-11", "--prime", "7"],
        &["locus", "--n-max", "3", "--degree-max", "2"],
    ];
    for args in runs {
        let mut all = args.to_vec();
        all.extend(["--input", input.as_str()]);
        let r = report(&run(&all));
        assert!(r["result"].get("completeness").is_some(), "{args:?}");
    }
}
