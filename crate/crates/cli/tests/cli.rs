use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mumford"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn bound_g7_exact_prefix() {
    let (code, out) = run(&["bound", "--g", "7"]);
    assert_eq!(code, 0);
    assert!(out.starts_with(r#"{"g":7,"twelve":72,"comparison":"less","max_bound":72"#), "{out}");
}

#[test]
fn bound_sweep_tsv() {
    let (code, out) = run(&["bound", "--from", "2", "--to", "12", "--format", "tsv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines[0].starts_with("g\ttwelve\tcomparison"));
    assert!(lines[3].starts_with("4\t36\tequal\t36"));
    assert!(lines[6].starts_with("7\t72\tless"));
}

#[test]
fn admissible_codes() {
    assert_eq!(run(&["admissible", "--g", "9", "--p", "2"]), (0, "{\"t\":2}\n".to_string()));
    assert_eq!(run(&["admissible", "--g", "9", "--p", "3"]).0, 1);
    assert_eq!(run(&["admissible", "--g", "9", "--p", "4"]).0, 2);
}

#[test]
fn curve_zeta_small() {
    let (code, v) = json(&["curve-zeta", "--p", "2", "--t", "1", "--c", "1", "--budget", "100000"]);
    assert_eq!(code, 0);
    assert_eq!(v["g"], 1);
    assert_eq!(v["L"], serde_json::json!([1, 1, 2]));
    assert_eq!(v["pass"], true);
}

#[test]
fn curve_count_and_tower() {
    let (code, v) = json(&["curve-count", "--p", "2", "--c", "1", "--m", "2", "--method", "naive"]);
    assert_eq!(code, 0);
    assert_eq!(v["N"], 8);
    let (code, v) = json(&["curve-tower-check", "--p", "3", "--c", "1", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["tower"]["total"], v["N"]);
}

#[test]
fn budget_and_usage_errors() {
    let (code, v) = json(&["curve-count", "--p", "2", "--c", "1", "--m", "12", "--method", "naive", "--budget", "1000"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("budget"));
    assert_eq!(run(&["bound", "--frobnicate"]).0, 2);
    assert_eq!(run(&["curve-count", "--p", "4", "--m", "1"]).0, 2);
}

#[test]
fn aut_commands() {
    let (code, v) = json(&["aut-order", "--p", "2", "--t", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 96);
    assert_eq!(json(&["aut-structure", "--p", "3"]).0, 0);
    assert_eq!(json(&["aut-verify", "--p", "3", "--c", "2"]).0, 0);
    let (code, v) = json(&["aut-census", "--p", "2", "--t", "2", "--c", "w"]);
    assert_eq!(code, 0);
    assert_eq!(v["orders"], serde_json::json!([2, 12]));
}

#[test]
fn schottky_commands() {
    assert_eq!(json(&["schottky-certify", "--p", "3", "--C", "T^-1"]).0, 0);
    assert_eq!(json(&["schottky-certify", "--p", "3", "--C", "T"]).0, 1);
    let (code, v) = json(&["schottky-freeness", "--p", "2", "--C", "1", "--L", "2"]);
    assert_eq!(code, 1);
    assert!(v["first_failure"].is_object());
    assert_eq!(json(&["schottky-freeness", "--p", "2", "--L", "8"]).0, 0);
}

#[test]
fn lemma_check_q3() {
    let (code, v) = json(&["lemma-check", "--q", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["groups_scanned"], 2);
    assert!(v["instances_found"].as_u64().unwrap() > 0);
}

#[test]
fn deterministic_output() {
    let a = run(&["aut-structure", "--p", "2", "--t", "2"]);
    let b = run(&["aut-structure", "--p", "2", "--t", "2"]);
    assert_eq!(a, b);
}

#[test]
fn all_small() {
    let (code, v) = json(&["all", "--p", "2", "--t", "1", "--budget", "1000000"]);
    assert_eq!(code, 0, "{v}");
    assert!(v["sections"].as_array().unwrap().iter().all(|s| s["pass"] == true));
}
