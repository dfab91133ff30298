use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn gsp4h(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gsp4h"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn run_json(args: &[&str], stdin: Option<&str>) -> (i32, Value) {
    let out = gsp4h(args, stdin, &[]);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn valid_module() -> Value {
    json!({ "phi_module": { "p": 3, "alphas": ["1", "9", "81", "729"], "weights": [0, -2, -4, -6], "a": "1", "b": "1" } })
}

#[test]
fn kernel_of_the_valid_example_has_seventeen_rows() {
    let doc = valid_module().to_string();
    let (code, v) = run_json(&["kernel", "--input", "-"], Some(&doc));
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["command"], "kernel");
    assert_eq!(v["payload"]["basis"].as_array().unwrap().len(), 17);
    assert!(!v["citations"].as_array().unwrap().is_empty());
}

#[test]
fn validate_reports_all_checks() {
    let doc = valid_module().to_string();
    let (code, v) = run_json(&["validate", "--input", "-"], Some(&doc));
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["validity"]["valid"], true);
    assert_eq!(v["payload"]["weak_admissibility"]["admissible"], true);

    let bad = json!({ "phi_module": { "p": 2, "alphas": ["1", "2", "3", "6"], "weights": [0, -2, -4, -6], "a": "1", "b": "1" } });
    let (code, v) = run_json(&["validate", "--input", "-"], Some(&bad.to_string()));
    assert_eq!(code, 2);
    assert_eq!(v["status"], "invalid");
}

#[test]
fn degenerate_parameters_exit_three() {
    let doc = json!({ "params": { "a": "1", "b": "-1" } }).to_string();
    let (code, v) = run_json(&["kernel", "--input", "-"], Some(&doc));
    assert_eq!(code, 3);
    assert_eq!(v["status"], "degenerate");
    assert!(v["error"].as_str().unwrap().contains("degenerate"));
}

#[test]
fn malformed_input_exits_two() {
    let out = gsp4h(&["kernel", "--input", "-"], Some("{ not json"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = gsp4h(&["kernel", "--input", "-"], Some(r#"{"unknown_field": 1}"#), &[]);
    assert_eq!(out.status.code(), Some(2));
    let (code, _) = run_json(&["kernel"], None);
    assert_eq!(code, 2);
}

#[test]
fn recover_round_trip() {
    let doc = json!({ "params": { "a": "2", "b": "-3/7" } }).to_string();
    let (code, v) = run_json(&["recover", "--input", "-"], Some(&doc));
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["a"], "2/1");
    assert_eq!(v["payload"]["b"], "-3/7");

    // feed the kernel basis back in
    let (_, k) = run_json(&["kernel", "--input", "-"], Some(&doc));
    let kdoc = json!({ "kernel": { "basis": k["payload"]["basis"] } }).to_string();
    let (code, v) = run_json(&["recover", "--input", "-"], Some(&kdoc));
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["a"], "2/1");
    assert_eq!(v["payload"]["b"], "-3/7");

    let short = json!({ "kernel": { "basis": [["1", "0"]] } }).to_string();
    let (code, _) = run_json(&["recover", "--input", "-"], Some(&short));
    assert_eq!(code, 2);
}

#[test]
fn symbolic_matrices_and_glue() {
    let (code, v) = run_json(&["matrices", "--symbolic"], None);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["payload"].as_array().unwrap().iter().map(|m| m["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["f1", "f2", "f3", "f4", "g1", "g2", "g3", "g4"]);

    let (code, v) = run_json(&["glue", "--symbolic"], None);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["dim"], 15);
    assert_eq!(v["payload"]["quotient_dim"], 2);
    assert_eq!(v["payload"]["contained_in_kernel"], true);
}

#[test]
fn socle_dot_has_three_layers() {
    let out = gsp4h(&["socle", "pimin", "--format", "dot"], None, &[]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("rankdir=BT"));
    assert_eq!(dot.matches("π_alg").count(), 3);
    assert!(dot.contains("n2_0") && dot.contains("n2_1") && !dot.contains("n3_"));

    let (code, v) = run_json(&["socle", "ps1", "--w", "s1"], None);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["layers"][1], json!(["C({2},s1)", "C({1,2},s2)"]));
    let (code, _) = run_json(&["socle", "ps7"], None);
    assert_eq!(code, 2);
    let out = gsp4h(&["ledger", "--format", "dot"], None, &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ledger_command() {
    let (code, v) = run_json(&["ledger"], None);
    assert_eq!(code, 0);
    let entries = v["payload"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 17);
    assert!(v["payload"]["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
}

#[test]
fn hecke_both_directions() {
    let doc = json!({ "hecke": { "l": 2, "c0": "1", "c1": "0", "c2": "0" } }).to_string();
    let out = gsp4h(&["hecke", "--input", "-", "--format", "text"], Some(&doc), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("T^4 + 10*T^2 + 64"));

    let back = json!({ "frobenius": { "l": 2, "coeffs": ["1", "0", "10", "0", "64"], "sim": "8" } }).to_string();
    let (code, v) = run_json(&["hecke", "--input", "-"], Some(&back));
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["hecke"]["c0"], "1/1");

    let bad = json!({ "frobenius": { "l": 2, "coeffs": ["1", "0", "10", "0", "63"], "sim": "8" } }).to_string();
    let (code, _) = run_json(&["hecke", "--input", "-"], Some(&bad));
    assert_eq!(code, 2);
}

#[test]
fn classify_command() {
    let doc = json!({ "classify": { "alphas": ["p^-3", "p^-2", "p^-1", "1"], "weights": [3, 2, 1, 0], "p": 5, "C": "1" } });
    let (code, v) = run_json(&["classify", "--input", "-"], Some(&doc.to_string()));
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["w_set"], json!(["id"]));
    assert_eq!(v["payload"]["gap_ok"], false);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let doc = valid_module().to_string();
    for args in [&["kernel", "--input", "-"][..], &["glue", "--input", "-"][..], &["batch", "--seed", "11", "--count", "5"][..]] {
        let first = gsp4h(args, Some(&doc), &[]);
        let second = gsp4h(args, Some(&doc), &[]);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert!(!first.stdout.is_empty());
    }
}

#[test]
fn batch_mixed_items_report_worst_status() {
    let items = json!([
        { "command": "kernel", "document": { "params": { "a": "2", "b": "3" } } },
        { "command": "kernel", "document": { "params": { "a": "1", "b": "-1" } } },
        { "command": "hecke", "document": { "hecke": { "l": 4, "c0": "1", "c1": "0", "c2": "0" } } },
        { "command": "ledger" }
    ]);
    let (code, v) = run_json(&["batch", "--input", "-"], Some(&items.to_string()));
    let statuses: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["ok", "degenerate", "invalid", "ok"]);
    assert_eq!(code, 3);

    let (code, v) = run_json(&["batch", "--input", "-"], Some("[]"));
    assert_eq!(code, 0);
    assert_eq!(v, json!([]));
}

#[test]
fn random_sweep_is_all_ok() {
    let (code, v) = run_json(&["batch", "--seed", "2024", "--count", "100"], None);
    assert_eq!(code, 0);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 100);
    assert!(reports.iter().all(|r| r["status"] == "ok" && r["command"] == "recover"));
}

#[test]
fn every_command_cites_something() {
    for cmd in ["validate", "flag", "kernel", "recover", "glue", "matrices", "ledger", "socle", "hecke", "classify"] {
        let (_, v) = run_json(&[cmd, "--symbolic"], None);
        assert!(!v["citations"].as_array().unwrap().is_empty(), "{cmd}");
    }
}

#[test]
fn degree_cap_from_environment() {
    let doc = json!({ "params": { "a": "a^3", "b": "b" } }).to_string();
    let capped = gsp4h(&["kernel", "--symbolic", "--input", "-"], Some(&doc), &[("GSP4H_MAX_DEGREE", "2")]);
    assert_eq!(capped.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&capped.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("GSP4H_MAX_DEGREE"));
}
