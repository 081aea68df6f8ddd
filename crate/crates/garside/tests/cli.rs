//! End-to-end checks of the command-line surface: exit codes, JSON output,
//! and report determinism.

use std::process::{Command, Output};

fn garside(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_garside"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout must be UTF-8")
}

#[test]
fn nf_reports_normal_form_as_json() {
    let output = garside(&["nf", "--n", "3", "--json", "1 2 -1"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(report["inf"], serde_json::json!(-1));
    assert_eq!(report["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn malformed_word_is_a_usage_error() {
    let output = garside(&["nf", "--n", "3", "sigma"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn oracle_guard_requires_force_above_eleven_strands() {
    let word = "2 4 6 8 10 12";
    let guarded = garside(&["rset", "--n", "14", "--oracle", word]);
    assert_eq!(guarded.status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_three() {
    let output = garside(&[
        "rset", "--n", "10", "--oracle", "--force", "--budget-states", "10",
        "2 1 4 3 5 6 5 4 3 2 1 7 8 7 6 9 8 2 1 3 4 3 5 6 5 4 3 2 1 7 6 8 7 9 8",
    ]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn verification_report_is_deterministic_and_clean() {
    let args = ["verify", "--n", "10", "--k", "2", "--samples", "4", "--seed", "9", "--json"];
    let first = garside(&args);
    assert!(first.status.success(), "suite must pass at desk scale");
    let second = garside(&args);
    assert_eq!(first.stdout, second.stdout, "same seed must give identical bytes");

    let report: serde_json::Value = serde_json::from_str(&stdout_of(&first)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] != "fail"));
}

#[test]
fn family_rset_counts_the_predicted_nodes() {
    let output = garside(&[
        "family", "rset", "--matrix", "000011;000101", "--json",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(report["predicted_size"], serde_json::json!(16));
    assert_eq!(report["nodes"].as_array().unwrap().len(), 16);
}
