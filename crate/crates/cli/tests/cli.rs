// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dqc1kit::witness::Histogram;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dqc1kit"))
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/rtrunc_eq3.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn simulate_reports_trace_estimates() {
    let v = run_json(&["simulate", "--unitary", "jones", "--epsilon", "1"]);
    assert!((v["re"].as_f64().unwrap() - 0.0569).abs() < 1e-4);
    assert!((v["im"].as_f64().unwrap() - 0.2097).abs() < 1e-4);
    assert_eq!(v["n"], 3);
    assert_eq!(v["config"]["unitary"], "jones");

    let v = run_json(&["simulate", "--unitary", "identity8", "--epsilon", "1"]);
    assert!((v["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["im"].as_f64().unwrap().abs() < 1e-12);

    let v = run_json(&["simulate", "--unitary", "jones", "--epsilon", "0"]);
    assert_eq!(v["re"].as_f64().unwrap(), 0.0);
    assert_eq!(v["im"].as_f64().unwrap(), 0.0);
}

#[test]
fn simulate_reads_unitary_files_and_rejects_bad_ones() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("x.json");
    std::fs::write(&good, r#"{"dim": 2, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]}"#).unwrap();
    let v = run_json(&["simulate", "--unitary", good.to_str().unwrap()]);
    assert!(v["re"].as_f64().unwrap().abs() < 1e-15);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "re": [[1, 1], [0, 1]], "im": [[0, 0], [0, 0]]}"#).unwrap();
    let out = run(&["simulate", "--unitary", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unitary"));

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{not json").unwrap();
    assert_eq!(run(&["simulate", "--unitary", garbled.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--unitary", "jones", "--epsilon", "1.5"]).status.code(), Some(2));
}

#[test]
fn discord_of_named_states() {
    let v = run_json(&["discord", "--state", "bell"]);
    assert!((v["discord"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(v["result"]["argmin_basis"]["theta"].is_number());
    assert!(v["result"]["diagnostics"]["evaluations"].as_u64().unwrap() > 0);

    let v = run_json(&["discord", "--state", "product-fixture"]);
    assert!(v["discord"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["config"]["grid"], 64);
}

#[test]
fn discord_rejects_non_qubit_a() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.json");
    let re: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 0.25 } else { 0.0 }).collect()).collect();
    let text = serde_json::json!({ "re": re, "partition": [2] }).to_string();
    std::fs::write(&path, text).unwrap();
    assert_eq!(run(&["discord", "--state", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["discord", "--state", "no-such-state"]).status.code(), Some(2));
}

#[test]
fn discord_extrapolation_of_identity_is_zero() {
    let v = run_json(&["discord", "--dqc1", "identity4", "--alpha", "1e-5", "--extrapolate"]);
    assert_eq!(v["discord"].as_f64().unwrap(), 0.0);
    assert!(v["extrapolation"]["exponent"].is_null());
    // Extrapolation targets small polarizations only.
    let out = run(&["discord", "--dqc1", "jones", "--alpha", "0.5", "--extrapolate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_scaling_fit_exits_with_numerical_code() {
    // With a single register qubit the sampled discords mix vanishing and
    // nonvanishing values for some unitaries, so the fit is refused.
    let out = run(&["--seed", "0", "haar-survey", "--seeds", "40", "--n", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn witness_on_fixture_writes_report_and_histograms() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("w.json");
    let csv = dir.path().join("hist");
    let out = run(&[
        "witness",
        "--matrix",
        fixture().to_str().unwrap(),
        "--samples",
        "2000",
        "--seed",
        "4",
        "--out",
        report.to_str().unwrap(),
        "--csv-dir",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("DiscordWitnessed"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["verdict"]["outcome"], "DiscordWitnessed");
    assert_eq!(v["verdict"]["rank_lower_bound"], 3);
    assert_eq!(v["config"]["seed"], 4);
    assert_eq!(v["histograms"].as_array().unwrap().len(), 4);
    for k in 1..=4 {
        let text = std::fs::read_to_string(csv.join(format!("singular_value_{k}.csv"))).unwrap();
        assert!(text.starts_with("bin_center,relative_occurrence,cumulative\n"));
        let h = Histogram::from_csv(&text).unwrap();
        assert!((h.integral() - 1.0).abs() < 1e-3);
    }
}

#[test]
fn witness_outputs_are_bit_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for tag in ["a", "b"] {
        let report = dir.path().join(format!("{tag}.json"));
        let csv = dir.path().join(tag);
        let out = run(&[
            "--seed",
            "9",
            "witness",
            "--state",
            "final-dqc1",
            "--noise",
            "measured",
            "--samples",
            "500",
            "--out",
            report.to_str().unwrap(),
            "--csv-dir",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        files.push((report, csv));
    }
    let read = |p: &Path| std::fs::read_to_string(p).unwrap();
    let strip = |s: String| s.replace(files[0].1.to_str().unwrap(), "").replace(files[1].1.to_str().unwrap(), "");
    assert_eq!(strip(read(&files[0].0)), strip(read(&files[1].0)));
    for k in 1..=4 {
        let name = format!("singular_value_{k}.csv");
        assert_eq!(read(&files[0].1.join(&name)), read(&files[1].1.join(&name)));
    }
}

#[test]
fn witness_rank_one_exact_matrix_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let text = serde_json::json!({
        "rows": ["I", "X", "Y", "Z"],
        "cols": ["I", "Z"],
        "values": [[1.0, 0.5], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
        "sigmas": [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
    });
    std::fs::write(&path, text.to_string()).unwrap();
    let out = run(&["witness", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"]["outcome"], "Inconclusive");
    assert_eq!(v["verdict"]["rank_lower_bound"], 1);
}

#[test]
fn witness_requires_sigmas_for_monte_carlo() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let text = serde_json::json!({
        "rows": ["I", "X", "Y", "Z"],
        "cols": ["I", "Z"],
        "values": [[1.0, 0.5], [0.0, 0.3], [0.0, 0.0], [0.2, 0.0]],
    });
    std::fs::write(&path, text.to_string()).unwrap();
    assert_eq!(run(&["witness", "--matrix", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn witness_scan_of_initial_state() {
    let v = run_json(&["witness", "--state", "initial-dqc1", "--scan-combos", "200", "--resamples", "5"]);
    assert_eq!(v["verdict"]["outcome"], "Inconclusive");
    assert_eq!(v["verdict"]["rank_lower_bound"], 1);
    assert_eq!(v["config"]["noise"], "measured");
}

#[test]
fn exact_state_witness_on_final_state() {
    let v = run_json(&["witness", "--state", "final-dqc1"]);
    assert_eq!(v["verdict"]["outcome"], "DiscordWitnessed");
    assert_eq!(v["config"]["noise"], "none");
}

#[test]
fn haar_survey_single_seed_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let a = run_json(&["--seed", "17", "haar-survey", "--seeds", "1", "--csv", csv.to_str().unwrap()]);
    let b = run_json(&["--seed", "17", "haar-survey", "--seeds", "1"]);
    assert_eq!(a["survey"], b["survey"]);
    assert_eq!(a["survey"]["entries"][0]["seed"], 17);
    assert!(a["survey"]["mean"].as_f64().unwrap() > 0.0);
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("seed,discord,exponent\n17,"));
}

#[test]
fn usage_errors_exit_with_code_two() {
    assert_eq!(run(&["simulate"]).status.code(), Some(2));
    assert_eq!(run(&["discord"]).status.code(), Some(2));
    assert_eq!(run(&["witness", "--state", "bell", "--matrix", "x.json"]).status.code(), Some(2));
}
