//! End-to-end CLI checks via the compiled binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wavegauge"))
}

#[test]
fn dump_point_emits_tensor_json() {
    let out = bin()
        .args(["--dump-point", "0.3,1.0,0.4,-0.2"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metric_frame"]["LLbar"], serde_json::json!(-2.0));
    assert_eq!(v["inverse_frame"]["LbarLbar"], serde_json::json!(0.0));
    assert!((v["frame_det"].as_f64().unwrap() + 4.0).abs() < 1e-13);
    assert!((v["sqrt_abs_det"].as_f64().unwrap() - 2.0).abs() < 1e-13);
}

#[test]
fn config_error_exits_2() {
    let out = bin().args(["--alpha", "0.2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn bad_suite_name_exits_2() {
    let out = bin().args(["--suite", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn small_run_passes_and_writes_json() {
    let dir = std::env::temp_dir().join("wavegauge_cli_test");
    std::fs::remove_dir_all(&dir).ok();
    let out = bin()
        .args([
            "--suite", "profiles", "--suite", "metric", "--suite", "gauge", "--grid-n", "4",
            "--format", "json", "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("suite profiles") && text.contains("PASS"));
    assert!(text.contains("criterion 09"), "acceptance lines present");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["overall_pass"], serde_json::json!(true));
    assert!(
        report["suites"]["gauge"]["metrics"]["p_identity_gap"]
            .as_f64()
            .unwrap()
            <= 1e-13
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn csv_bundle_writes_profile_table() {
    let dir = std::env::temp_dir().join("wavegauge_cli_csv_test");
    std::fs::remove_dir_all(&dir).ok();
    let out = bin()
        .args([
            "--suite",
            "profiles",
            "--t",
            "0.25",
            "--format",
            "csv-bundle",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = std::fs::read_to_string(dir.join("profiles.csv")).unwrap();
    assert!(table.starts_with("s,chi1,chi1p,chi2,chi2p,chitilde2,chitilde2p"));
    assert!(dir.join("model_ladders_t0.25.csv").exists());
    assert!(dir.join("norm_ladders_t0.25.csv").exists());
    assert!(dir.join("causality_scan.csv").exists());
    std::fs::remove_dir_all(&dir).ok();
}
