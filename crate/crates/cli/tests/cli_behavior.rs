//! End-to-end behavior of the `cba` binary: exit codes, CSV schema, config
//! file layering and the divergence sentinel.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cba"))
}

#[test]
fn successful_run_exits_zero_with_stable_schema() {
    let out = bin()
        .args(["matrix-game", "--steps", "8", "--seed", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,algorithm,iteration,metric,elapsed_s"
    );
    // 1, 2, 4, 8 under the geometric schedule
    assert_eq!(lines.count(), 4);
}

#[test]
fn unknown_algorithm_exits_two() {
    let out = bin()
        .args(["matrix-game", "--algo", "sgd"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("sgd"), "stderr should name the algorithm: {err}");
}

#[test]
fn invalid_mode_and_averaging_exit_two() {
    for args in [
        vec!["matrix-game", "--mode", "sideways"],
        vec!["matrix-game", "--averaging", "cubic"],
        vec!["matrix-game", "--step-mode", "nonsense"],
        vec!["matrix-game", "--steps", "0"],
        vec!["matrix-game", "--data", "/tmp/x.libsvm"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn missing_dataset_exits_three() {
    let out = bin()
        .args(["dro", "--data", "/nonexistent/path.libsvm", "--steps", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = bin()
        .args(["describe", "dro", "--data", "/nonexistent/path.libsvm"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dataset_file_drives_the_dro_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toy.libsvm");
    std::fs::write(&path, "+1 1:1.0 2:0.5\n-1 1:-0.5 2:1.0\n+1 2:2.0\n").unwrap();
    let out = bin()
        .args(["dro", "--steps", "16", "--algo", "cba+"])
        .arg("--data")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 1);

    let describe = bin()
        .args(["describe", "dro"])
        .arg("--data")
        .arg(&path)
        .output()
        .unwrap();
    assert!(describe.status.success());
    let text = String::from_utf8(describe.stdout).unwrap();
    assert!(text.contains("samples = 3"));
    assert!(text.contains("features = 2"));
}

#[test]
fn config_file_provides_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    std::fs::write(
        &config,
        r#"{"algo": "rm+", "steps": 16, "seed": 9, "mode": "alternation"}"#,
    )
    .unwrap();

    let from_file = bin()
        .args(["matrix-game", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(from_file.status.success());
    let text = String::from_utf8(from_file.stdout).unwrap();
    assert!(text.contains(",rm+,"), "config algo should apply: {text}");

    let overridden = bin()
        .args(["matrix-game", "--algo", "cba+", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    let text = String::from_utf8(overridden.stdout).unwrap();
    assert!(text.contains(",cba+,"), "flag should override file: {text}");
    assert!(!text.contains(",rm+,"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"algo": "cba+", "unknown_field": 1}"#).unwrap();
    let out = bin()
        .args(["matrix-game", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn summary_reports_means_per_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let out = bin()
        .args([
            "matrix-game",
            "--steps",
            "32",
            "--instances",
            "4",
            "--out",
            "/dev/null",
            "--summary",
        ])
        .arg(&summary)
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(parsed["config"]["instances"], 4);
    let checkpoints = parsed["checkpoints"].as_array().unwrap();
    assert_eq!(checkpoints.len(), 6); // 1 2 4 8 16 32
    for cp in checkpoints {
        assert!(cp["geometric_mean"].as_f64().unwrap() >= 0.0);
        assert!(cp["arithmetic_mean"].as_f64().unwrap() >= 0.0);
        assert_eq!(cp["diverged"], 0);
    }
}

#[test]
fn divergence_sentinel_rules() {
    use cba_cli::runner::CsvRow;
    let row = |metric: f64| CsvRow {
        instance: 0,
        algorithm: "omd".into(),
        iteration: 1,
        metric,
        elapsed_s: 0.0,
    };
    assert_eq!(row(1e12).metric_field(), "1000000000000");
    assert_eq!(row(2e12).metric_field(), "diverged");
    assert_eq!(row(f64::NAN).metric_field(), "diverged");
    assert_eq!(row(f64::INFINITY).metric_field(), "diverged");
    assert_eq!(row(0.5).metric_field(), "0.5");
}
