//! Behavior of the binary around its exit-code contract: 0 success, 1 failed
//! check, 2 bad input or usage.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatspot"))
        .current_dir(dir)
        .args(args)
        .env_remove("FLATSPOT_SEED")
        .output()
        .expect("binary runs")
}

fn write_specs(dir: &Path) {
    fs::write(
        dir.join("pts1d.json"),
        r#"{"dimension": 1, "mode": "B", "points": [[0.0], [1.0], [2.5]],
            "values": [1.0, -0.5, 2.0]}"#,
    )
    .unwrap();
    fs::write(
        dir.join("grid.json"),
        r#"{"dimension": 2, "mode": "B",
            "points": [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]],
            "values": [1.0, -1.0, 0.5, 2.0]}"#,
    )
    .unwrap();
}

#[test]
fn verify_exit_codes_separate_failures_from_usage_errors() {
    let tmp = tempfile::tempdir().unwrap();
    write_specs(tmp.path());

    // The cosine curve keeps its guarantees on a plain interpolation spec.
    let ok = run(tmp.path(), &["verify", "--in", "pts1d.json", "--method", "trig", "--problems", "ABC"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    // The cosine tensor on this grid has a stray flat, so the exclusive
    // check must fail with the check exit code, not the usage one.
    let failed = run(
        tmp.path(),
        &["verify", "--in", "grid.json", "--method", "trig2d", "--problems", "C", "--resolution", "64"],
    );
    assert_eq!(failed.status.code(), Some(1), "{}", String::from_utf8_lossy(&failed.stderr));

    // Usage problems: unknown flag, unknown method, flag for another method,
    // malformed problems string, missing input file.
    let cases: Vec<Vec<&str>> = vec![
        vec!["generate", "--in", "pts1d.json", "--out", "x.csv", "--method", "trig", "--frobnicate"],
        vec!["generate", "--in", "pts1d.json", "--out", "x.csv", "--method", "sinc"],
        vec!["generate", "--in", "pts1d.json", "--out", "x.csv", "--method", "trig", "--z0", "1.0"],
        vec!["verify", "--in", "pts1d.json", "--method", "trig", "--problems", "XY"],
        vec!["verify", "--in", "nope.json", "--method", "trig"],
    ];
    for args in &cases {
        let out = run(tmp.path(), args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn reports_go_to_stdout_when_no_output_path_is_given() {
    let tmp = tempfile::tempdir().unwrap();
    write_specs(tmp.path());
    let out = run(
        tmp.path(),
        &["scan", "--in", "pts1d.json", "--method", "trig", "--resolution", "128"],
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    assert_eq!(report["model"]["method"], "trig");
    assert_eq!(report["report"]["found"].as_array().unwrap().len(), 3);
}

#[test]
fn flags_override_a_stored_model_config() {
    let tmp = tempfile::tempdir().unwrap();
    write_specs(tmp.path());
    fs::write(
        tmp.path().join("model.json"),
        r#"{"method": "superpose", "rotations": 2, "fill": {"kind": "zero"}}"#,
    )
    .unwrap();
    let out = run(
        tmp.path(),
        &[
            "generate", "--in", "grid.json", "--out", "s.csv", "--model-config", "model.json",
            "--rotations", "3", "--nx", "8", "--ny", "8",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let sidecar: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("s.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(sidecar["method"], "superpose");
    assert_eq!(sidecar["rotations"], 3, "flag must beat the stored config");
    assert_eq!(sidecar["fill"]["kind"], "zero", "unset flags keep stored fields");
}

#[test]
fn curvature_strategy_convention_is_announced() {
    let tmp = tempfile::tempdir().unwrap();
    write_specs(tmp.path());
    let out = run(
        tmp.path(),
        &["generate", "--in", "pts1d.json", "--out", "q.csv", "--method", "quartic-c2", "--c0", "min", "--n", "16"],
    );
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("first knot"),
        "strategy runs must say how the first knot is counted, got: {err}"
    );
}
