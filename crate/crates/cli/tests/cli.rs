use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use padic_mra::fixtures::{haar_phi, kozyrev_psi, non_refinable};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_padic-mra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, value: &impl serde::Serialize) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

fn wide_support_mask_file(dir: &Path) -> PathBuf {
    let out = run(&[
        "mask-from-zeros",
        "--p",
        "2",
        "--degree",
        "4",
        "--zeros",
        "1/2^2,3/2^3,7/2^4,15/2^4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let path = dir.join("wide.json");
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

#[test]
fn haar_p2_full_pipeline() {
    let out = run(&["haar", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mra"]["is_mra"], true);
    assert_eq!(v["mra"]["orthonormal_gram"], true);
    let f = &v["frame"];
    assert!((f["lower_bound"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    assert!((f["upper_bound"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    assert_eq!(v["wavelet"]["system"]["det"], serde_json::json!([2.0, 0.0]));
    assert_eq!(v["config"]["tol"], 1e-9);
}

#[test]
fn haar_p3_has_no_wavelet_stage() {
    let out = run(&["haar", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mra"]["is_mra"], true);
    assert_eq!(v["mra"]["orthonormal_spectral"], true);
    assert!(v.get("wavelet").is_none() && v.get("frame").is_none());
}

#[test]
fn composite_prime_is_a_usage_error() {
    let out = run(&["haar", "--p", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a prime"));
}

#[test]
fn wide_support_scaling_report() {
    let dir = tempfile::tempdir().unwrap();
    let mask = wide_support_mask_file(dir.path());
    let out = run(&[
        "scaling",
        "--mask",
        mask.to_str().unwrap(),
        "--N",
        "2",
        "--exact",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["support_exp"], 1);
    assert_eq!(v["mra"]["zero_indices"], serde_json::json!([1, 2, 3, 5]));
    assert_eq!(v["mra"]["exact"]["agrees_with_float"], true);
    assert_eq!(v["exact_available"], true);
    assert_eq!(v["config"]["exact"], true);
}

#[test]
fn default_refinement_exponent_follows_degree() {
    let dir = tempfile::tempdir().unwrap();
    let mask = wide_support_mask_file(dir.path());
    let out = run(&["scaling", "--mask", mask.to_str().unwrap()]);
    assert_eq!(json(&out)["refinement_exp"], 2);
}

#[test]
fn constant_mask_has_no_compact_support() {
    let dir = tempfile::tempdir().unwrap();
    let mask = dir.path().join("one.json");
    std::fs::write(&mask, r#"{"p":2,"coeffs":[[2,0]]}"#).unwrap();
    let out = run(&[
        "scaling",
        "--mask",
        mask.to_str().unwrap(),
        "--max-support",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["certified"], false);
    assert!(v["reason"].as_str().unwrap().contains('6'));
}

#[test]
fn verify_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let haar = write(dir.path(), "haar_phi.json", &haar_phi(2).unwrap());
    let out = run(&["verify", "--input", haar.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["is_mra"], true);
    let bad = write(dir.path(), "not_refinable.json", &non_refinable().unwrap());
    let out = run(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["refinable"], false);
}

#[test]
fn wavelet_for_wide_support() {
    let dir = tempfile::tempdir().unwrap();
    let mask = wide_support_mask_file(dir.path());
    let out = run(&["wavelet", "--mask", mask.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["package"]["complement_ok"], true);
    assert_eq!(v["package"]["spanning_ok"], true);
    assert_eq!(v["package"]["seed"], 3);
}

#[test]
fn wavelet_rejects_odd_primes() {
    let dir = tempfile::tempdir().unwrap();
    let mask = dir.path().join("haar3.json");
    std::fs::write(&mask, r#"{"p":3,"coeffs":[[1,0],[1,0],[1,0]]}"#).unwrap();
    let out = run(&["wavelet", "--mask", mask.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn frame_bounds_for_kozyrev() {
    let dir = tempfile::tempdir().unwrap();
    let psi = write(dir.path(), "psi.json", &kozyrev_psi().unwrap());
    let out = run(&[
        "frame-bounds",
        "--psi",
        psi.to_str().unwrap(),
        "--radius",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["lower_bound"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    let out = run(&[
        "frame-bounds",
        "--psi",
        psi.to_str().unwrap(),
        "--radius",
        "2",
        "--scales",
        "-1:1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["upper_bound"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    let out = run(&[
        "frame-bounds",
        "--psi",
        psi.to_str().unwrap(),
        "--radius",
        "2",
        "--scales",
        "1:0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_of_small_ball() {
    let dir = tempfile::tempdir().unwrap();
    let grid = padic_mra::CosetGrid::new(2, 0, 1).unwrap();
    let ball = write(
        dir.path(),
        "ball.json",
        &padic_mra::TestFunction::indicator_ball_on(grid, -1).unwrap(),
    );
    let out = run(&["transform", "--input", ball.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["values"], serde_json::json!([[0.5, 0.0], [0.5, 0.0]]));
    let hat = dir.path().join("hat.json");
    std::fs::write(&hat, &out.stdout).unwrap();
    let back = json(&run(&[
        "transform",
        "--input",
        hat.to_str().unwrap(),
        "--inverse",
    ]));
    assert_eq!(
        (&back["support_exp"], &back["constancy_exp"]),
        (&Value::from(0), &Value::from(1))
    );
    assert_eq!(back["values"], serde_json::json!([[1.0, 0.0], [0.0, 0.0]]));
    let out = run(&[
        "transform",
        "--input",
        ball.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "node,re,im\n0/2^1,0.5,0.0\n1/2^1,0.5,0.0\n"
    );
}

#[test]
fn output_directory_holds_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("artifacts");
    let out = run(&[
        "haar",
        "--p",
        "2",
        "--format",
        "csv",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(target.join("haar.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["output_format"], "csv");
    assert!(std::fs::read_to_string(target.join("haar.csv"))
        .unwrap()
        .starts_with("node,re,im\n"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mask = wide_support_mask_file(dir.path());
    let args = ["wavelet", "--mask", mask.to_str().unwrap(), "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        run(&["haar", "--p", "3"]).stdout,
        run(&["haar", "--p", "3"]).stdout
    );
}

#[test]
fn invalid_configuration_is_rejected() {
    assert_eq!(
        run(&["haar", "--p", "2", "--tol", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["haar", "--p", "2", "--max-support", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["verify", "--input", "/nonexistent.json"])
            .status
            .code(),
        Some(1)
    );
}
