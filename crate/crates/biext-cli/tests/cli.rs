//! End-to-end checks of the binary: subcommand output, exit codes, and
//! byte-level determinism across runs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_biext")
}

fn write_fixtures(dir: &Path) {
    fs::write(
        dir.join("sphere.json"),
        r#"{ "kind": "sphere", "punctures": ["inf", [0.0, 0.0]] }"#,
    )
    .unwrap();
    fs::write(
        dir.join("torus.json"),
        r#"{ "kind": "torus", "tau": [0.0, 1.0], "punctures": [[0.0, 0.0], [0.5, 0.0]] }"#,
    )
    .unwrap();
    fs::write(
        dir.join("phi.json"),
        r#"{ "rows": [[1.0]], "e_dim": 1, "kappa_dim": 0, "base_period": [0.0] }"#,
    )
    .unwrap();
    fs::write(dir.join("path.json"), r#"{ "vertices": [[1.0, 0.0], [2.0, 0.0]] }"#).unwrap();
    fs::write(
        dir.join("expr.json"),
        r#"{ "length1": [{"coef": [1.0, 0.0], "form": "zeta:1"}] }"#,
    )
    .unwrap();
}

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn compute_period_diagonal_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let out = run(
        &["compute-period", "--surface", "sphere.json", "--base", "1,0", "--point", "1,0"],
        dir.path(),
    );
    assert!(out.status.success());
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["e"][0].as_f64().unwrap(), 0.0);
}

#[test]
fn compute_period_matches_the_log() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let out = run(
        &["compute-period", "--surface", "sphere.json", "--base", "1,0", "--point", "2,0"],
        dir.path(),
    );
    assert!(out.status.success());
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let h1 = body["e"][0].as_f64().unwrap();
    let expect = -(2.0f64).ln() / (2.0 * std::f64::consts::PI);
    assert!((h1 - expect).abs() < 1e-9, "h1 = {h1}, expected {expect}");
}

#[test]
fn scan_flags_the_unit_circle() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let n = 64.0f64;
    let cell_diag = 4.0 / n * std::f64::consts::SQRT_2;
    let tol = 0.3 * cell_diag / (2.0 * std::f64::consts::PI);
    let out = run(
        &[
            "scan-zero-locus",
            "--surface",
            "sphere.json",
            "--base",
            "1,0",
            "--grid",
            "64",
            "--region",
            "-2,2,-2,2",
            "--tol",
            &tol.to_string(),
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "i,j,re,im,norm");
    let mut rows = 0;
    for line in lines {
        if line.starts_with("verdict") {
            assert_eq!(line, "verdict,nowhere-dense");
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let re: f64 = cols[2].parse().unwrap();
        let im: f64 = cols[3].parse().unwrap();
        let r = (re * re + im * im).sqrt();
        assert!((r - 1.0).abs() < cell_diag, "flagged cell at radius {r}");
        rows += 1;
    }
    assert!(rows > 10, "too few flagged cells: {rows}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let args = [
        "scan-zero-locus",
        "--surface",
        "torus.json",
        "--base",
        "0.21,0.43",
        "--grid",
        "32",
        "--region",
        "0,1,0,1",
        "--tol",
        "0.001",
    ];
    let a = run(&args, dir.path());
    let b = run(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "scan output must be deterministic");

    let args = ["compute-period", "--surface", "torus.json", "--base", "0.2,0.3", "--point", "0.7,0.6"];
    let a = run(&args, dir.path());
    let b = run(&args, dir.path());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pushforward_identity_matches_compute_period() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let period = run(
        &["compute-period", "--surface", "sphere.json", "--base", "1,0", "--point", "2,1"],
        dir.path(),
    );
    let pushed = run(
        &[
            "pushforward",
            "--surface",
            "sphere.json",
            "--base",
            "1,0",
            "--point",
            "2,1",
            "--phi",
            "phi.json",
        ],
        dir.path(),
    );
    let a: serde_json::Value = serde_json::from_slice(&period.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&pushed.stdout).unwrap();
    assert_eq!(a["e"][0], b["value"][0]);
}

#[test]
fn integrate_evaluates_expressions() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let out = run(
        &[
            "integrate",
            "--surface",
            "sphere.json",
            "--expr",
            "expr.json",
            "--path",
            "path.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let im = body["value"][1].as_f64().unwrap();
    assert!((im + (2.0f64).ln() / (2.0 * std::f64::consts::PI)).abs() < 1e-9);
}

#[test]
fn greens_table_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let out = run(
        &["greens-table", "--surface", "torus.json", "--base", "0.5,0.5", "--grid", "16"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("z_re,z_im,f\n"));
    // singular node at the origin is omitted: 16² − 1 rows
    assert_eq!(text.lines().count(), 1 + 16 * 16 - 1);
}

#[test]
fn verify_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let out = run(&["verify", "--suite", "shuffle"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS shuffle.identity"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    // missing file → 2
    let out = run(
        &["compute-period", "--surface", "absent.json", "--base", "1,0", "--point", "2,0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    // malformed point → 2
    let out = run(
        &["compute-period", "--surface", "sphere.json", "--base", "nope", "--point", "2,0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    // unknown suite → 2
    let out = run(&["verify", "--suite", "nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // bad grid → 2
    let out = run(
        &[
            "scan-zero-locus",
            "--surface",
            "sphere.json",
            "--base",
            "1,0",
            "--grid",
            "4",
            "--region",
            "-2,2,-2,2",
            "--tol",
            "0.01",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn format_flag_switches_representation() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let out = run(
        &[
            "compute-period",
            "--surface",
            "sphere.json",
            "--base",
            "1,0",
            "--point",
            "2,0",
            "--format",
            "csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("label,value\ne1,"));

    let out = run(
        &[
            "scan-zero-locus",
            "--surface",
            "sphere.json",
            "--base",
            "1,0",
            "--grid",
            "32",
            "--region",
            "-2,2,-2,2",
            "--tol",
            "0.002",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(body["nowhere_dense"].as_bool().unwrap());
    assert!(!body["flagged"].as_array().unwrap().is_empty());
}

#[test]
fn out_flag_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let out = run(
        &[
            "compute-period",
            "--surface",
            "sphere.json",
            "--base",
            "1,0",
            "--point",
            "2,0",
            "--out",
            "result.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(dir.path().join("result.json")).unwrap();
    let body: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(body["e"][0].is_f64());
}
