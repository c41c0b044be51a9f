//! End-to-end checks of the command-line surface: file formats, exit codes,
//! and byte-level reproducibility.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_opuc")
}

fn family(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("families")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn opuc")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("opuc-cli-test-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gen_writes_expected_rows() {
    let dir = tmpdir("gen");
    let out = dir.join("coeffs.csv");
    let fam = family("cosine.json");
    let output = run(&[
        "gen",
        "--family",
        fam.to_str().unwrap(),
        "--n",
        "64",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 65);
    assert_eq!(lines[0], "n,re,im");
    // second coefficient of the cosine-modulated family is -1/4
    assert_eq!(lines[2], "1,-0.25,0");
}

#[test]
fn gen_is_byte_reproducible() {
    let dir = tmpdir("repro");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    let fam = family("geometric.json");
    for out in [&a, &b] {
        let output = run(&[
            "gen",
            "--family",
            fam.to_str().unwrap(),
            "--n",
            "32",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn malformed_family_exits_2() {
    let dir = tmpdir("badjson");
    let bad = dir.join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let output = run(&[
        "gen",
        "--family",
        bad.to_str().unwrap(),
        "--n",
        "4",
        "--out",
        "/dev/null",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty());
}

#[test]
fn zeros_at_degree_zero_exits_2() {
    let fam = family("geometric.json");
    let output = run(&["zeros", "--family", fam.to_str().unwrap(), "--n", "0"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn zeros_writes_csv_and_report() {
    let dir = tmpdir("zeros");
    let fam = family("cosine.json");
    let output = run(&[
        "zeros",
        "--family",
        fam.to_str().unwrap(),
        "--n",
        "22",
        "--out",
        dir.to_str().unwrap(),
        "--plot",
    ]);
    assert!(output.status.success(), "{output:?}");
    let csv = fs::read_to_string(dir.join("cosine-modulated-n22-zeros.csv")).unwrap();
    assert_eq!(csv.lines().count(), 23);
    assert!(csv.lines().next().unwrap().ends_with(",class"));
    let nt_rows = csv.lines().filter(|l| l.ends_with(",nt")).count();
    let interior_rows = csv.lines().filter(|l| l.ends_with(",interior")).count();
    assert_eq!(nt_rows, 3);
    assert_eq!(interior_rows, 1);

    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.join("cosine-modulated-n22-report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["nt"].as_array().unwrap().len(), 3);
    assert_eq!(report["gaps"].as_array().unwrap().len(), 3);

    let points = fs::read_to_string(dir.join("cosine-modulated-n22-points.dat")).unwrap();
    assert_eq!(points.lines().count(), 23); // header + 22 points
}

#[test]
fn classify_prints_json() {
    let fam = family("geometric.json");
    let output = run(&["classify", "--family", fam.to_str().unwrap(), "--n", "22"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["n"], 22);
    assert_eq!(report["interior"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_unknown_suite_exits_2() {
    let output = run(&["verify", "nope"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_passing_suite_exits_0_and_writes_outcomes() {
    let dir = tmpdir("verify");
    let output = run(&[
        "verify",
        "sec6",
        "--trials",
        "25",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 3);
    let outcomes: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("sec6.json")).unwrap()).unwrap();
    assert!(outcomes.as_array().unwrap().len() >= 3);
}

#[test]
fn verify_accepts_family_override() {
    let fam = family("geometric.json");
    let output = run(&[
        "verify",
        "thm5.1",
        "--family",
        fam.to_str().unwrap(),
        "--n",
        "40,80",
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 4);
}

#[test]
fn poly_json_round_trips() {
    let fam = family("geometric.json");
    let output = run(&["poly", "--family", fam.to_str().unwrap(), "--n", "2"]);
    assert!(output.status.success());
    let poly: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(poly["n"], 2);
    // z^2 - (3/8) z - 1/4
    let coeffs = poly["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 3);
    assert!((coeffs[0][0].as_f64().unwrap() + 0.25).abs() < 1e-15);
    assert!((coeffs[1][0].as_f64().unwrap() + 0.375).abs() < 1e-15);
}

#[test]
fn export_plot_outer_grid() {
    let dir = tmpdir("outer");
    let out = dir.join("outer.csv");
    let fam = family("geometric.json");
    let output = run(&[
        "export-plot",
        "--family",
        fam.to_str().unwrap(),
        "--n",
        "1",
        "--out",
        out.to_str().unwrap(),
        "--outer",
    ]);
    assert!(output.status.success(), "{output:?}");
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "re_z,im_z,re_f,im_f");
    assert_eq!(text.lines().count(), 1 + 40 * 128);
}
