use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::io::Write;

fn opuc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opuc")).args(args).output().expect("binary runs")
}

fn opuc_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_opuc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn result(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["result"].clone()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

const HALF_QUARTER: &str = r#"{"c": [0, 0], "d": [0.5, 0.25]}"#;

#[test]
fn alpha2pair_example() {
    let r = result(&opuc(&["alpha2pair", "--json", r#"{"alpha": [[0.5,0],[0.3333333333333333,0]]}"#]));
    assert_eq!(floats(&r["c"]), vec![0.0, 0.0]);
    let m = floats(&r["m"]);
    assert_eq!(m[..2], [0.0, 0.25]);
    assert!((m[2] - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn zeros_example_csv() {
    let out = opuc(&["zeros", "--n", "2", "--json", HALF_QUARTER, "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("level,j,x,theta"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    let pi = std::f64::consts::PI;
    assert!((rows[1][3] - 2.0 * pi / 3.0).abs() < 1e-12);
    assert!((rows[2][3] - 4.0 * pi / 3.0).abs() < 1e-12);
}

#[test]
fn demo_reports_masses() {
    let dir = tempfile::tempdir().unwrap();
    let out = opuc(&["demo", "--c", "1", "--b1", "0.3", "--b2", "0.5", "--out", dir.path().to_str().unwrap()]);
    let r = result(&out);
    let points = r["pure_points"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    assert!(points[0]["theta"].as_f64().unwrap().abs() < 1e-12);
    assert!((points[0]["mass"].as_f64().unwrap() - 8.0 / 15.0).abs() < 1e-12);
    assert!((points[1]["theta"].as_f64().unwrap() - 1.5 * std::f64::consts::PI).abs() < 1e-9);
    assert!((points[1]["mass"].as_f64().unwrap() - 2.0 / 15.0).abs() < 1e-12);
    for name in ["demo.json", "discriminant.csv", "weight.csv", "masses.csv", "bands.csv", "zeros.csv", "quadrature.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let weight = std::fs::read_to_string(dir.path().join("weight.csv")).unwrap();
    assert!(weight.starts_with("theta,w\n"));
}

#[test]
fn output_is_deterministic() {
    let args = ["quadrature", "--json", r#"{"c": [0.3, -0.1, 0.2], "m": [0.4, 0.5, 0.6]}"#];
    assert_eq!(opuc(&args).stdout, opuc(&args).stdout);
}

#[test]
fn round_trip_through_pipe() {
    let pair = r#"{"c": [0.3, -0.2, 0.1, 0.7], "m": [0.4, 0.5, 0.6, 0.3]}"#;
    let alpha = opuc(&["pair2alpha", "--json", pair]);
    assert!(alpha.status.success());
    let back = result(&opuc_stdin(&["alpha2pair", "--file", "-"], &alpha.stdout));
    let c = floats(&back["c"]);
    let m = floats(&back["m"]);
    for (a, b) in c.iter().zip([0.3, -0.2, 0.1, 0.7]) {
        assert!((a - b).abs() < 1e-14);
    }
    for (a, b) in m[1..].iter().zip([0.4, 0.5, 0.6, 0.3]) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn quadrature_and_cdf_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pair.json");
    std::fs::write(&input, HALF_QUARTER).unwrap();
    let out_dir = dir.path().join("out");
    let args = ["--file", input.to_str().unwrap(), "--format", "both", "--out", out_dir.to_str().unwrap()];
    for cmd in ["quadrature", "cdf"] {
        let mut full = vec![cmd];
        full.extend_from_slice(&args);
        assert!(opuc(&full).status.success(), "{cmd}");
    }
    let q = std::fs::read_to_string(out_dir.join("quadrature.csv")).unwrap();
    assert!(q.starts_with("j,theta,weight\n"));
    assert_eq!(q.lines().count(), 4);
    let cdf = std::fs::read_to_string(out_dir.join("cdf.csv")).unwrap();
    assert!(cdf.starts_with("theta,psi\n"));
    let last = cdf.lines().last().unwrap();
    assert!(last.ends_with(",1.0000000000000000e0"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("quadrature.json")).unwrap()).unwrap();
    let total: f64 = floats(&report["result"]["weights"]).iter().sum();
    assert!((total - 1.0).abs() < 1e-14);
}

#[test]
fn periodic_and_weight() {
    let r = result(&opuc(&["periodic", "--json", r#"{"alpha": [[0.5, 0]]}"#]));
    let points = r["pure_points"].as_array().unwrap();
    assert_eq!(points.len(), 1);
    assert!((points[0]["mass"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!((r["checksums"]["total_mass"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    let out = opuc(&["weight", "--json", r#"{"alpha": [[0.5, 0]]}"#, "--samples", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("theta,w"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn transforms() {
    let pair = r#"{"c": [-1, 1, -1, 1], "m": [0.35, 0.25, 0.35, 0.25]}"#;
    let r = result(&opuc(&["transform", "--op", "conjugate", "--json", pair]));
    assert_eq!(floats(&r["output"]["c"]), vec![1.0, -1.0, 1.0, -1.0]);
    let r = result(&opuc(&["transform", "--op", "unfold", "--json", pair]));
    assert_eq!(floats(&r["output"]["pair"]["c"]), vec![1.0; 4]);
    assert!(r["output"]["consistency"].as_f64().unwrap() < 1e-12);
    let r = result(&opuc(&["transform", "--op", "rotate", "--beta-c", "1", "--json", pair]));
    let alpha = r["output"]["alpha"].as_array().unwrap();
    assert_eq!(alpha.len(), 4);
    let out = opuc(&["transform", "--op", "rotate", "--json", pair]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_passes_on_defaults_and_input() {
    let out = opuc(&["check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(result(&out)["passed"], Value::Bool(true));
    let out = opuc(&["check", "--json", r#"{"c": [0.3, -0.3, 0.3, -0.3], "m": [0.4, 0.5, 0.4, 0.5], "tail_period": 2}"#]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn poly_table() {
    let out = opuc(&["poly", "--json", HALF_QUARTER, "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,k,re,im"));
    // degrees 1 and 2: 2 + 3 coefficients
    assert_eq!(text.lines().count(), 6);
}

fn error_of(out: &Output) -> Value {
    serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"].clone()
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        vec!["zeros", "--json", r#"{"c": [0]}"#],
        vec!["zeros", "--json", "not json"],
        vec!["zeros", "--json", r#"{"alpha": [[1.5, 0]]}"#],
        vec!["zeros", "--json", HALF_QUARTER, "--n", "0"],
        vec!["zeros", "--json", HALF_QUARTER, "--tol", "-1"],
        vec!["quadrature", "--json", HALF_QUARTER, "--format", "both"],
        vec!["periodic", "--json", r#"{"alpha": [[0.5, 0]]}"#, "--format", "csv"],
        vec!["zeros", "--file", "/nonexistent/pair.json"],
        vec!["zeros", "--bogus"],
    ] {
        let out = opuc(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = error_of(&out);
        assert!(err["kind"].is_string() && err["message"].is_string(), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn help_succeeds() {
    let out = opuc(&["--help"]);
    assert!(out.status.success());
    assert!(Path::new(env!("CARGO_BIN_EXE_opuc")).exists());
}
