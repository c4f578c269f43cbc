//! End-to-end tests of the command-line binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use kahler_entanglement::linalg::frobenius;
use kahler_entanglement::scalar::CMatrix;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kahler-entanglement"))
        .args(args)
        .output()
        .unwrap()
}

fn experiment(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("experiments")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn dims_command() {
    for (args, d) in [
        (["1", "1", "3"], [4, 4, 16]),
        (["1", "2", "2"], [3, 6, 18]),
        (["2", "2", "1"], [3, 3, 9]),
    ] {
        let v = json(&bin(&["dims", args[0], args[1], args[2]]));
        assert_eq!([v["d1"].as_u64(), v["d2"].as_u64(), v["dN"].as_u64()], d.map(Some));
    }
    let csv = bin(&["dims", "1", "1", "3", "--format", "csv"]);
    assert_eq!(
        String::from_utf8(csv.stdout).unwrap(),
        "n1,n2,N,d1,d2,dN\n1,1,3,4,4,16\n"
    );
    assert_eq!(bin(&["dims", "1", "1", "x"]).status.code(), Some(2));
    assert_eq!(bin(&["dims", "0", "1", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn point_run_is_pure() {
    let v = json(&bin(&["run", &experiment("point.json"), "--deterministic"]));
    for r in v["results"].as_array().unwrap() {
        let rep = &r["report"];
        assert!((rep["purity"].as_f64().unwrap() - 1.0).abs() < 1e-10);
        assert!(rep["entropy"].as_f64().unwrap() < 1e-10);
        assert_eq!(rep["separable_verdict"], "separable_certified");
        assert!(r.get("wall_time_s").is_none() && r.get("rho").is_none());
    }
}

#[test]
fn full_product_run_is_maximally_mixed() {
    let v = json(&bin(&[
        "run",
        &experiment("full_product.json"),
        "--deterministic",
        "--emit-matrix",
    ]));
    for r in v["results"].as_array().unwrap() {
        let d = r["dims"]["dN"].as_u64().unwrap() as usize;
        let entries = r["rho"]["entries"].as_array().unwrap();
        let m = CMatrix::<f64>::from_iterator(
            d,
            d,
            entries
                .iter()
                .map(|e| num_complex::Complex::new(e[0].as_f64().unwrap(), e[1].as_f64().unwrap())),
        );
        // row-major in the file, column-major in from_iterator; the target is symmetric
        let target = CMatrix::<f64>::identity(d, d).map(|z| z / d as f64);
        assert!(frobenius(&(m - target)) < 1e-7);
    }
}

#[test]
fn diagonal_circle_reports_everything() {
    let v = json(&bin(&["run", &experiment("diagonal_circle_r.json"), "--deterministic"]));
    let rep = &v["results"][0]["report"];
    assert!(rep["concurrence"].as_f64().unwrap() < 1e-10);
    assert!(rep["eof"].as_f64().unwrap() < 1e-10);
    assert!(rep["ppt_min_eigenvalue"].as_f64().unwrap() > -1e-10);
    assert_eq!(rep["ppt"], "PPT");
}

#[test]
fn outputs_and_matrix_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("result.json");
    let mat = dir.path().join("rho.csv");
    let status = bin(&[
        "run",
        &experiment("point.json"),
        "--deterministic",
        "--output",
        out.to_str().unwrap(),
        "--matrix-csv",
        mat.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["results"][0].get("rho").is_none());
    for power in 1..=3 {
        let text = std::fs::read_to_string(dir.path().join(format!("rho_N{power}.csv"))).unwrap();
        let d = (power + 1) * (power + 1);
        assert!(text.starts_with("row,col,re,im\n"));
        assert_eq!(text.lines().count(), 1 + d * d);
    }
    let csv = bin(&["run", &experiment("torus.json"), "--deterministic", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("N,d1,d2,dN,nodes,"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn sweeps() {
    let out = bin(&[
        "sweep",
        &experiment("diagonal_circle_r.json"),
        "--param",
        "radius",
        "--values",
        "0.5,1,2",
        "--deterministic",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("param,value,N,"));

    let out = bin(&[
        "sweep",
        &experiment("circle_circle.json"),
        "--param",
        "N",
        "--range",
        "1:4:1",
        "--deterministic",
        "--format",
        "json",
    ]);
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row["result"]["report"]["product_residual"].as_f64().unwrap() < 1e-9);
    }

    let out = bin(&[
        "sweep",
        &experiment("diagonal_circle_r.json"),
        "--param",
        "nodes",
        "--values",
        "16,32,64",
        "--format",
        "json",
    ]);
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    let residuals: Vec<f64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["result"]["convergence"]["residual"].as_f64().unwrap())
        .collect();
    assert!(residuals.iter().all(|&r| r < 1e-10), "{residuals:?}");
    assert!(rows[0]["result"]["wall_time_s"].as_f64().is_some());
}

#[test]
fn failure_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let degenerate = write(
        "deg.json",
        r#"{"schema":1,"n1":1,"n2":1,"N":1,"submanifold":{"kind":"torus","params":{"r1":0.0,"r2":1.0}}}"#,
    );
    let out = bin(&["run", &degenerate]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));

    let bad = write(
        "bad.json",
        r#"{"schema":1,"n1":1,"n2":1,"N":1,"submanifold":{"kind":"spiral"}}"#,
    );
    assert_eq!(bin(&["run", &bad]).status.code(), Some(2));
    assert_eq!(bin(&["run", "/no/such/file.json"]).status.code(), Some(2));

    // partial sweep failure is recorded per row
    let out = bin(&[
        "sweep",
        &experiment("diagonal_circle_r.json"),
        "--param",
        "radius",
        "--values",
        "0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("degenerate"));
    let out = bin(&[
        "sweep",
        &experiment("diagonal_circle_r.json"),
        "--param",
        "radius",
        "--values",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // non-convergence is a warning, not a failure
    let out = bin(&["run", &experiment("circle_point.json"), "--nodes", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!v["results"][2]["warnings"].as_array().unwrap().is_empty());
}
