use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const P0: f64 = 0.6268510148499474;

fn bin(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghzw-roof"))
        .args(args)
        .env("GHZW_ROOF_OUT", dir)
        .output()
        .expect("binary runs")
}

fn eval(args: &[&str]) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(dir.path(), &[&["eval"], args].concat());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn eval_ghz_pole() {
    let v = eval(&["--p", "1", "--phi", "0", "--r", "1"]);
    assert_eq!(v["value"], 1.0);
    assert_eq!(v["region"], "TETRA_GHZ");
}

#[test]
fn eval_axis_mixtures() {
    let v = eval(&["--p", "0.3", "--mixture"]);
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["region"], "ZERO_POLYTOPE");
    let v = eval(&["--p", "0.8", "--mixture"]);
    let want = (0.8 - P0) / (1.0 - P0);
    assert!((v["value"].as_f64().unwrap() - want).abs() < 1e-8);
}

#[test]
fn eval_accepts_negative_phase() {
    let a = eval(&["--p", "0.4", "--phi", "-0.7", "--r", "0.8"]);
    let b = eval(&["--p", "0.4", "--phi", "0.7", "--r", "0.8"]);
    assert_eq!(a["value"], b["value"]);
}

#[test]
fn bad_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["eval", "--p", "1.5"][..],
        &["eval", "--p", "0.5", "--r", "2"],
        &["eval"],
        &["surface", "--n-theta", "4"],
        &["verify", "--oracle-grid", "3x3"],
        &["verify", "--only", "12"],
        &["frobnicate"],
    ] {
        let out = bin(dir.path(), args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("structure.json");
    let out = bin(dir.path(), &["structure", "-o", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn structure_reports_reference_values() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bin(dir.path(), &["structure"]).status.success());
    let v: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("structure.json")).unwrap())
            .unwrap();
    assert!((v["p0"].as_f64().unwrap() - P0).abs() < 1e-8);
    let d = &v["lower_circle_distance"];
    assert!((d["computed"].as_f64().unwrap() - 0.0711148).abs() < 5e-4);
    assert_eq!(d["reference"], 0.0711148);
    let normal: Vec<f64> = v["lower_circle_normal"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["computed"].as_f64().unwrap())
        .collect();
    for (got, want) in normal.iter().zip([0.57589, 0.0, -0.81753]) {
        assert!((got - want).abs() < 5e-3, "{normal:?}");
    }
    assert_eq!(v["zero_vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["lower_circles"].as_array().unwrap().len(), 3);
}

#[test]
fn surface_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["csv", "json"] {
        let out = bin(
            dir.path(),
            &["surface", "--n-theta", "12", "--n-phi", "24", "--format", f],
        );
        assert!(out.status.success());
    }
    let json: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("surface.json")).unwrap())
            .unwrap();
    let rows = json["rows"].as_array().unwrap();
    let mut csv = csv::Reader::from_path(dir.path().join("surface.csv")).unwrap();
    let headers = csv.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "theta",
            "phi",
            "region",
            "roof_value",
            "on_21_line",
            "numeric_boundary"
        ]
    );
    let records: Vec<csv::StringRecord> = csv.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 12 * 24);
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(rows) {
        for (name, field) in headers.iter().zip(rec.iter()) {
            match &row[name] {
                Value::String(s) => assert_eq!(s, field),
                Value::Number(n) => {
                    assert_eq!(n.as_f64().unwrap(), field.parse::<f64>().unwrap(), "{name}")
                }
                other => panic!("unexpected {other}"),
            }
        }
    }
    // Theta-major order.
    let theta: Vec<f64> = records.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(theta.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn identical_runs_give_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        assert!(bin(
            dir.path(),
            &[
                "surface",
                "--n-theta",
                "10",
                "--n-phi",
                "12",
                "--format",
                "csv"
            ]
        )
        .status
        .success());
        assert!(bin(dir.path(), &["curves", "--points", "41"])
            .status
            .success());
        assert!(bin(dir.path(), &["structure"]).status.success());
    }
    for f in ["surface.csv", "curves.json", "structure.json"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn curves_have_reference_tangent_points() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bin(dir.path(), &["curves", "--points", "51"])
        .status
        .success());
    let v: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("curves.json")).unwrap()).unwrap();
    let fams = v["families"].as_array().unwrap();
    let pc: Vec<f64> = fams
        .iter()
        .map(|f| f["tangent"]["p_c"].as_f64().unwrap())
        .collect();
    assert!(
        (pc[0] - 0.0964142).abs() < 5e-5 && (pc[1] - 0.962243).abs() < 5e-5,
        "{pc:?}"
    );
    for f in fams {
        assert!(f["points"]
            .as_array()
            .unwrap()
            .iter()
            .all(|p| p["difference"].as_f64().unwrap() >= -1e-9));
    }
    assert!(
        bin(dir.path(), &["curves", "--points", "51", "--format", "csv"])
            .status
            .success()
    );
    let text = fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    assert!(text.starts_with("family,p,value,hull,difference\n"));
}

#[test]
fn verify_passes_then_fails_with_zero_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = bin(
        dir.path(),
        &[
            "verify",
            "--only",
            "1,2,3,5",
            "--report",
            report.to_str().unwrap(),
        ],
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("[PASS]")).count(),
        4
    );
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 4);

    let out = bin(
        dir.path(),
        &["verify", "--only", "5", "--tolerance-scale", "0"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL] 5"));
}

#[test]
fn verify_reports_oracle_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        dir.path(),
        &[
            "verify",
            "--only",
            "7",
            "--oracle-grid",
            "2x3x1",
            "--oracle-restarts",
            "4",
            "--no-runtime-check",
        ],
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("oracle gaps over 6 points"), "{stdout}");
}
