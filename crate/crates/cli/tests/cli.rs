use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scene(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes").join(name)
}

fn shearlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shearlab"))
        .args(args)
        .env_remove("SHEARLAB_TOL_SCALE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn perpendicular_first_derivative_vanishes() {
    let s = scene("perpendicular.json");
    let out = shearlab(&["derive", path(&s), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert!(f(&v["value"]).abs() < 1e-14);
    assert!((f(&v["length"]) - 2.0).abs() < 1e-14);

    let text = shearlab(&["derive", path(&s)]);
    assert_eq!(text.status.code(), Some(0));
    assert!(!text.stdout.is_empty());
}

#[test]
fn oracles_agree_on_three_leaves() {
    let s = scene("three_leaves.json");
    for order in ["1", "2", "3"] {
        let out = shearlab(&["derive", path(&s), "--order", order, "--oracle", "--json"]);
        assert_eq!(out.status.code(), Some(0), "order {order}: {}", stderr(&out));
        let v = json(&out);
        assert_eq!(v["oracle"]["passed"], Value::Bool(true));
        if order == "2" {
            assert!(f(&v["oracle"]["fd_rel_err"]) <= 1e-6);
            assert!(f(&v["value"]) > 0.0);
        }
    }
}

#[test]
fn lost_crossing_is_an_input_error() {
    let s = scene("lost_crossing.json");
    let out = shearlab(&["derive", path(&s), "--order", "3", "--oracle"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("crossing"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_scenes_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            r#"{"kind": "shear_config", "gamma": {"axis": [0, "inf"], "length": 2},
                "leaves": [{"endpoints": [1, 1], "weight": 1}]}"#,
            "/leaves/0/endpoints",
        ),
        (
            r#"{"kind": "shear_config", "gamma": {"axis": [0, "inf"], "length": 2},
                "leaves": [{"endpoints": [-1, 1], "weight": 1}, {"endpoints": [-0.5, 3], "weight": 1}]}"#,
            "cross",
        ),
        (
            r#"{"kind": "shear_config", "gamma": {"axis": [0, "inf"], "length": 2},
                "leaves": [{"endpoints": [-1, 1], "weight": "heavy"}]}"#,
            "/leaves/0/weight",
        ),
        (r#"{"kind": "torus"}"#, "/kind"),
        ("{not json", "JSON"),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let p = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&p, text).unwrap();
        let out = shearlab(&["derive", path(&p)]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert!(stderr(&out).contains(needle), "{needle}: {}", stderr(&out));
    }
    let missing = shearlab(&["derive", path(&dir.path().join("absent.json"))]);
    assert_eq!(missing.status.code(), Some(2));

    let wrong_kind = shearlab(&["twist", path(&scene("perpendicular.json"))]);
    assert_eq!(wrong_kind.status.code(), Some(2));
}

#[test]
fn hessian_report() {
    let s = scene("three_leaves.json");
    let out = shearlab(&["hessian", path(&s), "--bound"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["hessian"]["certificate"]["verdict"], "definite");
    let d2 = f(&v["d2"]);
    let bound = f(&v["bound"]["value"]);
    assert_eq!(v["bound"]["holds"], Value::Bool(true));
    assert!(0.0 < bound && bound <= d2);

    let m = v["hessian"]["matrix"].as_array().unwrap();
    let x = v["hessian"]["vector"].as_array().unwrap();
    let mut q = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, h) in row.as_array().unwrap().iter().enumerate() {
            q += f(&x[i]) * f(h) * f(&x[j]);
        }
    }
    let scale = 2.0 * (f(&v["hessian"]["length"]) / 2.0).sinh();
    assert!((q / scale - d2).abs() <= 1e-10 * d2.max(1.0));

    let single = shearlab(&["hessian", path(&scene("perpendicular.json")), "--bound"]);
    assert_eq!(single.status.code(), Some(2));
    let plain = shearlab(&["hessian", path(&scene("perpendicular.json"))]);
    assert_eq!(plain.status.code(), Some(0));
}

#[test]
fn multicurve_scene() {
    let s = scene("multicurve.json");
    let out = shearlab(&["derive", path(&s), "--order", "2", "--oracle", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["oracle"]["passed"], Value::Bool(true));
    let h = shearlab(&["hessian", path(&s), "--bound"]);
    assert_eq!(h.status.code(), Some(0), "{}", stderr(&h));
    let v = json(&h);
    assert!(f(&v["bound"]["value"]) <= f(&v["d2"]));
}

#[test]
fn twist_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("twist.csv");
    let out = shearlab(&["twist", path(&scene("twist.json")), "--t-grid", "-1:1:11", "--csv", path(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(v.get("trajectory").is_none());

    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(&header[..3], ["t", "length", "length_second_difference"]);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    assert!((rows[0][0] + 1.0).abs() < 1e-15 && (rows[10][0] - 1.0).abs() < 1e-15);
    for r in &rows {
        assert!(r[col("midpoint_residual")] <= 1e-9);
        assert!(r[col("theta_residual")] <= 1e-9);
        assert!(r[col("length_second_difference")] >= 0.0);
        assert!(r[col("length")] > 0.0);
    }

    let bad_grid = shearlab(&["twist", path(&scene("twist.json")), "--t-grid", "1:0"]);
    assert_eq!(bad_grid.status.code(), Some(2));
}

#[test]
fn spiral_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("spiral.csv");
    let out = shearlab(&["spiral", path(&scene("spiral.json")), "--csv", path(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["cauchy"], Value::Bool(true));
    let rate = f(&v["fitted_rate"]);
    assert!((rate - (1.0 + 0.2f64.ln())).abs() < 0.05, "{rate}");
    let lines = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(lines.lines().count(), 25);
}

#[test]
fn verify_suites() {
    let out = shearlab(&["verify", "--suite", "all", "--seed", "7", "--cases", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["suites"].as_array().unwrap().len(), 5);

    let tampered = Command::new(env!("CARGO_BIN_EXE_shearlab"))
        .args(["verify", "--suite", "derivatives", "--cases", "20", "--allow-tol-scale"])
        .env("SHEARLAB_TOL_SCALE", "0")
        .output()
        .unwrap();
    assert_eq!(tampered.status.code(), Some(1));

    let ignored = Command::new(env!("CARGO_BIN_EXE_shearlab"))
        .args(["verify", "--suite", "derivatives", "--cases", "20"])
        .env("SHEARLAB_TOL_SCALE", "0")
        .output()
        .unwrap();
    assert_eq!(ignored.status.code(), Some(0));
    assert!(stderr(&ignored).contains("ignored"));

    let empty = shearlab(&["verify", "--cases", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    assert!(stderr(&empty).contains("warning"));
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["hessian".to_string(), path(&scene("three_leaves.json")).to_string(), "--bound".into()],
        vec!["twist".into(), path(&scene("twist.json")).to_string()],
        vec!["verify".into(), "--cases".into(), "30".into()],
    ];
    for args in runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = shearlab(&args);
        let b = shearlab(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn shipped_scenes_validate_against_the_schema() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(root.join("schema/scene.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let mut seen = 0;
    for entry in std::fs::read_dir(root.join("scenes")).unwrap() {
        let p = entry.unwrap().path();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert!(validator.is_valid(&v), "{}", p.display());
        seen += 1;
    }
    assert!(seen >= 6);
}
