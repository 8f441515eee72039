use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use dualbasis::cli::{AngleUnit, InputDocument};
use dualbasis::verify::VerificationReport;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl From<Output> for Run {
    fn from(o: Output) -> Self {
        Run {
            code: o.status.code().expect("exit code"),
            stdout: String::from_utf8(o.stdout).unwrap(),
            stderr: String::from_utf8(o.stderr).unwrap(),
        }
    }
}

fn run(args: &[&str]) -> Run {
    Command::new(env!("CARGO_BIN_EXE_dualbasis")).args(args).output().unwrap().into()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

const SQUARE: &str = r#"{"dimension": 2, "geometry": {"lengths": [1, 1], "angles": {"12": 90}}, "angle_unit": "deg"}"#;
const HEX: &str = r#"{"dimension": 2, "geometry": {"lengths": [1, 1], "angles": {"12": 120}}}"#;
const TRICLINIC: &str =
    r#"{"dimension": 3, "geometry": {"lengths": [4.1, 5.3, 6.0], "angles": {"12": 72, "13": 95, "23": 104}}}"#;

#[test]
fn metric_of_square_cell_is_identity() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "sq.json", SQUARE);
    let r = run(&["metric", "--json", &path]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["metric"], serde_json::json!([[1.0, 0.0], [0.0, 1.0]]));

    let r = run(&["metric", "--factor", "--json", &path]);
    assert_eq!(json(&r)["result"]["cholesky"], serde_json::json!([[1.0, 0.0], [0.0, 1.0]]));

    let r = run(&["metric", &path]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("metric"));
}

#[test]
fn reciprocal_of_hexagonal_cell() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "hex.json", HEX);
    let v = json(&run(&["reciprocal", "--json", &path]));
    // |a*| = 1 / (|a| sin 120 deg), b12 = 180 - 120 deg.
    let want = 1.0 / (120.0_f64.to_radians().sin());
    for l in v["dual_geometry"]["lengths"].as_array().unwrap() {
        assert!((f(l) - want).abs() < 1e-12);
        assert!((f(l) - 1.1547005383792515).abs() < 1e-12);
    }
    assert!((f(&v["dual_geometry"]["angles"]["12"]) - 60.0).abs() < 1e-12);
    assert!((f(&v["result"]["volume"]) * f(&v["result"]["dual_volume"]) - 1.0).abs() < 1e-12);
}

#[test]
fn reciprocal_of_basis_is_inverse_transpose() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "b.json", r#"{"dimension": 2, "basis": [[2, 0], [1, 1]]}"#);
    let v = json(&run(&["reciprocal", "--json", &path]));
    // A = [[2, 1], [0, 1]], A^-1 = [[0.5, -0.5], [0, 1]], columns of A^-T are rows of A^-1.
    assert_eq!(v["dual_basis"], serde_json::json!([[0.5, -0.5], [0.0, 1.0]]));
    assert_eq!(f(&v["result"]["volume"]), 2.0);
}

#[test]
fn dual_metric_from_gammas() {
    let dir = TempDir::new().unwrap();
    // Orthonormal primal; dual vectors (2, 0) and (0, 3).
    let path = write(
        &dir,
        "d.json",
        r#"{"dimension": 2, "metric": [[1, 0], [0, 1]], "gammas": [[1, 0], [0, 1]], "dual_lengths": [2, 3]}"#,
    );
    let v = json(&run(&["dual-metric", "--json", &path]));
    assert_eq!(v["dual_metric"], serde_json::json!([[4.0, 0.0], [0.0, 9.0]]));
    assert_eq!(f(&v["dual_geometry"]["angles"]["12"]), 90.0);
}

#[test]
fn solve_angles_generic_and_degenerate() {
    let dir = TempDir::new().unwrap();
    let a = [[1.0_f64, 0.0], [0.5, 1.2]];
    let b = [[0.9_f64, 0.4], [-0.3, 1.0]];
    let unit = |v: [f64; 2]| {
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    };
    let gamma: Vec<Vec<f64>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| {
                    let (u, w) = (unit(a[i]), unit(b[j]));
                    u[0] * w[0] + u[1] * w[1]
                })
                .collect()
        })
        .collect();
    let doc = serde_json::json!({"dimension": 2, "gammas": gamma});
    let path = write(&dir, "g.json", &doc.to_string());
    let v = json(&run(&["solve-angles", "--json", &path]));
    let (ua, ub) = (unit(a[0]), unit(a[1]));
    assert_eq!(v["result"]["branch"], "generic");
    assert!((f(&v["result"]["cos_alpha"]) - (ua[0] * ub[0] + ua[1] * ub[1])).abs() < 1e-12);

    let t: f64 = 0.3;
    let degenerate = serde_json::json!({"dimension": 2, "gammas": [[t.cos(), t.sin()], [t.sin(), t.cos()]]});
    let path = write(&dir, "dg.json", &degenerate.to_string());
    let r = run(&["solve-angles", "--json", &path]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["result"]["branch"], "degenerate");
    assert!(f(&v["result"]["cos_alpha"]).abs() < 1e-12);
    for res in v["result"]["residuals"].as_array().unwrap() {
        assert!(f(res).abs() < 1e-8);
    }
}

#[test]
fn volume_of_rhombohedral_cell() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "r.json",
        r#"{"dimension": 3, "geometry": {"lengths": [1, 1, 1], "angles": {"12": 60, "13": 60, "23": 60}}}"#,
    );
    let v = json(&run(&["volume", "--json", &path]));
    assert!((f(&v["result"]["volume"]) - 0.5_f64.sqrt()).abs() < 1e-12);
    assert!((f(&v["result"]["delta"]) - 0.5).abs() < 1e-12);
}

#[test]
fn check_flags_inconsistent_triple() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"dimension": 2, "metric": [[1, 0], [0, 1]], "dual_metric": [[1, 0], [0, 1]], "mixed": [[2, 0], [0, 2]]}"#,
    );
    let r = run(&["check", "--json", &bad]);
    assert_eq!(r.code, 1);
    let report: VerificationReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(!report.pass);
    assert_eq!(report.get("central_identity").unwrap().max_residual, 3.0);

    let good = write(
        &dir,
        "good.json",
        r#"{"dimension": 2, "metric": [[1, 0], [0, 1]], "dual_metric": [[4, 0], [0, 4]], "mixed": [[2, 0], [0, 2]]}"#,
    );
    assert_eq!(run(&["check", &good]).code, 0);
}

#[test]
fn verify_report() {
    let r = run(&["verify", "--dim", "3", "--trials", "10000", "--seed", "42", "--tol", "1e-8", "--json"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let report: VerificationReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(report.pass);
    assert_eq!(report.config.as_ref().unwrap().trials, 10_000);
    assert_eq!(report.get("general.central_identity").unwrap().trials, 10_000);

    let r = run(&["verify", "--dim", "2", "--trials", "50", "--tol", "1e-16"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("FAIL"));
}

#[test]
fn input_errors_exit_2_with_one_line() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (
            r#"{"dimension": 3, "geometry": {"lengths": [1, 1, 1], "angles": {"12": 5, "13": 5, "23": 60}}}"#,
            "NOT_REALIZABLE",
        ),
        (r#"{"dimension": 2, "geometry": {"lengths": [1, -1], "angles": {"12": 90}}}"#, "NON_POSITIVE_LENGTH"),
        (r#"{"dimension": 2, "geometry": {"lengths": [1, 1], "angles": {"12": 180}}}"#, "ANGLE_OUT_OF_RANGE"),
        (r#"{"dimension": 2, "metric": [[1, 1.01], [1.01, 1]]}"#, "NOT_POSITIVE_DEFINITE"),
        (r#"{"dimension": 2, "metric": [[1, 0.2], [0.3, 1]]}"#, "NOT_SYMMETRIC"),
        (r#"{"dimension": 5}"#, "UNSUPPORTED_DIMENSION"),
        (r#"{"dimension": 2}"#, "MISSING_FIELD"),
        (r#"{"dimension": 2, "geometry": "#, "PARSE_ERROR"),
    ];
    for (k, (body, code)) in cases.iter().enumerate() {
        let path = write(&dir, &format!("e{k}.json"), body);
        let r = run(&["metric", &path]);
        assert_eq!(r.code, 2, "{body}");
        assert_eq!(r.stderr.lines().count(), 1, "{}", r.stderr);
        assert!(r.stderr.starts_with(&format!("error {code}: ")), "{}", r.stderr);
        assert!(r.stdout.is_empty());
    }
    let r = run(&["metric", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error IO_ERROR: "));
    assert_eq!(run(&["verify", "--dim", "4"]).code, 2);
}

#[test]
fn degree_radian_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "t.json", TRICLINIC);
    let rad = run(&["metric", "--radians", "--json", &path]);
    let rad_doc = InputDocument::parse(&rad.stdout).unwrap();
    assert_eq!(rad_doc.angle_unit, AngleUnit::Radians);
    assert!((rad_doc.geometry.as_ref().unwrap().angles["12"] - 72.0_f64.to_radians()).abs() < 1e-15);

    let rad_path = write(&dir, "t_rad.json", &rad.stdout);
    let deg = InputDocument::parse(&run(&["metric", "--degrees", "--json", &rad_path]).stdout).unwrap();
    let original = InputDocument::parse(TRICLINIC).unwrap();
    for (k, v) in &original.geometry.as_ref().unwrap().angles {
        assert!((deg.geometry.as_ref().unwrap().angles[k] - v).abs() < 1e-12, "{k}");
    }
}

#[test]
fn json_output_reparses_and_reruns_identically() {
    let dir = TempDir::new().unwrap();
    let inputs = [
        ("metric", TRICLINIC),
        ("volume", TRICLINIC),
        ("reciprocal", TRICLINIC),
        ("reciprocal", HEX),
        ("dual-metric", r#"{"dimension": 2, "metric": [[2, 0.5], [0.5, 1]], "mixed": [[1, 0.2], [0.1, 0.9]]}"#),
        ("solve-angles", r#"{"dimension": 2, "gammas": [[0.9, 0.2], [0.5, 0.8]]}"#),
    ];
    for (k, (cmd, body)) in inputs.iter().enumerate() {
        let path = write(&dir, &format!("in{k}.json"), body);
        let first = run(&[cmd, "--json", &path]);
        assert_eq!(first.code, 0, "{cmd}: {}", first.stderr);
        InputDocument::parse(&first.stdout).unwrap();
        let again = run(&[cmd, "--json", &path]);
        assert_eq!(first.stdout, again.stdout, "{cmd} not deterministic");
        let echoed = write(&dir, &format!("out{k}.json"), &first.stdout);
        let second = run(&[cmd, "--json", &echoed]);
        assert_eq!(second.code, 0, "{cmd}: {}", second.stderr);
        let (x, y) = (json(&first), json(&second));
        assert_eq!(x["result"], y["result"], "{cmd} changed on re-run");
    }
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dualbasis"))
        .args(["volume", "--json", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(SQUARE.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["volume"], 1.0);
    assert!(!Path::new("-").exists());
}
