use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_neutral")
}

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/specs").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_spec(cmd: &str, name: &str) -> Value {
    let p = spec(name);
    let (code, stdout, stderr) = run(&[cmd, "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{cmd} {name}: {stderr}");
    serde_json::from_str(&stdout).expect("output is JSON")
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn pt_disk() {
    let v = run_spec("pt", "disk_k2.json");
    let m = &v["tensor"]["matrix"];
    for i in 0..2 {
        assert!((m[i][i].as_f64().unwrap() - 2.0943951023931953).abs() < 1e-8);
    }
}

#[test]
fn coat_reports_radius_and_cancellation() {
    let v = run_spec("coat", "bd0_sigma05.json");
    assert!((v["coating"]["radius"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-14);
    assert_eq!(v["coating"]["sigma_c"], "inf");
    assert!(v["relative_norm"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn quad_oval_foci() {
    let v = run_spec("quad", "oval_1_05.json");
    assert!((v["derived"][0][1].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn every_shipped_spec_runs() {
    for (cmd, name) in [
        ("beta", "weakly_neutral_beta.json"),
        ("lc-disk", "lc_disk.json"),
        ("odp", "confocal_odp.json"),
        ("hs", "ellipse_hs.json"),
        ("newton-coat", "newton_coat.json"),
        ("decay", "coated_decay.json"),
    ] {
        run_spec(cmd, name);
    }
    let hs = run_spec("hs", "ellipse_hs.json");
    assert_eq!(hs["report"]["attains_lower"], true);
}

#[test]
fn field_writes_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("g.csv");
    let out = dir.path().join("f.json");
    let p = spec("coated_field.json");
    let (code, _, err) = run(&["field", "--input", p.to_str().unwrap(), "--output", out.to_str().unwrap(), "--grid", grid.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&grid).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,u,pert,mask"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 81 * 81);
    assert!(rows.iter().any(|r| r.ends_with(",2") && r.contains("NaN")));
    assert!(rows.iter().any(|r| r.ends_with(",1")));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["grid_cells"], 6561);
}

#[test]
fn reruns_are_byte_identical() {
    let p = spec("bd0_sigma05.json");
    let a = run(&["coat", "--input", p.to_str().unwrap()]);
    let b = run(&["coat", "--input", p.to_str().unwrap()]);
    assert_eq!(a.1, b.1);
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_tmp(&dir, "u.json", r#"{"curve": {"kind": "circle", "radius": 1.0}, "k": 2.0, "extra": 1}"#);
    assert_eq!(run(&["pt", "--input", &unknown]).0, 2);
    let big = write_tmp(&dir, "b.json", r#"{"map": {"coefficients": [[0.3, 0.0]]}}"#);
    let (code, _, err) = run(&["beta", "--input", &big]);
    assert_eq!(code, 2);
    assert!(err.contains("2 - sqrt(3)"), "{err}");
    let bd = write_tmp(&dir, "c.json", r#"{"map": {"coefficients": [[0.1, 0.0]]}, "sigma_s": 0.5}"#);
    assert_eq!(run(&["coat", "--input", &bd]).0, 2);
    assert_eq!(run(&["pt"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
}

#[test]
fn numerical_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(
        &dir,
        "n.json",
        r#"{"h": {"cos": [0.0, 0.0, 0.05]}, "sigma_c": 10.0, "sigma_s": 0.5, "sigma_m": 1.0, "r_i": 1.0, "nodes": 128, "tol": 1e-30, "max_iter": 1}"#,
    );
    let (code, _, err) = run(&["newton-coat", "--input", &p]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn newton_search_converges() {
    let v = run_spec("newton-coat", "newton_coat.json");
    assert!(v["iterations"].as_u64().unwrap() <= 10);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
}
