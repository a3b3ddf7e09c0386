use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use catenoid::flux::{FluxData, FluxEnd};
use catenoid::solver::perturb_weight;
use catenoid::symmetric::symmetric_configuration;
use serde_json::Value;
use tempfile::TempDir;

fn catenoid(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_catenoid")).args(args).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).to_string() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn load(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn weights(doc: &Value) -> Vec<f64> {
    doc["ends"].as_array().unwrap().iter().map(|e| e["a"].as_f64().unwrap()).collect()
}

fn write_target(dir: &TempDir, name: &str, data: &FluxData) -> PathBuf {
    let p = path(dir, name);
    fs::write(&p, serde_json::to_string(data).unwrap()).unwrap();
    p
}

#[test]
fn symmetric_writes_family_weights() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "cfg.json");
    let (code, text) = catenoid(&["symmetric", "--m", "4", "--r", "2", "-o", s(&out)]);
    assert_eq!(code, 0, "{text}");
    let doc = load(&out);
    for (a, b) in weights(&doc).iter().zip([15.0, 15.0, 15.0, 15.0, 36.0]) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(doc["certificate"]["passed"], Value::Bool(true));
    assert!(doc["residuals"]["r_x_norm"].as_f64().unwrap() < 1e-12);
}

#[test]
fn symmetric_rejects_degenerate_radius() {
    let dir = TempDir::new().unwrap();
    let (code, text) = catenoid(&["symmetric", "--m", "4", "--r", "1", "-o", s(&path(&dir, "x.json"))]);
    assert_eq!(code, 2);
    assert!(text.contains("degenerate"), "{text}");
}

#[test]
fn symmetric_negative_weight() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "cfg.json");
    assert_eq!(catenoid(&["symmetric", "--m", "3", "--r", "0.5", "-o", s(&out)]).0, 0);
    assert!(*weights(&load(&out)).last().unwrap() < 0.0);
}

#[test]
fn solve_exact_target() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "cfg.json");
    catenoid(&["symmetric", "--m", "4", "--r", "2", "-o", s(&cfg)]);
    let out = path(&dir, "sol.json");
    let (code, text) = catenoid(&["solve", "--target", s(&cfg), "--from-symmetric", "4,2", "-o", s(&out)]);
    assert_eq!(code, 0, "{text}");
    assert!(load(&out)["residual_norm"].as_f64().unwrap() < 1e-12);
}

#[test]
fn solve_perturbed_target() {
    let dir = TempDir::new().unwrap();
    let (_, data) = symmetric_configuration(4, 2.0).unwrap();
    let target = write_target(&dir, "t.json", &perturb_weight(&data, 0, 1.01).unwrap());
    let out = path(&dir, "sol.json");
    let (code, text) = catenoid(&["solve", "--target", s(&target), "--from-symmetric", "4,2", "-o", s(&out)]);
    assert_eq!(code, 0, "{text}");
    let doc = load(&out);
    assert!(doc["residual_norm"].as_f64().unwrap() < 1e-9);
    assert_eq!(doc["report"]["passed"], Value::Bool(true));
}

#[test]
fn near_balanced_target_is_projected() {
    let dir = TempDir::new().unwrap();
    let (_, mut data) = symmetric_configuration(4, 2.0).unwrap();
    data.ends[0].a += 1e-7;
    let target = write_target(&dir, "t.json", &data);
    let out = path(&dir, "sol.json");
    let (code, text) = catenoid(&["solve", "--target", s(&target), "-o", s(&out)]);
    assert_eq!(code, 0, "{text}");
    assert!(load(&out)["projection"].as_f64().unwrap() > 0.0);

    data.ends[0].a += 1e-3;
    let target = write_target(&dir, "far.json", &data);
    assert_eq!(catenoid(&["solve", "--target", s(&target), "-o", s(&out)]).0, 2);
}

#[test]
fn coincident_normals_do_not_solve() {
    let dir = TempDir::new().unwrap();
    let ends = vec![
        FluxEnd { v: [1.0, 0.0, 0.0], a: 1.0 },
        FluxEnd { v: [1.0, 0.0, 0.0], a: 1.0 },
        FluxEnd { v: [-1.0, 0.0, 0.0], a: 2.0 },
    ];
    let target = write_target(&dir, "t.json", &FluxData { ends });
    let (code, text) = catenoid(&["solve", "--target", s(&target), "-o", s(&path(&dir, "sol.json"))]);
    assert_eq!(code, 1, "{text}");
}

#[test]
fn malformed_input_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    fs::write(&bad, "{\"ends\": [").unwrap();
    assert_eq!(catenoid(&["solve", "--target", s(&bad), "-o", s(&path(&dir, "o.json"))]).0, 2);
    assert_eq!(catenoid(&["mesh", "--config", s(&bad), "-o", s(&path(&dir, "o.obj"))]).0, 2);
    assert_eq!(catenoid(&["solve", "--target", s(&path(&dir, "missing.json")), "-o", s(&bad)]).0, 2);
}

#[test]
fn mesh_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "cfg.json");
    catenoid(&["symmetric", "--m", "3", "--r", "2", "-o", s(&cfg)]);
    let (a, b) = (path(&dir, "a.obj"), path(&dir, "b.obj"));
    assert_eq!(catenoid(&["mesh", "--config", s(&cfg), "--rings", "8", "--radial", "16", "-o", s(&a)]).0, 0);
    assert_eq!(catenoid(&["--sequential", "mesh", "--config", s(&cfg), "--rings", "8", "--radial", "16", "-o", s(&b)]).0, 0);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let objects: Vec<&str> = text.lines().filter(|l| l.starts_with("o ")).collect();
    assert_eq!(objects, ["o core", "o end_1", "o end_2", "o end_3", "o end_4"]);
    assert!(text.lines().filter(|l| l.starts_with("v ")).count() > 100);
}

#[test]
fn branched_mesh_is_refused() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "cfg.json");
    // b vanishes at the last end, so P and Q lose a degree
    fs::write(&cfg, r#"{"p":[[2,0],[-1,1.7320508075688772],[-1,-1.7320508075688772],[0,0]],
        "q":[[1,0],[-0.5,0.8660254037844386],[-0.5,-0.8660254037844386],[0,0]],
        "b":[[1,0],[1,0],[1,0],[0,0]]}"#)
        .unwrap();
    let (code, text) = catenoid(&["mesh", "--config", s(&cfg), "-o", s(&path(&dir, "m.obj"))]);
    assert_eq!(code, 2, "{text}");
    assert!(text.contains("branched"), "{text}");
}

#[test]
fn verify_manifest_shape() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "manifest.json");
    let (code, text) = catenoid(&["verify", "--only", "appendix-b", "--json", s(&out)]);
    assert_eq!(code, 0, "{text}");
    let doc = load(&out);
    assert_eq!(doc["command"], "verify");
    assert_eq!(doc["input_digest"].as_str().unwrap().len(), 64);
    assert!(doc["wall_time_s"].as_f64().unwrap() >= 0.0);
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "passed", "measured", "bound"] {
            assert!(c.get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn verify_unmeetable_tolerance_fails() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "manifest.json");
    let (code, _) = catenoid(&["verify", "--tol", "1e-30", "--only", "kernels", "--json", s(&out)]);
    assert_eq!(code, 1);
    let doc = load(&out);
    assert_eq!(doc["tolerance_overrides"]["tol"].as_f64(), Some(1e-30));
    assert!(doc["checks"].as_array().unwrap().iter().any(|c| c["passed"] == Value::Bool(false)));
}

#[test]
fn verify_small_grid_exits_zero() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "manifest.json");
    let (code, text) = catenoid(&["verify", "--m-max", "6", "--json", s(&out)]);
    assert!(load(&out)["checks"].as_array().unwrap().len() >= 25);
    assert_eq!(code, 0, "{text}");
}

#[test]
fn verify_rejects_bad_flags() {
    assert_eq!(catenoid(&["verify", "--m-max", "2"]).0, 2);
    assert_eq!(catenoid(&["verify", "--only", "nothing"]).0, 2);
    assert_eq!(catenoid(&["solve", "--target", "x", "--seed", "y", "--from-symmetric", "4,2", "-o", "z"]).0, 2);
}
