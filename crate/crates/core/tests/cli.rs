//! End-to-end runs of the `landau` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn landau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landau"))
        .args(args)
        .env_remove("LANDAU_TENSOR_DIR")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn single_mode_config(method: &str, l: u32, cache: bool) -> String {
    let cache = if cache { r#", "tensor_cache_dir": "cache""# } else { "" };
    format!(
        r#"{{
            "truncation": 6, "alpha": 0.0, "t_final": 0.5, "dt": 0.005, "method": "{method}",
            "initial": {{"kind": "single_mode", "n": 0, "l": {l}, "m": 0, "re": 1.0}},
            "output": {{"diagnostics_csv": "out/diag.csv", "final_state_csv": "out/final.csv",
                        "trajectory_csv": "out/traj.csv"}}{cache}
        }}"#
    )
}

#[test]
fn single_mode_decays_at_twelve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", &single_mode_config("etd-rk4", 2, false));
    let out = landau(&["run", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    let q = summary["final_row"]["q_alpha_norm"].as_f64().unwrap();
    assert_eq!(summary["steps"].as_u64(), Some(100));

    // The (0,2,0) amplitude decays exactly; shell 4 is fed by it, so the
    // full norm sits above e^{-6} and must agree with the cascade.
    let final_state = fs::read_to_string(dir.path().join("out/final.csv")).unwrap();
    let row = final_state.lines().find(|l| l.starts_with("0,2,0,")).unwrap();
    let re: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert!((re - (-6.0f64).exp()).abs() < 1e-8, "{re}");
    assert!(q > (-6.0f64).exp());
    let cascade_cfg = write_config(dir.path(), "cascade.json", &single_mode_config("cascade", 2, false));
    let out = landau(&["run", "--config", &cascade_cfg]);
    let exact: Value = serde_json::from_slice(&out.stdout).unwrap();
    let q_exact = exact["final_row"]["q_alpha_norm"].as_f64().unwrap();
    assert!((q - q_exact).abs() < 1e-8, "{q} vs {q_exact}");

    let diag = fs::read_to_string(dir.path().join("out/diag.csv")).unwrap();
    assert!(diag.starts_with("t,q_alpha_norm,gs_norm,s2_norm,nullspace_residual,energy_integral\n"));
    assert_eq!(diag.lines().count(), 102);
    assert!(final_state.starts_with("n,l,m,re,im\n0,2,0,"));
    assert!(dir.path().join("out/traj.csv").exists());
}

#[test]
fn cascade_rejects_null_space_datum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", &single_mode_config("cascade", 1, false));
    let out = landau(&["run", "--config", &cfg]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "null_space_precondition");
}

#[test]
fn warm_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", &single_mode_config("etd-rk4", 2, true));
    let first: Value = serde_json::from_slice(&landau(&["run", "--config", &cfg]).stdout).unwrap();
    assert_eq!(first["tensor_source"], "built");
    assert!(dir.path().join("cache/coupling-N6.csv").exists());
    let second = landau(&["run", "--config", &cfg]);
    let second_json: Value = serde_json::from_slice(&second.stdout).unwrap();
    assert_eq!(second_json["tensor_source"], "cache hit");
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    assert_eq!(first["final_row"], second_json["final_row"]);
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{
        "truncation": 8, "alpha": -2.0, "t_final": 0.2, "dt": 0.01,
        "initial": {"kind": "random", "seed": 17, "s2_norm": 0.3},
        "output": {"diagnostics_csv": "d.csv", "final_state_csv": "f.csv"}
    }"#;
    let cfg = write_config(dir.path(), "run.json", body);
    assert!(landau(&["run", "--config", &cfg]).status.success());
    let a = fs::read(dir.path().join("f.csv")).unwrap();
    let da = fs::read(dir.path().join("d.csv")).unwrap();
    assert!(landau(&["run", "--config", &cfg]).status.success());
    assert_eq!(a, fs::read(dir.path().join("f.csv")).unwrap());
    assert_eq!(da, fs::read(dir.path().join("d.csv")).unwrap());
}

#[test]
fn file_datum_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("init.csv"), "n,l,m,re,im\n0,2,1,0.1,0.05\n0,2,-1,0.1,-0.05\n1,1,0,0.2,0.0\n").unwrap();
    let body = r#"{
        "truncation": 6, "alpha": 0.0, "t_final": 0.1, "dt": 0.01, "method": "cascade",
        "initial": {"kind": "file", "path": "init.csv"},
        "output": {"diagnostics_csv": "d.csv", "final_state_csv": "f.csv"}
    }"#;
    let cfg = write_config(dir.path(), "run.json", body);
    let out = landau(&["run", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_config_reports_kind() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", &single_mode_config("etd-rk4", 2, false).replace("0.005", "1.0"));
    let out = landau(&["run", "--config", &cfg]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "config");
}

#[test]
fn build_tensor_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = landau(&["build-tensor", "--truncation", "8", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("coupling-N8.csv")).unwrap();
    assert!(text.starts_with("landau-coupling v1 N=8\n"));
    assert!(text.trim_end().lines().last().unwrap().starts_with("# sha256="));

    let out = landau(&["verify", "--level", "fast", "--seed", "9"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["a2_equality"]["equality_holds"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 6);
}
