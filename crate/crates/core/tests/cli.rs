use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fracwave"));
    c.env_remove("FRACWAVE_THREADS");
    c
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).to_string_lossy().into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn diagnostic(out: &Output) -> Value {
    let err = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(err.lines().last().unwrap_or("")).unwrap_or_else(|_| panic!("stderr: {err}"))
}

fn read_json(p: PathBuf) -> Value {
    serde_json::from_slice(&std::fs::read(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))).unwrap()
}

#[test]
fn ml_eval_prints_value() {
    let out = bin().args(["ml", "eval", "--alpha", "2", "--beta", "1", "--z", "-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1f64.cos()).abs() < 1e-15);
    assert!(v["method"].is_string());
}

#[test]
fn ml_eval_domain_error() {
    let out = bin().args(["ml", "eval", "--alpha", "3", "--beta", "1", "--z", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["code"], "E_ML_DOMAIN");
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().args(["solve", "scalar"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cauchy_csv_and_record() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");
    let out = bin()
        .args(["solve", "scalar", "--config", &config("cauchy_classical.json"), "--out-dir"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("solution.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,u,I_beta_u,D_gamma_u"));
    assert_eq!(csv.lines().count(), 102);
    let rec = read_json(out_dir.join("solution.json"));
    assert_eq!(rec["family"], "cauchy");
    assert_eq!(rec["C1"], 0.0);
    assert_eq!(rec["C2"], 1.0);
    assert_eq!(rec["source"]["kind"], "zero");
}

#[test]
fn default_output_dir_sits_next_to_config() {
    let tmp = tempfile::tempdir().unwrap();
    let body = std::fs::read_to_string(config("inner_fractional.json")).unwrap();
    let cfg = write_config(tmp.path(), "run.json", &body);
    let out = bin().args(["solve", "scalar", "--config", &cfg]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let dir = tmp.path().join("run-out");
    for f in ["conditions.json", "solution.json", "solution.csv"] {
        assert!(dir.join(f).is_file(), "{f}");
    }
    let c = read_json(dir.join("conditions.json"));
    assert_eq!(c["solvable"], true);
}

#[test]
fn degenerate_system_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["solve", "scalar", "--config", &config("inner_boundary_degenerate.json"), "--out-dir"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let d = diagnostic(&out);
    assert_eq!(d["code"], "E_DEGENERATE_SYSTEM");
    assert!(d["report"]["det"].as_f64().unwrap().abs() < 1e-12);
    assert!(!tmp.path().join("solution.json").exists());
}

#[test]
fn invalid_orders_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.json",
        r#"{"problem": {"family": "inner", "alpha": 1.5, "beta": 0.8, "gamma": 0.2, "m": -1.0,
            "t_end": 1.0, "a": 0.5, "data": [1.0, 0.0]}}"#,
    );
    let out = bin().args(["solve", "scalar", "--config", &cfg]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["code"], "E_BETA_RANGE");

    let cfg = write_config(
        tmp.path(),
        "cauchy.json",
        r#"{"problem": {"family": "cauchy", "alpha": 1.5, "beta": 0.2, "gamma": 0.2, "m": -1.0,
            "t_end": 1.0, "data": [1.0, 0.0]}}"#,
    );
    let out = bin().args(["solve", "scalar", "--config", &cfg]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["code"], "E_CAUCHY_GAMMA_NOT_CRITICAL");
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin().args(["solve", "scalar", "--config", "/nonexistent/x.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["code"], "E_CONFIG_IO");

    let cfg = write_config(tmp.path(), "typo.json", r#"{"problem": {"family": "cauchy", "alhpa": 1.5}}"#);
    let out = bin().args(["solve", "scalar", "--config", &cfg]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["code"], "E_CONFIG_PARSE");
}

#[test]
fn table_source_from_file() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("f.csv"), "t,f\n0,1\n0.5,0.5\n1,0\n").unwrap();
    let cfg = write_config(
        tmp.path(),
        "table.json",
        r#"{"problem": {"family": "cauchy", "alpha": 1.5, "beta": 0.5, "gamma": 0.5, "m": -1.0,
            "t_end": 1.0, "data": [0.0, 1.0], "source": {"kind": "table_file", "path": "f.csv"}},
            "numerics": {"grid_n": 400}}"#,
    );
    let out = bin().args(["verify", "--config", &cfg]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(tmp.path().join("table-out").join("verification.json"));
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn grid_override_is_validated() {
    let out = bin()
        .args(["verify", "--config", &config("cauchy_classical.json"), "--grid-n", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["code"], "E_GRID_N");
}

#[test]
fn thread_variable_is_checked() {
    let out = bin()
        .env("FRACWAVE_THREADS", "zero")
        .args(["ml", "eval", "--alpha", "1", "--beta", "1", "--z", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["code"], "E_THREADS");
    let out = bin()
        .env("FRACWAVE_THREADS", "1")
        .args(["ml", "eval", "--alpha", "1", "--beta", "1", "--z", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn pde_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["solve", "pde", "--config", &config("pde_wave.json"), "--out-dir"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = read_json(tmp.path().join("series.json"));
    assert_eq!(s["N"], 16);
    assert_eq!(s["modes"].as_array().unwrap().len(), 16);
    let n = read_json(tmp.path().join("norms.json"));
    for k in ["u", "a_u", "d_alpha_u"] {
        assert!(n["stability_ratios"][k].as_f64().unwrap().is_finite());
    }
    let field = std::fs::read_to_string(tmp.path().join("field.csv")).unwrap();
    assert_eq!(field.lines().next(), Some("t,x,u"));
    assert_eq!(field.lines().count(), 1 + 20 * 17);
}

#[test]
fn pde_degenerate_mode_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "deg.json",
        r#"{"mode": "solve_pde", "problem": {"family": "inner_boundary", "alpha": 2.0, "beta": 0.0, "gamma": 1.0,
            "t_end": 4.0, "a": 1.5707963267948966, "b": 3.141592653589793,
            "operator": {"kind": "dirichlet_laplacian", "length": 3.141592653589793},
            "u1": {"kind": "mode", "xi": 1, "amplitude": 1.0}}, "numerics": {"n_modes": 4}}"#,
    );
    let out = bin().args(["solve", "pde", "--config", &cfg]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(diagnostic(&out)["code"], "E_DEGENERATE_MODE");
    assert!(tmp.path().join("deg-out").join("conditions.json").is_file());
}

#[test]
fn in_process_entry_point() {
    assert_eq!(fracwave::cli::run_from_args(["fracwave", "ml", "eval", "--alpha", "1.5", "--beta", "1", "--z", "-2"]), 0);
    assert_eq!(fracwave::cli::run_from_args(["fracwave", "ml", "eval", "--alpha", "1.5"]), 2);
}
