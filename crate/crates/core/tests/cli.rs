mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BASE: &str = r#"
[depth]
family = "log-depth"
params = [1.0]
delta = 1.0

[curvature]
family = "bump"
params = [0.3]
R = 1.0

[transversal]
n = 256
"#;

const STRIP: &str = r#"
[strip2d]
L = 3.0
m = 96
n = 12
k = 2
stability_solve = false
"#;

fn shelfwave(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shelfwave"))
        .args(args)
        .current_dir(dir)
        .env_remove("SHELFWAVE_OUT_DIR")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("case.toml");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn sweep_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn straight_coast_has_no_candidates() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), &format!("{}{STRIP}", BASE.replace("\"bump\"", "\"zero\"").replace("[0.3]", "[]")));
    let out = t.path().join("o");
    let o = shelfwave(&["run", &cfg, "--out", out.to_str().unwrap()], t.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["trapping"]["verdict_integral"], Value::Bool(false));
    assert_eq!(r["candidates"].as_array().unwrap().len(), 0);
    assert!(out.join("dispersion.csv").exists());
}

#[test]
fn decreasing_depth_is_rejected() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), &BASE.replace("\"log-depth\"", "\"linear\"").replace("params = [1.0]", "params = [-0.5]"));
    let o = shelfwave(&["run", &cfg, "--out", t.path().join("o").to_str().unwrap()], t.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("increase offshore"));
}

#[test]
fn malformed_config_exits_2() {
    let t = tempfile::tempdir().unwrap();
    for body in [format!("{BASE}\n[oops]\nx = 1\n"), BASE.replace("n = 256", "n = 1"), "not toml [".to_string()] {
        let cfg = write_config(t.path(), &body);
        let o = shelfwave(&["run", &cfg], t.path());
        assert_eq!(o.status.code(), Some(2), "{body}");
    }
    let o = shelfwave(&["run", "missing.toml"], t.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn amplitude_sweep_agrees_with_critical_amplitude() {
    let t = tempfile::tempdir().unwrap();
    // linear shelf: a_crit sits below the self-intersection bound a delta < 1
    let cfg = write_config(t.path(), &BASE.replace("\"log-depth\"", "\"linear\""));
    let out = t.path().join("o");
    let o = shelfwave(
        &["sweep", &cfg, "--param", "curvature.params[0]", "--values", "0.1,0.3,0.5,0.7,0.8,0.85,0.9,0.95", "--jobs", "2", "--out", out.to_str().unwrap()],
        t.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = sweep_rows(&out.join("sweep.csv"));
    assert_eq!(rows[0][0], "value");
    let col = |h: &str| rows[0].iter().position(|x| x == h).unwrap();
    let (c1, c2) = common::bump_constants();
    let mut seen = [false; 2];
    for r in &rows[1..] {
        let a: f64 = r[0].parse().unwrap();
        let c_beta: f64 = r[col("C_beta")].parse().unwrap();
        let holds = a < c1 / (c_beta * c2);
        seen[holds as usize] = true;
        assert_eq!(r[col("verdict_integral")], holds.to_string(), "a = {a}");
    }
    assert!(seen[0] && seen[1]);
}

#[test]
fn single_value_sweep_matches_run() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), &format!("{BASE}{STRIP}"));
    let (a, b) = (t.path().join("a"), t.path().join("b"));
    assert!(shelfwave(&["run", &cfg, "--out", a.to_str().unwrap()], t.path()).status.success());
    let o = shelfwave(&["sweep", &cfg, "--param", "curvature.params[0]", "--values", "0.3", "--out", b.to_str().unwrap()], t.path());
    assert!(o.status.success());
    let r = report(&a);
    let rows = sweep_rows(&b.join("sweep.csv"));
    let get = |h: &str| rows[1][rows[0].iter().position(|x| x == h).unwrap()].parse::<f64>().unwrap();
    assert_eq!(get("omega_star"), r["band"]["omega_star"].as_f64().unwrap());
    assert_eq!(get("omega_top"), r["strip2d"]["eigenvalues"][0].as_f64().unwrap());
}

#[test]
fn length_sweep_reports_truncation_gap() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), &format!("{BASE}{}", STRIP.replace("false", "true")));
    let out = t.path().join("o");
    let o = shelfwave(&["sweep", &cfg, "--param", "strip2d.L", "--values", "2.5,3", "--out", out.to_str().unwrap()], t.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = sweep_rows(&out.join("sweep.csv"));
    let col = rows[0].iter().position(|h| h == "truncation_gap").unwrap();
    for r in &rows[1..] {
        assert_eq!(r[1], "ok");
        assert!(r[col].parse::<f64>().unwrap().is_finite());
    }
}

#[test]
fn environment_output_directory() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), BASE);
    let env_dir = t.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_shelfwave"))
        .args(["run", &cfg])
        .env("SHELFWAVE_OUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(env_dir.join("report.json").exists());
    assert!(!t.path().join("out").exists());
}

#[test]
fn config_relative_output_directory() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), &format!("{BASE}\n[outputs]\ndir = \"res\"\n"));
    let elsewhere = tempfile::tempdir().unwrap();
    assert!(shelfwave(&["run", &cfg], elsewhere.path()).status.success());
    assert!(t.path().join("res/report.json").exists());
}

#[test]
fn unwritable_output_exits_1() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), BASE);
    let blocker = t.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = shelfwave(&["run", &cfg, "--out", blocker.join("sub").to_str().unwrap()], t.path());
    assert_eq!(o.status.code(), Some(1));
}
