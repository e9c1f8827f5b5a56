use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use edgemarket::Config;
use serde_json::Value;
use tempfile::TempDir;

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn default_config(dir: &TempDir) -> PathBuf {
    write_config(dir, "market.toml", &Config::default().to_toml())
}

fn run(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgemarket"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn solve_defaults() {
    let dir = TempDir::new().unwrap();
    let out = run(&["solve"], &default_config(&dir));
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(num(&report["profile"]["p"]), 100.0);
    assert!((num(&report["payoffs"]["wno_payoff"]) - 65.4227).abs() < 1e-3);
    assert_eq!(report["diagnostics"]["at_price_cap"], Value::Bool(true));
    assert_eq!(report["params"]["C_cache"], 120.0);
}

#[test]
fn solve_without_ad_revenue() {
    let dir = TempDir::new().unwrap();
    let out = run(&["solve", "--set", "sigma_c=0"], &default_config(&dir));
    let report = json(&out);
    assert!(num(&report["profile"]["theta"]).abs() < 1e-9);
    assert!(num(&report["profile"]["t"]).abs() < 1e-9);
}

#[test]
fn violated_condition_sets_exit_status() {
    let dir = TempDir::new().unwrap();
    let text = Config::default()
        .to_toml()
        .replace("alpha = 0.8", "alpha = 0.3");
    let out = run(&["solve"], &write_config(&dir, "a.toml", &text));
    assert_eq!(out.status.code(), Some(4));
    let report = json(&out);
    assert_eq!(report["conditions"]["cond_29"]["holds"], Value::Bool(false));
}

#[test]
fn malformed_config_names_the_key() {
    let dir = TempDir::new().unwrap();
    let text = Config::default().to_toml().replace("beta = 0.5\n", "");
    let out = run(&["solve"], &write_config(&dir, "bad.toml", &text));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta"));

    let text = Config::default()
        .to_toml()
        .replace("gamma = 0.8", "gamma = 1.5");
    let out = run(&["solve"], &write_config(&dir, "bad2.toml", &text));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
}

#[test]
fn check_reports_margins() {
    let dir = TempDir::new().unwrap();
    let out = run(&["check"], &default_config(&dir));
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let c = &report["conditions"];
    assert!((num(&c["cond_27"]["margin"]) - 0.6).abs() < 1e-15);
    assert!((num(&c["cond_29"]["margin"]) - 0.6).abs() < 1e-15);
    let x = num(&report["profile"]["x"]);
    let theta = num(&report["profile"]["theta"]);
    let expected = 120.0 * x.powf(-0.8) - theta * 100.0;
    assert!((num(&c["cond_25"]["margin"]) - expected).abs() < 1e-9);
}

#[test]
fn oracle_within_grid_bounds() {
    let dir = TempDir::new().unwrap();
    let out = run(&["oracle"], &default_config(&dir));
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    for key in ["p_star", "theta_star", "t_star", "x_star"] {
        let c = &report[key];
        assert!(num(&c["abs_dev"]) <= num(&c["bound"]), "{key}: {c}");
    }
    assert!(num(&report["solver_deviation_gain"]) <= 1e-6);
}

#[test]
fn sweep_rows_are_self_consistent() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("rows.csv");
    let out = run(
        &[
            "sweep",
            "--param",
            "sigma_c",
            "--from",
            "100",
            "--to",
            "140",
            "--steps",
            "3",
            "--set",
            "w=2",
            "--out",
            out_path.to_str().unwrap(),
        ],
        &default_config(&dir),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut reader = csv::Reader::from_path(&out_path).unwrap();
    let header = reader.headers().unwrap().clone();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let f = |name: &str| row[col(name)].parse::<f64>().unwrap();
        let m = Config::default().market;
        let (p, theta, t, x, sigma_c) = (
            f("p_star"),
            f("theta_star"),
            f("t_star"),
            f("x_star"),
            f("swept_value"),
        );
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
        assert!(rel(f("wno_payoff"), p * x - 2.0 * x * x));
        let h = |y: f64| y.powf(1.0 - m.gamma) / (1.0 - m.gamma);
        assert!(rel(f("scsp_profit"), sigma_c * h(x) - theta * p * x));
        assert!(rel(f("eccsp_profit"), sigma_c * h(1.0 - x) - m.c_cache * t));
        assert_eq!(&row[col("converged")], "true");
    }
}

#[test]
fn csv_output_for_solve() {
    let dir = TempDir::new().unwrap();
    let out = run(&["solve", "--format", "csv"], &default_config(&dir));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("p_star,theta_star"));
    assert!(lines.next().unwrap().starts_with("100,0.523068"));
}

#[test]
fn unknown_override_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = run(&["solve", "--set", "omega=3"], &default_config(&dir));
    assert_eq!(out.status.code(), Some(2));
}
