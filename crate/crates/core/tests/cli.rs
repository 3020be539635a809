//! Black-box tests of the command-line binary: flag validation, exit codes,
//! CSV shape, config-file merging and output-file handling.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdf-outage"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analytic_single_row() {
    let out = run(&[
        "analytic", "--alpha", "4", "--beta", "0.1", "--xs", "15,0", "--xr", "6,0", "--lambda",
        "1e-3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("# command=analytic"));
    assert_eq!(lines[1], "lambda,q_bc,q_mac,q");
    let fields: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields[0], 1e-3);
    assert!((fields[1] + fields[2] - fields[3]).abs() < 1e-15);
    assert!(fields[3] > 0.0 && fields[3] < 1.0);
}

#[test]
fn missing_relay_is_usage_error() {
    let out = run(&["analytic", "--xs", "15,0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--xr"), "stderr: {err}");
}

#[test]
fn lambda_grid_expands_to_rows() {
    let out = run(&[
        "analytic", "--xs", "15,0", "--xr", "6,0", "--lambda-grid", "1e-6:1e-4:8log",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2 + 8);
    assert!(text.lines().next().unwrap().contains("lambda_grid=1e-6:1e-4:8log"));
}

#[test]
fn simulate_deterministic_and_validated() {
    let args = [
        "simulate", "--xs", "15,0", "--xr", "6,0", "--trials", "5000", "--seed", "3",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.lines().nth(1).unwrap().starts_with("lambda,q_bc_hat,se_bc"));

    let bad = run(&[
        "simulate", "--xs", "15,0", "--xr", "6,0", "--trials", "0",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn alpha_at_integrability_limit_rejected() {
    for cmd in ["analytic", "regions", "optimize"] {
        let out = run(&[cmd, "--xs", "15,0", "--xr", "6,0", "--alpha", "2"]);
        assert_eq!(out.status.code(), Some(2), "command {cmd}");
    }
}

#[test]
fn regions_reports_fig2_overlap() {
    let out = run(&["regions", "--xs", "15,0", "--xr", "6,0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    let fraction: f64 = row[5].parse().unwrap();
    assert!((fraction - 0.230).abs() < 0.005, "fraction {fraction}");
    assert_eq!(row[6], "true");
}

#[test]
fn scdo_default_is_order_one() {
    let out = run(&["scdo", "--xs", "15,0", "--xr", "6,0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    let delta: f64 = row[0].parse().unwrap();
    assert!((delta - 1.0).abs() < 0.1, "delta {delta}");
    assert_eq!(row[2], "analytic");
}

#[test]
fn scdo_bound_source_disjoint_is_order_two() {
    let out = run(&[
        "scdo", "--xs", "15,0", "--xr", "30,0", "--source", "bound", "--fading",
        "pathloss-only",
    ]);
    assert!(out.status.success());
    let delta: f64 = stdout(&out)
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((delta - 2.0).abs() < 0.05, "delta {delta}");
}

#[test]
fn bound_requires_supported_fading() {
    let out = run(&["bound", "--xs", "15,0", "--xr", "6,0"]);
    assert_eq!(out.status.code(), Some(2));
    let ok = run(&[
        "bound", "--xs", "15,0", "--xr", "6,0", "--fading", "pathloss-only",
    ]);
    assert!(ok.status.success());
    let text = stdout(&ok);
    assert!(text.lines().nth(1).unwrap() == "lambda,bound");
}

#[test]
fn optimize_sweep_rows() {
    let out = run(&[
        "optimize", "--xs", "15,0", "--alpha-grid", "3:4:2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let ratio: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(ratio > 0.5 && ratio < 1.0, "row {row}");
    }
}

#[test]
fn config_file_merges_under_flags() {
    let dir = std::env::temp_dir().join("sdf-outage-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("config.json");
    std::fs::write(
        &config_path,
        r#"{"xs": "15,0", "xr": "6,0", "beta": 0.2, "lambda": 1e-4}"#,
    )
    .unwrap();
    let from_file = run(&["analytic", "--config", config_path.to_str().unwrap()]);
    assert!(from_file.status.success());
    let text = stdout(&from_file);
    assert!(text.contains("beta=0.2") && text.contains("lambda=0.0001"), "{text}");

    // flag wins over file value
    let overridden = run(&[
        "analytic", "--config", config_path.to_str().unwrap(), "--beta", "0.1",
    ]);
    let text = stdout(&overridden);
    assert!(text.contains("beta=0.1"), "{text}");

    let bad_path = dir.join("nope.json");
    let missing = run(&["analytic", "--config", bad_path.to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(4));

    std::fs::write(&config_path, r#"{"unknown_field": 1}"#).unwrap();
    let unknown = run(&["analytic", "--config", config_path.to_str().unwrap()]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("sdf-outage-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("regions.csv");
    let out = run(&[
        "regions", "--xs", "15,0", "--xr", "6,0", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("r1,r2,"));
}

#[test]
fn tightness_emits_descending_grid() {
    let out = run(&[
        "tightness", "--xs", "15,0", "--xr", "6,0", "--fading", "pathloss-only", "--trials",
        "20000", "--lambda-grid", "1e-3:1e-2:5log",
    ]);
    assert!(out.status.success(), "{:?}", out);
    let text = stdout(&out);
    let lambdas: Vec<f64> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(lambdas.len(), 5);
    assert!(lambdas.windows(2).all(|w| w[0] > w[1]));
}
