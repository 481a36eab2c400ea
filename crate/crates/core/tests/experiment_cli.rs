// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::Command;

use tsteer::experiment::output::{read_metadata, read_rows};
use tsteer::experiment::{
    parse_config, rerun, run_scenario_to, ExperimentConfig, RunError, Scenario,
};

fn small(scenario: Scenario) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::with_defaults(scenario);
    cfg.chain.size = 7;
    cfg.time.stop = 1.0;
    cfg.time.step = 0.25;
    cfg.power.t_b = 1.0;
    cfg.power.t_step = 0.5;
    cfg.power.samples = 3;
    cfg.power.values.start = 0.5;
    cfg.power.values.stop = 1.0;
    cfg.power.values.step = 0.25;
    cfg.gamma_grid.start = 0.5;
    cfg.gamma_grid.step = 0.25;
    cfg
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let (header, rows) = read_rows(path).unwrap();
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn fig2_style_file_round_trips() {
    let text = "scenario = weight\n\n[chain]\nsize = 1501\ngamma = 1\ng = 0.01\nlambda = 1\n\n\
                [time]\nstart = 0\nstop = 5\nstep = 0.05\n\n[measurement]\nn = 2\naxes = default-axes\n";
    let cfg = parse_config(text).unwrap();
    assert_eq!(cfg.chain.size, 1501);
    assert_eq!(parse_config(&cfg.to_config_text()).unwrap(), cfg);
    let mut angled = cfg.clone();
    angled.measurement.axes = tsteer::experiment::AxisChoice::Angles { theta: 0.1, phi: 1.0 / 3.0 };
    angled.output = Some("out/w.csv".into());
    assert_eq!(parse_config(&angled.to_config_text()).unwrap(), angled);
}

#[test]
fn even_chain_names_the_invariant() {
    let err = parse_config("scenario = factor\n[chain]\nsize = 1500\n").unwrap_err();
    assert_eq!(err.0.len(), 1);
    assert_eq!(err.0[0].line, Some(3));
    assert!(err.0[0].message.contains("odd"));
}

#[test]
fn uncoupled_qubit_keeps_full_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(Scenario::Factor);
    cfg.chain.g = 0.0;
    let path = dir.path().join("f.csv");
    run_scenario_to(&cfg, &path).unwrap();
    assert!(column(&path, "abs_f").iter().all(|&a| a == 1.0));
}

#[test]
fn oracle_audit_at_five_spins() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(Scenario::OracleAudit);
    cfg.chain.size = 5;
    cfg.chain.lambda = 0.3;
    cfg.chain.gamma = 0.8;
    cfg.chain.g = 0.1;
    cfg.time.stop = 5.0;
    cfg.time.step = 0.05;
    let path = dir.path().join("audit.csv");
    run_scenario_to(&cfg, &path).unwrap();
    let worst = column(&path, "abs_diff").into_iter().fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst}");
    assert!(read_metadata(&path).unwrap().contains(&("meta.ground_degenerate".into(), "false".into())));
}

#[test]
fn every_scenario_reruns_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    for scenario in Scenario::ALL {
        let first = dir.path().join(format!("{scenario}.csv"));
        let second = dir.path().join(format!("{scenario}.again.csv"));
        let report = run_scenario_to(&small(scenario), &first).unwrap();
        assert_eq!(report.failed_points, 0, "{scenario}");
        rerun(&first, &second).unwrap();
        assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap(), "{scenario}");
        let meta = read_metadata(&first).unwrap();
        assert!(meta.iter().any(|(k, _)| k == "power.seed"));
        assert!(meta.iter().any(|(k, _)| k == "meta.convention"));
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let err = run_scenario_to(&small(Scenario::Factor), Path::new("/nonexistent-dir/x.csv")).unwrap_err();
    assert!(matches!(err, RunError::Io { .. }));
    assert_eq!(err.exit_code(), 4);
}

fn tsteer(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tsteer")).args(args).current_dir(dir).output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.cfg");
    let text = "scenario = ts-param\n[chain]\nsize = 9\nlambda = 1.2\n[time]\nstop = 0.5\nstep = 0.25\n";
    std::fs::write(&cfg_path, text).unwrap();

    let ok = tsteer(&["ts-param", "--config", "run.cfg", "--out", "s.csv", "--workers", "2"], dir.path());
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(std::fs::read_to_string(&cfg_path).unwrap(), text);
    let again = tsteer(&["rerun", "s.csv", "--out", "s2.csv"], dir.path());
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read(dir.path().join("s.csv")).unwrap(), std::fs::read(dir.path().join("s2.csv")).unwrap());

    let over = tsteer(&["factor", "--config", "run.cfg", "--lambda", "-0.5", "--out", "f.csv"], dir.path());
    assert_eq!(over.status.code(), Some(0));
    let meta = read_metadata(&dir.path().join("f.csv")).unwrap();
    assert!(meta.contains(&("chain.lambda".into(), "-0.5".into())));
    assert!(meta.contains(&("scenario".into(), "factor".into())));

    let bad = tsteer(&["weight", "--chain-size", "4", "--tol", "abc"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("odd") && stderr.contains("solver.tol"), "{stderr}");

    let io = tsteer(&["factor", "--chain-size", "5", "--out", "missing/dir/f.csv"], dir.path());
    assert_eq!(io.status.code(), Some(4));
}
