// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario runner behind the `tsteer` binary: one CSV per run, with every
//! parameter in its metadata so the file can be regenerated from itself.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

pub use config::{
    build_config, parse_config, parse_with_overrides, tokenize, AxisChoice, ChainSpec, ConfigError, ConfigErrors, Entry,
    ExperimentConfig, GridSpec, MeasurementSpec, PowerSpec, Scenario,
};
use output::{fmt_num, read_metadata, write_table, Table};

use crate::assemblage_sdp::{build_assemblage, ts_weight, SdpStatus};
use crate::chain_spectrum::{decoherence_trace, decoherence_trace_with, Spectrum};
use crate::dephasing_channel::QubitState;
use crate::exact_oracle::{oracle_trace, FactorConvention};
use crate::power_sweep::{gamma_time_map, power_sweep};
use crate::steering_metrics::{s_max, ts_parameter_numeric};
use crate::VERSION;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "TSTEER_WORKERS";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error:\n{0}")]
    Config(#[from] ConfigErrors),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// 2 for configuration problems, 3 for numerical failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Model(crate::Error::Numerical(_)) => 3,
            RunError::Model(_) => 2,
            RunError::Io { .. } => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub path: PathBuf,
    pub rows: usize,
    /// Grid points whose computation failed; their rows are still written.
    pub failed_points: usize,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.failed_points == 0 {
            0
        } else {
            3
        }
    }
}

struct Output {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
    failed: usize,
    extra: Vec<(String, String)>,
}

fn is_failure(s: SdpStatus) -> bool {
    !matches!(s, SdpStatus::Optimal | SdpStatus::MaxIterations)
}

fn factor(cfg: &ExperimentConfig) -> crate::Result<Output> {
    let spectrum = Spectrum::with_choice(&cfg.chain.params()?, cfg.chain.sector);
    let rows = decoherence_trace_with(&spectrum, &cfg.time.points()?)?
        .iter()
        .map(|s| vec![fmt_num(s.t), fmt_num(s.f.re), fmt_num(s.f.im), fmt_num(s.abs_f)])
        .collect();
    Ok(Output { header: &["t", "re_f", "im_f", "abs_f"], rows, failed: 0, extra: vec![] })
}

fn ts_param(cfg: &ExperimentConfig) -> crate::Result<Output> {
    let spectrum = Spectrum::with_choice(&cfg.chain.params()?, cfg.chain.sector);
    let (m2, m3) = (cfg.measurement.build(2)?, cfg.measurement.build(3)?);
    let rho0 = QubitState::maximally_mixed();
    let rows = decoherence_trace_with(&spectrum, &cfg.time.points()?)?
        .iter()
        .map(|s| {
            Ok(vec![
                fmt_num(s.t),
                fmt_num(ts_parameter_numeric(s.f, &m2, &rho0)?),
                fmt_num(ts_parameter_numeric(s.f, &m3, &rho0)?),
                fmt_num(s_max(2, s.re_f)?),
                fmt_num(s_max(3, s.re_f)?),
            ])
        })
        .collect::<crate::Result<_>>()?;
    Ok(Output { header: &["t", "s2", "s3", "s2_max", "s3_max"], rows, failed: 0, extra: vec![] })
}

fn weight(cfg: &ExperimentConfig) -> crate::Result<Output> {
    let spectrum = Spectrum::with_choice(&cfg.chain.params()?, cfg.chain.sector);
    let meas = cfg.measurement.build(cfg.measurement.n)?;
    let rho0 = QubitState::maximally_mixed();
    let trace = decoherence_trace_with(&spectrum, &cfg.time.points()?)?;
    let solved: Vec<(f64, f64, f64, SdpStatus)> = trace
        .par_iter()
        .map(|s| {
            let sol = ts_weight(&build_assemblage(s.f, &meas, &rho0)?, cfg.tol)?;
            Ok((s.t, sol.weight, sol.gap, sol.status))
        })
        .collect::<crate::Result<_>>()?;
    let failed = solved.iter().filter(|r| is_failure(r.3)).count();
    let rows = solved
        .iter()
        .map(|&(t, w, gap, st)| vec![fmt_num(t), fmt_num(w), fmt_num(gap), st.as_str().to_string()])
        .collect();
    Ok(Output { header: &["t", "w", "gap", "status"], rows, failed, extra: vec![] })
}

fn power(cfg: &ExperimentConfig) -> crate::Result<Output> {
    let params = cfg.chain.params()?;
    let pcfg = cfg.power_config()?;
    let values = cfg.power.values.points()?;
    let points = power_sweep(&params, cfg.power.sweep, &values, &pcfg)?;
    let mut failed = 0;
    let rows = points
        .iter()
        .map(|p| match &p.outcome {
            Ok(r) => vec![
                fmt_num(p.value),
                fmt_num(r.power),
                fmt_num(r.best_angles.0),
                fmt_num(r.best_angles.1),
                r.failed_samples.to_string(),
                "ok".to_string(),
            ],
            Err(e) => {
                failed += 1;
                let nan = fmt_num(f64::NAN);
                vec![fmt_num(p.value), nan.clone(), nan.clone(), nan, pcfg.samples.to_string(), e.to_string()]
            }
        })
        .collect();
    let header: &'static [&'static str] = match cfg.power.sweep {
        crate::power_sweep::SweepAxis::Lambda => {
            &["lambda", "power", "best_theta", "best_phi", "failed_samples", "status"]
        }
        crate::power_sweep::SweepAxis::Gamma => {
            &["gamma", "power", "best_theta", "best_phi", "failed_samples", "status"]
        }
    };
    Ok(Output { header, rows, failed, extra: vec![] })
}

fn phase_map(cfg: &ExperimentConfig) -> crate::Result<Output> {
    let params = cfg.chain.params()?;
    let meas = cfg.measurement.build(cfg.measurement.n)?;
    let map = gamma_time_map(&params, &cfg.gamma_grid.points()?, &cfg.time.points()?, &meas, cfg.tol)?;
    let mut rows = Vec::with_capacity(map.gammas.len() * map.times.len());
    for (i, &g) in map.gammas.iter().enumerate() {
        let death = map.sudden_death[i].map_or_else(|| "none".to_string(), fmt_num);
        for (j, &t) in map.times.iter().enumerate() {
            rows.push(vec![
                fmt_num(g),
                fmt_num(t),
                fmt_num(map.weights[i][j]),
                map.statuses[i][j].as_str().to_string(),
                death.clone(),
            ]);
        }
    }
    Ok(Output {
        header: &["gamma", "t", "w", "status", "sudden_death_t"],
        rows,
        failed: map.failed_points(),
        extra: vec![],
    })
}

fn oracle_audit(cfg: &ExperimentConfig) -> crate::Result<Output> {
    let params = cfg.chain.params()?;
    let grid = cfg.time.points()?;
    let closed = decoherence_trace(&params, &grid)?;
    let (oracle, ground) = oracle_trace(&params, &grid, FactorConvention::default())?;
    let mut max_diff = 0.0f64;
    let rows = closed
        .iter()
        .zip(&oracle)
        .map(|(c, o)| {
            let diff = (c.f - o).norm();
            max_diff = max_diff.max(diff);
            vec![fmt_num(c.t), fmt_num(c.f.re), fmt_num(c.f.im), fmt_num(o.re), fmt_num(o.im), fmt_num(diff)]
        })
        .collect();
    Ok(Output {
        header: &["t", "closed_form_re", "closed_form_im", "oracle_re", "oracle_im", "abs_diff"],
        rows,
        failed: 0,
        extra: vec![
            ("meta.max_abs_diff".into(), fmt_num(max_diff)),
            ("meta.ground_degenerate".into(), ground.degenerate.to_string()),
        ],
    })
}

/// Metadata written above every table.
pub fn metadata(cfg: &ExperimentConfig) -> crate::Result<Vec<(String, String)>> {
    let params = cfg.chain.params()?;
    let mut meta = vec![
        ("meta.version".to_string(), VERSION.to_string()),
        ("meta.convention".to_string(), format!("F_t = {}", FactorConvention::default().describe())),
        ("meta.sector".to_string(), cfg.chain.sector.resolve(&params).name().to_string()),
    ];
    meta.extend(cfg.pairs());
    Ok(meta)
}

/// Default output file: `<scenario>.csv` in the working directory.
pub fn default_output(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.scenario)))
}

/// Runs the scenario and writes its CSV to `path`.
pub fn run_scenario_to(cfg: &ExperimentConfig, path: &Path) -> Result<RunReport, RunError> {
    let mut meta = metadata(cfg)?;
    let out = match cfg.scenario {
        Scenario::Factor => factor(cfg),
        Scenario::TsParam => ts_param(cfg),
        Scenario::Weight => weight(cfg),
        Scenario::Power => power(cfg),
        Scenario::PhaseMap => phase_map(cfg),
        Scenario::OracleAudit => oracle_audit(cfg),
    }?;
    meta.extend(out.extra);
    let table = Table {
        metadata: meta,
        header: out.header.iter().map(|s| s.to_string()).collect(),
        rows: out.rows,
    };
    write_table(path, &table).map_err(|source| RunError::Io { path: path.to_path_buf(), source })?;
    Ok(RunReport { path: path.to_path_buf(), rows: table.rows.len(), failed_points: out.failed })
}

/// Runs the scenario to its configured output path.
pub fn run_scenario(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    run_scenario_to(cfg, &default_output(cfg))
}

/// Runs on a dedicated pool of `workers` threads; `None` keeps the global pool.
pub fn run_with_workers(
    cfg: &ExperimentConfig,
    path: &Path,
    workers: Option<usize>,
) -> Result<RunReport, RunError> {
    match workers {
        None => run_scenario_to(cfg, path),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().map_err(|e| {
                RunError::Io { path: path.to_path_buf(), source: std::io::Error::other(e) }
            })?;
            pool.install(|| run_scenario_to(cfg, path))
        }
    }
}

/// Config embedded in a CSV written by [`run_scenario_to`].
pub fn config_from_csv(csv: &Path) -> Result<ExperimentConfig, RunError> {
    let pairs = read_metadata(csv).map_err(|source| RunError::Io { path: csv.to_path_buf(), source })?;
    let entries: Vec<Entry> = pairs
        .into_iter()
        .filter(|(k, _)| !k.starts_with("meta."))
        .map(|(key, value)| Entry { key, value, line: None })
        .collect();
    Ok(build_config(&entries, None)?)
}

/// Regenerates `csv` from its own metadata into `out`.
pub fn rerun(csv: &Path, out: &Path) -> Result<RunReport, RunError> {
    run_scenario_to(&config_from_csv(csv)?, out)
}
