// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tsteer::experiment::{
    config_from_csv, parse_with_overrides, run_with_workers, Entry, RunError, RunReport, Scenario,
    WORKERS_ENV,
};

#[derive(Parser)]
#[command(name = "tsteer", version, about = "Temporal steering through a dephasing XY spin chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decoherence factor F_t on the time grid.
    Factor(RunArgs),
    /// Steering parameters S2, S3 and their maxima.
    TsParam(RunArgs),
    /// Steering weight W(t) from the SDP.
    Weight(RunArgs),
    /// Weight power over a lambda or gamma sweep.
    Power(RunArgs),
    /// Weight over a (gamma, t) grid with sudden-death times.
    PhaseMap(RunArgs),
    /// Closed-form factor against exact diagonalization (L <= 12).
    OracleAudit(RunArgs),
    /// Regenerate a CSV from the metadata it carries.
    Rerun {
        csv: PathBuf,
        /// Defaults to `<csv>.rerun.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = WORKERS_ENV)]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    chain_size: Option<String>,
    #[arg(long)]
    n_meas: Option<String>,
    /// End of the time grid; the averaging horizon t_b for `power`.
    #[arg(long)]
    t_max: Option<String>,
    /// Time step; the averaging step for `power`.
    #[arg(long)]
    t_step: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    tol: Option<String>,
}

impl RunArgs {
    fn overrides(&self, scenario: Scenario) -> Vec<Entry> {
        let power = scenario == Scenario::Power;
        let pairs = [
            ("power.seed", &self.seed),
            ("chain.lambda", &self.lambda),
            ("chain.gamma", &self.gamma),
            ("chain.g", &self.g),
            ("chain.size", &self.chain_size),
            ("measurement.n", &self.n_meas),
            (if power { "power.t_b" } else { "time.stop" }, &self.t_max),
            (if power { "power.t_step" } else { "time.step" }, &self.t_step),
            ("power.samples", &self.samples),
            ("solver.tol", &self.tol),
        ];
        let mut out = vec![Entry { key: "scenario".into(), value: scenario.name().into(), line: None }];
        out.extend(pairs.into_iter().filter_map(|(key, v)| {
            v.as_ref().map(|value| Entry { key: key.into(), value: value.clone(), line: None })
        }));
        out
    }
}

fn report(result: Result<RunReport, RunError>) -> ExitCode {
    match result {
        Ok(r) => {
            eprintln!("wrote {} rows to {}", r.rows, r.path.display());
            if r.failed_points > 0 {
                eprintln!("{} grid points failed; see the status column", r.failed_points);
            }
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(scenario: Scenario, args: &RunArgs) -> Result<RunReport, RunError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| RunError::Io { path: path.clone(), source })?,
        None => String::new(),
    };
    let cfg = parse_with_overrides(&text, &args.overrides(scenario))?;
    let out = args
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{scenario}.csv")));
    run_with_workers(&cfg, &out, args.workers)
}

fn rerun_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv.with_file_name(format!("{stem}.rerun.csv"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (scenario, args) = match &cli.command {
        Command::Factor(a) => (Scenario::Factor, a),
        Command::TsParam(a) => (Scenario::TsParam, a),
        Command::Weight(a) => (Scenario::Weight, a),
        Command::Power(a) => (Scenario::Power, a),
        Command::PhaseMap(a) => (Scenario::PhaseMap, a),
        Command::OracleAudit(a) => (Scenario::OracleAudit, a),
        Command::Rerun { csv, out, workers } => {
            let out = out.clone().unwrap_or_else(|| rerun_path(csv));
            return report(config_from_csv(csv).and_then(|cfg| run_with_workers(&cfg, &out, *workers)));
        }
    };
    report(run(scenario, args))
}
