// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Line-based `key = value` configuration with `[section]` headers.
//!
//! A key may also be written in dotted form (`chain.lambda = 1`) anywhere in
//! the file; that is the form used in CSV metadata. Full-line comments start
//! with `#` or `;`. Every problem is reported, each with its line number.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::assemblage_sdp::MIN_TOLERANCE;
use crate::chain_spectrum::{uniform_grid, ChainParams, SectorChoice};
use crate::exact_oracle::MAX_ORACLE_SIZE;
use crate::power_sweep::{PowerConfig, SweepAxis, DEFAULT_SEED};
use crate::steering_metrics::{build_measurements, AxisPreset, MeasurementSet};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Factor,
    TsParam,
    Weight,
    Power,
    PhaseMap,
    OracleAudit,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Factor,
        Scenario::TsParam,
        Scenario::Weight,
        Scenario::Power,
        Scenario::PhaseMap,
        Scenario::OracleAudit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Factor => "factor",
            Scenario::TsParam => "ts-param",
            Scenario::Weight => "weight",
            Scenario::Power => "power",
            Scenario::PhaseMap => "phase-map",
            Scenario::OracleAudit => "oracle-audit",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
                format!("unknown scenario '{s}' (expected one of {})", names.join(", "))
            })
    }
}

/// `start, start + step, …, stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        uniform_grid(self.start, self.stop, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub size: usize,
    pub gamma: f64,
    pub lambda: f64,
    pub g: f64,
    pub sector: SectorChoice,
}

impl ChainSpec {
    pub fn params(&self) -> Result<ChainParams<f64>> {
        ChainParams::new(self.size, self.gamma, self.lambda, self.g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisChoice {
    Preset(AxisPreset),
    Angles { theta: f64, phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSpec {
    pub n: usize,
    pub axes: AxisChoice,
}

impl MeasurementSpec {
    /// Measurement set with `n` directions from the configured axes.
    pub fn build(&self, n: usize) -> Result<MeasurementSet<f64>> {
        match self.axes {
            AxisChoice::Preset(p) => MeasurementSet::preset(p, n),
            AxisChoice::Angles { theta, phi } => build_measurements(theta, phi, n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSpec {
    pub t_b: f64,
    pub t_step: f64,
    pub samples: usize,
    pub seed: u64,
    pub sweep: SweepAxis,
    pub values: GridSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub chain: ChainSpec,
    pub time: GridSpec,
    pub measurement: MeasurementSpec,
    pub power: PowerSpec,
    /// γ axis of the phase map.
    pub gamma_grid: GridSpec,
    pub tol: f64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Defaults for every key except the scenario.
    pub fn with_defaults(scenario: Scenario) -> Self {
        Self {
            scenario,
            chain: ChainSpec { size: 1501, gamma: 1.0, lambda: 1.0, g: 0.01, sector: SectorChoice::Ground },
            time: GridSpec { start: 0.0, stop: 5.0, step: 0.05 },
            measurement: MeasurementSpec { n: 2, axes: AxisChoice::Preset(AxisPreset::Equatorial) },
            power: PowerSpec {
                t_b: 10.0,
                t_step: 0.1,
                samples: 200,
                seed: DEFAULT_SEED,
                sweep: SweepAxis::Lambda,
                values: GridSpec { start: -2.0, stop: 2.0, step: 0.05 },
            },
            gamma_grid: GridSpec { start: 0.0, stop: 1.0, step: 0.05 },
            tol: 1e-8,
            output: None,
        }
    }

    pub fn power_config(&self) -> Result<PowerConfig<f64>> {
        let mut cfg = PowerConfig::new(
            self.measurement.n,
            self.power.t_b,
            self.power.t_step,
            self.power.samples,
            self.power.seed,
        )?;
        cfg.tol = self.tol;
        Ok(cfg)
    }

    /// Every parameter as dotted `key = value` pairs, the output path excepted.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out: Vec<(&str, String)> = vec![
            ("scenario", self.scenario.to_string()),
            ("chain.size", self.chain.size.to_string()),
            ("chain.gamma", num(self.chain.gamma)),
            ("chain.lambda", num(self.chain.lambda)),
            ("chain.g", num(self.chain.g)),
            ("chain.sector", self.chain.sector.to_string()),
            ("time.start", num(self.time.start)),
            ("time.stop", num(self.time.stop)),
            ("time.step", num(self.time.step)),
            ("measurement.n", self.measurement.n.to_string()),
        ];
        match self.measurement.axes {
            AxisChoice::Preset(p) => out.push(("measurement.axes", p.to_string())),
            AxisChoice::Angles { theta, phi } => {
                out.push(("measurement.axes", "angles".into()));
                out.push(("measurement.theta", num(theta)));
                out.push(("measurement.phi", num(phi)));
            }
        }
        out.extend([
            ("power.t_b", num(self.power.t_b)),
            ("power.t_step", num(self.power.t_step)),
            ("power.samples", self.power.samples.to_string()),
            ("power.seed", self.power.seed.to_string()),
            ("power.sweep", self.power.sweep.name().to_string()),
            ("power.start", num(self.power.values.start)),
            ("power.stop", num(self.power.values.stop)),
            ("power.step", num(self.power.values.step)),
            ("phase_map.gamma_start", num(self.gamma_grid.start)),
            ("phase_map.gamma_stop", num(self.gamma_grid.stop)),
            ("phase_map.gamma_step", num(self.gamma_grid.step)),
            ("solver.tol", num(self.tol)),
        ]);
        out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Config file text that parses back to `self`.
    pub fn to_config_text(&self) -> String {
        let mut text = String::new();
        let mut section = String::new();
        for (key, value) in self.pairs() {
            let (sec, name) = key.split_once('.').unwrap_or(("", key.as_str()));
            if sec != section {
                text.push_str(&format!("\n[{sec}]\n"));
                section = sec.to_string();
            }
            text.push_str(&format!("{name} = {value}\n"));
        }
        if let Some(path) = &self.output {
            text.push_str(&format!("\n[output]\npath = {}\n", path.display()));
        }
        text.trim_start().to_string()
    }
}

const SECTIONS: [&str; 7] = ["chain", "time", "measurement", "power", "phase_map", "solver", "output"];

/// Shortest decimal that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// `None` for problems not tied to one line, such as a missing key.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

/// One `key = value` with where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    /// `None` for command-line overrides.
    pub line: Option<usize>,
}

/// Splits the text into dotted entries without interpreting values. Lines
/// under an unknown section are skipped after the section is reported.
pub fn tokenize(text: &str) -> (Vec<Entry>, Vec<ConfigError>) {
    let mut entries = Vec::new();
    let mut errors = Vec::new();
    let mut section = Some(String::new());
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            section = match rest.strip_suffix(']').map(str::trim) {
                Some(name) if SECTIONS.contains(&name) => Some(name.to_string()),
                Some(name) => {
                    errors.push(ConfigError { line: Some(line), message: format!("unknown section [{name}]") });
                    None
                }
                None => {
                    errors.push(ConfigError { line: Some(line), message: "unterminated section header".into() });
                    None
                }
            };
            continue;
        }
        let Some(section) = &section else { continue };
        let Some((k, v)) = s.split_once('=') else {
            errors.push(ConfigError { line: Some(line), message: format!("expected 'key = value', got '{s}'") });
            continue;
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            errors.push(ConfigError { line: Some(line), message: "empty key".into() });
            continue;
        }
        let key = if k.contains('.') || section.is_empty() { k.to_string() } else { format!("{section}.{k}") };
        entries.push(Entry { key, value: v.to_string(), line: Some(line) });
    }
    (entries, errors)
}

struct Builder {
    cfg: ExperimentConfig,
    scenario: Option<Scenario>,
    axes: Option<String>,
    theta: Option<f64>,
    phi: Option<f64>,
    lines: HashMap<String, Option<usize>>,
    errors: Vec<ConfigError>,
}

fn parse_value<V: FromStr>(value: &str, what: &str) -> std::result::Result<V, String> {
    value.parse().map_err(|_| format!("expected {what}, got '{value}'"))
}

impl Builder {
    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let c = &mut self.cfg;
        let f = |v: &str| parse_value::<f64>(v, "a number");
        let u = |v: &str| parse_value::<usize>(v, "a non-negative integer");
        match key {
            "scenario" => self.scenario = Some(value.parse()?),
            "chain.size" => c.chain.size = u(value)?,
            "chain.gamma" => c.chain.gamma = f(value)?,
            "chain.lambda" => c.chain.lambda = f(value)?,
            "chain.g" => c.chain.g = f(value)?,
            "chain.sector" => c.chain.sector = value.parse()?,
            "time.start" => c.time.start = f(value)?,
            "time.stop" => c.time.stop = f(value)?,
            "time.step" => c.time.step = f(value)?,
            "measurement.n" => c.measurement.n = u(value)?,
            "measurement.axes" => {
                if value != "angles" {
                    value.parse::<AxisPreset>()?;
                }
                self.axes = Some(value.to_string());
            }
            "measurement.theta" => self.theta = Some(f(value)?),
            "measurement.phi" => self.phi = Some(f(value)?),
            "power.t_b" => c.power.t_b = f(value)?,
            "power.t_step" => c.power.t_step = f(value)?,
            "power.samples" => c.power.samples = u(value)?,
            "power.seed" => c.power.seed = parse_value(value, "an unsigned 64-bit integer")?,
            "power.sweep" => {
                c.power.sweep = match value {
                    "lambda" => SweepAxis::Lambda,
                    "gamma" => SweepAxis::Gamma,
                    _ => return Err(format!("unknown sweep axis '{value}' (expected lambda or gamma)")),
                }
            }
            "power.start" => c.power.values.start = f(value)?,
            "power.stop" => c.power.values.stop = f(value)?,
            "power.step" => c.power.values.step = f(value)?,
            "phase_map.gamma_start" => c.gamma_grid.start = f(value)?,
            "phase_map.gamma_stop" => c.gamma_grid.stop = f(value)?,
            "phase_map.gamma_step" => c.gamma_grid.step = f(value)?,
            "solver.tol" => c.tol = f(value)?,
            "output.path" => c.output = Some(PathBuf::from(value)),
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    fn fail(&mut self, key: &str, message: String) {
        let line = self.lines.get(key).copied().flatten();
        self.errors.push(ConfigError { line, message });
    }

    fn check_grid(&mut self, grid: GridSpec, step_key: &str, what: &str) {
        if let Err(e) = grid.points() {
            self.fail(step_key, format!("{what}: {e}"));
        }
    }

    fn validate(&mut self) {
        let c = self.cfg.clone();
        if c.chain.size < 3 || c.chain.size % 2 == 0 {
            self.fail("chain.size", format!("chain.size must be odd and at least 3 (L = 2M + 1), got {}", c.chain.size));
        }
        if !(0.0..=1.0).contains(&c.chain.gamma) {
            self.fail("chain.gamma", format!("chain.gamma must lie in [0, 1], got {}", c.chain.gamma));
        }
        if !c.chain.lambda.is_finite() {
            self.fail("chain.lambda", "chain.lambda must be finite".into());
        }
        if !(c.chain.g >= 0.0 && c.chain.g.is_finite()) {
            self.fail("chain.g", format!("chain.g must be finite and non-negative, got {}", c.chain.g));
        }
        if c.time.start < 0.0 {
            self.fail("time.start", format!("time.start must be non-negative, got {}", c.time.start));
        }
        self.check_grid(c.time, "time.step", "time grid");
        if c.measurement.n != 2 && c.measurement.n != 3 {
            self.fail("measurement.n", format!("measurement.n must be 2 or 3, got {}", c.measurement.n));
        }
        if !(c.power.t_b > 0.0 && c.power.t_b.is_finite()) {
            self.fail("power.t_b", format!("power.t_b must be positive, got {}", c.power.t_b));
        }
        if !(c.power.t_step > 0.0 && c.power.t_step.is_finite()) {
            self.fail("power.t_step", format!("power.t_step must be positive, got {}", c.power.t_step));
        }
        if c.power.samples == 0 {
            self.fail("power.samples", "power.samples must be at least 1".into());
        }
        self.check_grid(c.power.values, "power.step", "power sweep grid");
        if c.power.sweep == SweepAxis::Gamma && (c.power.values.start < 0.0 || c.power.values.stop > 1.0) {
            self.fail("power.start", "a gamma sweep must stay within [0, 1]".into());
        }
        self.check_grid(c.gamma_grid, "phase_map.gamma_step", "phase-map gamma grid");
        if c.gamma_grid.start < 0.0 || c.gamma_grid.stop > 1.0 {
            self.fail("phase_map.gamma_start", "phase-map gamma grid must stay within [0, 1]".into());
        }
        if !(c.tol >= MIN_TOLERANCE && c.tol.is_finite()) {
            self.fail("solver.tol", format!("solver.tol must be at least {MIN_TOLERANCE:e}, got {}", c.tol));
        }
        if self.scenario == Some(Scenario::OracleAudit) && c.chain.size > MAX_ORACLE_SIZE {
            self.fail("chain.size", format!("oracle-audit needs chain.size <= {MAX_ORACLE_SIZE}, got {}", c.chain.size));
        }
    }

    fn resolve_axes(&mut self) {
        match self.axes.as_deref() {
            Some("angles") => match (self.theta, self.phi) {
                (Some(theta), Some(phi)) => self.cfg.measurement.axes = AxisChoice::Angles { theta, phi },
                (t, p) => {
                    for (missing, key) in [(t.is_none(), "measurement.theta"), (p.is_none(), "measurement.phi")] {
                        if missing {
                            let message = format!("missing required key '{key}' for measurement.axes = angles");
                            let line = self.lines.get("measurement.axes").copied().flatten();
                            self.errors.push(ConfigError { line, message });
                        }
                    }
                }
            },
            Some(preset) => {
                self.cfg.measurement.axes = AxisChoice::Preset(preset.parse().unwrap_or_default());
                if self.theta.is_some() || self.phi.is_some() {
                    self.fail("measurement.axes", "measurement.theta/phi need measurement.axes = angles".into());
                }
            }
            None if self.theta.is_some() || self.phi.is_some() => {
                self.fail("measurement.theta", "measurement.theta/phi need measurement.axes = angles".into());
            }
            None => {}
        }
    }
}

/// Builds a validated config. A key may be set once per file; command-line
/// entries (no line number) override anything before them.
pub fn build_config(
    entries: &[Entry],
    default_scenario: Option<Scenario>,
) -> std::result::Result<ExperimentConfig, ConfigErrors> {
    build_with(entries, default_scenario, Vec::new())
}

fn build_with(
    entries: &[Entry],
    default_scenario: Option<Scenario>,
    errors: Vec<ConfigError>,
) -> std::result::Result<ExperimentConfig, ConfigErrors> {
    let mut b = Builder {
        cfg: ExperimentConfig::with_defaults(Scenario::Factor),
        scenario: default_scenario,
        axes: None,
        theta: None,
        phi: None,
        lines: HashMap::new(),
        errors,
    };
    for e in entries {
        if let (Some(Some(first)), Some(_)) = (b.lines.get(&e.key), e.line) {
            b.errors.push(ConfigError {
                line: e.line,
                message: format!("duplicate key '{}' (first set on line {first})", e.key),
            });
            continue;
        }
        match b.set(&e.key, &e.value) {
            Ok(()) => {
                b.lines.insert(e.key.clone(), e.line);
            }
            Err(message) => b.errors.push(ConfigError { line: e.line, message: format!("{}: {message}", e.key) }),
        }
    }
    match b.scenario {
        Some(s) => b.cfg.scenario = s,
        None => b.errors.push(ConfigError { line: None, message: "missing required key 'scenario'".into() }),
    }
    b.resolve_axes();
    b.validate();
    if b.errors.is_empty() {
        Ok(b.cfg)
    } else {
        b.errors.sort_by_key(|e| e.line.unwrap_or(usize::MAX));
        Err(ConfigErrors(b.errors))
    }
}

pub fn parse_config(text: &str) -> std::result::Result<ExperimentConfig, ConfigErrors> {
    parse_with_overrides(text, &[])
}

/// Parses `text`, then applies `overrides` on top of it.
pub fn parse_with_overrides(
    text: &str,
    overrides: &[Entry],
) -> std::result::Result<ExperimentConfig, ConfigErrors> {
    let (mut entries, errors) = tokenize(text);
    entries.extend_from_slice(overrides);
    build_with(&entries, None, errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_factor_file() {
        let cfg = parse_config("scenario = factor\n[chain]\nsize = 5\nlambda = 0.5\n").unwrap();
        assert_eq!(cfg.scenario, Scenario::Factor);
        assert_eq!(cfg.chain.size, 5);
        assert_eq!(cfg.chain.lambda, 0.5);
        assert_eq!(cfg.chain.gamma, 1.0);
    }

    #[test]
    fn collects_every_error_with_lines() {
        let text = "scenario = weight\n[chain]\nsize = 4\ngamma = two\nbogus = 1\n[nowhere]\n";
        let err = parse_config(text).unwrap_err();
        let lines: Vec<_> = err.0.iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![Some(3), Some(4), Some(5), Some(6)], "{err}");
        assert!(err.0[0].message.contains("odd"));
    }

    #[test]
    fn missing_scenario_and_angles() {
        let err = parse_config("[measurement]\naxes = angles\ntheta = 0.1\n").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("'scenario'"), "{text}");
        assert!(text.contains("measurement.phi"), "{text}");
    }

    #[test]
    fn dotted_keys_match_sections() {
        let a = parse_config("scenario = power\npower.seed = 7\nchain.lambda = -1\n").unwrap();
        let b = parse_config("scenario = power\n[power]\nseed = 7\n[chain]\nlambda = -1\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_key_is_reported() {
        let err = parse_config("scenario = factor\nchain.g = 0.1\n[chain]\ng = 0.2\n").unwrap_err();
        assert_eq!(err.0[0].line, Some(4));
    }
}
