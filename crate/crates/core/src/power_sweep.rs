// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Steering-weight power: the time-averaged weight `W(t)` maximized over
//! random orthogonal measurement sets, plus the λ/γ sweeps and (γ, t) maps
//! used to locate the critical field.
//!
//! Measurement sets are drawn as `(θ, φ)` uniform on `[0, π)²` from a
//! ChaCha8 stream, so a larger sample count extends a smaller one with the
//! same seed. The initial qubit state is maximally mixed.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assemblage_sdp::{build_assemblage, ts_weight, SdpStatus};
use crate::chain_spectrum::{check_time_grid, decoherence_trace, uniform_grid, ChainParams};
use crate::dephasing_channel::QubitState;
use crate::error::{invalid_input, Error, Result};
use crate::scalar::{lit, Scalar};
use crate::steering_metrics::{build_measurements, MeasurementSet};

/// Weight below which the steering counts as dead.
pub const SUDDEN_DEATH_THRESHOLD: f64 = 1e-4;

pub const DEFAULT_SEED: u64 = 20_260_101;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig<T> {
    /// Number of measurement directions, 2 or 3.
    pub n: usize,
    /// Averaging horizon `t_b`.
    pub t_b: T,
    pub t_step: T,
    pub samples: usize,
    pub seed: u64,
    /// Duality-gap tolerance of every weight solve.
    pub tol: T,
    /// Keep each sample's `W(t)` in the result.
    pub keep_traces: bool,
}

impl<T: Scalar> Default for PowerConfig<T> {
    fn default() -> Self {
        Self {
            n: 2,
            t_b: lit(10.0),
            t_step: lit(0.1),
            samples: 200,
            seed: DEFAULT_SEED,
            tol: T::default_gap_tolerance(),
            keep_traces: false,
        }
    }
}

impl<T: Scalar> PowerConfig<T> {
    pub fn new(n: usize, t_b: T, t_step: T, samples: usize, seed: u64) -> Result<Self> {
        let cfg = Self { n, t_b, t_step, samples, seed, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n != 2 && self.n != 3 {
            return Err(invalid_input(format!("measurement count must be 2 or 3, got {}", self.n)));
        }
        if !(self.t_b > T::zero() && self.t_b.is_finite()) {
            return Err(invalid_input(format!("t_b must be positive, got {}", self.t_b)));
        }
        if !(self.t_step > T::zero() && self.t_step.is_finite()) {
            return Err(invalid_input(format!("t_step must be positive, got {}", self.t_step)));
        }
        if self.samples == 0 {
            return Err(invalid_input("samples must be at least 1"));
        }
        if !(self.tol > T::zero()) {
            return Err(invalid_input(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    /// `0, t_step, …, t_b`, endpoints included.
    pub fn time_grid(&self) -> Result<Vec<T>> {
        uniform_grid(T::zero(), self.t_b, self.t_step)
    }

    /// The seeded `(θ, φ)` samples in draw order.
    pub fn angles(&self) -> Vec<(T, T)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let pi = std::f64::consts::PI;
        (0..self.samples)
            .map(|_| {
                let theta = rng.gen::<f64>() * pi;
                let phi = rng.gen::<f64>() * pi;
                (lit(theta), lit(phi))
            })
            .collect()
    }
}

/// Outcome of one measurement set.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult<T> {
    pub theta: T,
    pub phi: T,
    /// Trapezoidal mean of `W(t)`; `None` when a solve failed.
    pub average: Option<T>,
    /// Time of the first failed solve.
    pub failed_at: Option<T>,
    /// Solves that stopped at the iteration limit and report their best bounds.
    pub max_iteration_solves: usize,
    pub trace: Option<Vec<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult<T> {
    pub power: T,
    /// `(θ, φ)` of the first sample reaching `power`.
    pub best_angles: (T, T),
    pub samples: Vec<SampleResult<T>>,
    /// Samples excluded because a solve failed.
    pub failed_samples: usize,
    /// Max-iteration solves across all kept samples.
    pub warnings: usize,
}

/// Trapezoidal mean over the span of `grid`.
pub fn trapezoid_mean<T: Scalar>(grid: &[T], values: &[T]) -> T {
    if grid.len() < 2 {
        return values.first().copied().unwrap_or_else(T::nan);
    }
    let area = grid
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| (v[0] + v[1]) * (t[1] - t[0]) * lit(0.5))
        .sum::<T>();
    area / (grid[grid.len() - 1] - grid[0])
}

fn sample_weights<T: Scalar>(
    factors: &[Complex<T>],
    grid: &[T],
    meas: &MeasurementSet<T>,
    rho0: &QubitState<T>,
    cfg: &PowerConfig<T>,
    theta: T,
    phi: T,
) -> SampleResult<T> {
    let mut weights = Vec::with_capacity(grid.len());
    let mut max_iteration_solves = 0;
    let mut failed_at = None;
    for (&t, &f) in grid.iter().zip(factors) {
        let solved = build_assemblage(f, meas, rho0).and_then(|asm| ts_weight(&asm, cfg.tol));
        match solved {
            Ok(sol) if sol.status == SdpStatus::Optimal => weights.push(sol.weight),
            Ok(sol) if sol.status == SdpStatus::MaxIterations => {
                max_iteration_solves += 1;
                weights.push(sol.weight);
            }
            _ => {
                failed_at = Some(t);
                break;
            }
        }
    }
    let weights: Vec<T> = weights.into_iter().map(|w| w.max(T::zero()).min(T::one())).collect();
    let average = failed_at.is_none().then(|| trapezoid_mean(grid, &weights));
    SampleResult {
        theta,
        phi,
        average,
        failed_at,
        max_iteration_solves,
        trace: cfg.keep_traces.then_some(weights),
    }
}

/// Power of a channel given by its decoherence factors on `grid`.
///
/// The grid must be strictly increasing and span a positive interval.
pub fn power_from_factors<T: Scalar>(
    factors: &[Complex<T>],
    grid: &[T],
    cfg: &PowerConfig<T>,
) -> Result<PowerResult<T>> {
    cfg.validate()?;
    check_time_grid(grid)?;
    if grid.len() < 2 || factors.len() != grid.len() {
        return Err(invalid_input(format!(
            "need at least two grid points and one factor per point, got {} points and {} factors",
            grid.len(),
            factors.len()
        )));
    }
    let rho0 = QubitState::maximally_mixed();
    let angles = cfg.angles();
    let samples: Vec<SampleResult<T>> = angles
        .par_iter()
        .map(|&(theta, phi)| {
            let meas = build_measurements(theta, phi, cfg.n)?;
            Ok(sample_weights(factors, grid, &meas, &rho0, cfg, theta, phi))
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(T, (T, T))> = None;
    let mut failed_samples = 0;
    let mut warnings = 0;
    for s in &samples {
        match s.average {
            Some(avg) => {
                warnings += s.max_iteration_solves;
                if best.map_or(true, |(p, _)| avg > p) {
                    best = Some((avg, (s.theta, s.phi)));
                }
            }
            None => failed_samples += 1,
        }
    }
    let (power, best_angles) = best.ok_or_else(|| {
        Error::Numerical(format!("all {} measurement samples had a failed weight solve", samples.len()))
    })?;
    Ok(PowerResult { power, best_angles, samples, failed_samples, warnings })
}

/// Power of the qubit channel induced by the chain at `params`.
pub fn ts_weight_power<T: Scalar>(params: &ChainParams<T>, cfg: &PowerConfig<T>) -> Result<PowerResult<T>> {
    cfg.validate()?;
    let grid = cfg.time_grid()?;
    let factors: Vec<Complex<T>> = decoherence_trace(params, &grid)?.into_iter().map(|s| s.f).collect();
    power_from_factors(&factors, &grid, cfg)
}

/// Parameter varied by [`power_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Lambda,
    Gamma,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::Gamma => "gamma",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T> {
    pub value: T,
    pub outcome: Result<PowerResult<T>>,
}

fn check_increasing<T: Scalar>(values: &[T], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(invalid_input(format!("{what} grid is empty")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(invalid_input(format!("{what} grid has a non-finite value")));
    }
    if let Some(i) = values.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(invalid_input(format!("{what} grid not strictly increasing at index {}", i + 1)));
    }
    Ok(())
}

/// One power per grid value, all with the same seed. A failing point is
/// recorded and the sweep moves on.
pub fn power_sweep<T: Scalar>(
    params: &ChainParams<T>,
    axis: SweepAxis,
    values: &[T],
    cfg: &PowerConfig<T>,
) -> Result<Vec<SweepPoint<T>>> {
    cfg.validate()?;
    check_increasing(values, axis.name())?;
    Ok(values
        .iter()
        .map(|&value| {
            let point = match axis {
                SweepAxis::Lambda => params.with_lambda(value),
                SweepAxis::Gamma => params.with_gamma(value),
            };
            SweepPoint { value, outcome: point.and_then(|p| ts_weight_power(&p, cfg)) }
        })
        .collect())
}

pub fn lambda_sweep<T: Scalar>(
    params: &ChainParams<T>,
    lambdas: &[T],
    cfg: &PowerConfig<T>,
) -> Result<Vec<SweepPoint<T>>> {
    power_sweep(params, SweepAxis::Lambda, lambdas, cfg)
}

/// `W(γ, t)` for one measurement set at the field of `params`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMap<T> {
    pub lambda: T,
    pub gammas: Vec<T>,
    pub times: Vec<T>,
    /// Row per γ; NaN where the solve failed.
    pub weights: Vec<Vec<T>>,
    pub statuses: Vec<Vec<SdpStatus>>,
    /// First time with `W < 1e-4` on each row.
    pub sudden_death: Vec<Option<T>>,
}

impl<T: Scalar> PhaseMap<T> {
    pub fn failed_points(&self) -> usize {
        self.statuses
            .iter()
            .flatten()
            .filter(|s| !matches!(s, SdpStatus::Optimal | SdpStatus::MaxIterations))
            .count()
    }
}

/// First grid time whose weight is below [`SUDDEN_DEATH_THRESHOLD`].
pub fn sudden_death_time<T: Scalar>(times: &[T], weights: &[T]) -> Option<T> {
    let thr: T = lit(SUDDEN_DEATH_THRESHOLD);
    times.iter().zip(weights).find(|(_, &w)| w < thr).map(|(&t, _)| t)
}

pub fn gamma_time_map<T: Scalar>(
    params: &ChainParams<T>,
    gammas: &[T],
    times: &[T],
    meas: &MeasurementSet<T>,
    tol: T,
) -> Result<PhaseMap<T>> {
    check_increasing(gammas, "gamma")?;
    check_time_grid(times)?;
    let chains: Vec<ChainParams<T>> = gammas.iter().map(|&g| params.with_gamma(g)).collect::<Result<_>>()?;
    let factors: Vec<Vec<Complex<T>>> = chains
        .iter()
        .map(|p| Ok(decoherence_trace(p, times)?.into_iter().map(|s| s.f).collect()))
        .collect::<Result<_>>()?;
    let rho0 = QubitState::maximally_mixed();
    let cols = times.len();
    let cells: Vec<(T, SdpStatus)> = (0..gammas.len() * cols)
        .into_par_iter()
        .map(|idx| {
            let f = factors[idx / cols][idx % cols];
            match build_assemblage(f, meas, &rho0).and_then(|asm| ts_weight(&asm, tol)) {
                Ok(sol) => match sol.status {
                    SdpStatus::Optimal | SdpStatus::MaxIterations => (sol.weight, sol.status),
                    status => (T::nan(), status),
                },
                Err(_) => (T::nan(), SdpStatus::InfeasibleInput),
            }
        })
        .collect();
    let weights: Vec<Vec<T>> = cells.chunks(cols).map(|row| row.iter().map(|c| c.0).collect()).collect();
    let statuses = cells.chunks(cols).map(|row| row.iter().map(|c| c.1).collect()).collect();
    let sudden_death = weights.iter().map(|row| sudden_death_time(times, row)).collect();
    Ok(PhaseMap { lambda: params.lambda(), gammas: gammas.to_vec(), times: times.to_vec(), weights, statuses, sudden_death })
}
