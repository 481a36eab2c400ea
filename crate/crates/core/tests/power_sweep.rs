// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex;
use proptest::prelude::*;
use tsteer::assemblage_sdp::{build_assemblage, ts_weight};
use tsteer::chain_spectrum::ChainParams;
use tsteer::dephasing_channel::QubitState;
use tsteer::power_sweep::{
    gamma_time_map, lambda_sweep, power_from_factors, power_sweep, ts_weight_power, PowerConfig, SweepAxis,
};
use tsteer::steering_metrics::{build_measurements, AxisPreset, MeasurementSet};

fn cfg(samples: usize, seed: u64) -> PowerConfig<f64> {
    PowerConfig { t_b: 2.0, t_step: 0.5, samples, seed, ..PowerConfig::default() }
}

fn chain(lambda: f64) -> ChainParams<f64> {
    ChainParams::new(51, 1.0, lambda, 0.05).unwrap()
}

#[test]
fn identity_channel_power_is_instantaneous_weight() {
    let c = cfg(6, 3);
    let r = ts_weight_power(&ChainParams::new(51, 0.7, 0.4, 0.0).unwrap(), &c).unwrap();
    let (theta, phi) = r.best_angles;
    let meas = build_measurements(theta, phi, 2).unwrap();
    let asm = build_assemblage(Complex::new(1.0, 0.0), &meas, &QubitState::maximally_mixed()).unwrap();
    let w = ts_weight(&asm, 1e-8).unwrap().weight;
    assert!((r.power - w).abs() < 1e-9, "{} vs {w}", r.power);
}

#[test]
fn power_is_bit_identical_across_runs() {
    let c = PowerConfig { keep_traces: true, ..cfg(5, 11) };
    let a = ts_weight_power(&chain(0.8), &c).unwrap();
    let b = ts_weight_power(&chain(0.8), &c).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.samples.len(), 5);
    assert!(a.samples.iter().all(|s| s.trace.as_ref().map(Vec::len) == Some(5)));
}

#[test]
fn third_direction_does_not_lower_power() {
    let two = ts_weight_power(&chain(1.0), &cfg(5, 2)).unwrap();
    let three = ts_weight_power(&chain(1.0), &PowerConfig { n: 3, ..cfg(5, 2) }).unwrap();
    assert!(three.power >= two.power - 1e-8, "{} < {}", three.power, two.power);
}

#[test]
fn power_is_even_in_lambda() {
    let points = lambda_sweep(&chain(0.0), &[-1.2, -0.6, 0.6, 1.2], &cfg(4, 5)).unwrap();
    let p: Vec<f64> = points.iter().map(|pt| pt.outcome.as_ref().unwrap().power).collect();
    assert!((p[0] - p[3]).abs() < 1e-6, "{p:?}");
    assert!((p[1] - p[2]).abs() < 1e-6, "{p:?}");
}

#[test]
fn single_point_sweep_wraps_power() {
    let c = cfg(3, 9);
    let direct = ts_weight_power(&chain(0.3), &c).unwrap();
    let swept = lambda_sweep(&chain(7.0), &[0.3], &c).unwrap();
    assert_eq!(swept[0].outcome.as_ref().unwrap(), &direct);
}

#[test]
fn sweep_records_bad_points_and_continues() {
    let points = power_sweep(&chain(0.5), SweepAxis::Gamma, &[0.5, 1.5], &cfg(2, 1)).unwrap();
    assert!(points[0].outcome.is_ok());
    assert!(points[1].outcome.is_err());
    assert!(lambda_sweep(&chain(0.5), &[0.5, 0.5], &cfg(2, 1)).is_err());
}

#[test]
fn fully_dephased_after_start_decays_to_trapezoid_endpoint() {
    let grid = [0.0, 1.0, 2.0];
    let f = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)];
    let r = power_from_factors(&f, &grid, &cfg(3, 4)).unwrap();
    let meas = build_measurements(r.best_angles.0, r.best_angles.1, 2).unwrap();
    let asm = build_assemblage(f[0], &meas, &QubitState::maximally_mixed()).unwrap();
    let w0 = ts_weight(&asm, 1e-8).unwrap().weight;
    assert!((r.power - w0 / 4.0).abs() < 1e-8);
}

#[test]
fn phase_map_marks_sudden_death_at_criticality() {
    let params = ChainParams::new(1501, 1.0, 1.0, 0.01).unwrap();
    let meas = MeasurementSet::preset(AxisPreset::Equatorial, 2).unwrap();
    let times: Vec<f64> = (0..=10).map(|i| 0.5 * i as f64).collect();
    let map = gamma_time_map(&params, &[0.5, 1.0], &times, &meas, 1e-8).unwrap();
    assert_eq!(map.weights.len(), 2);
    assert_eq!(map.failed_points(), 0);
    assert!(map.sudden_death.iter().all(Option::is_some), "{:?}", map.sudden_death);
    assert!((map.weights[0][0] - 1.0).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn more_samples_never_lower_power(seed in 0u64..1000, extra in 1usize..4) {
        let small = ts_weight_power(&chain(0.9), &cfg(3, seed)).unwrap();
        let large = ts_weight_power(&chain(0.9), &cfg(3 + extra, seed)).unwrap();
        prop_assert!(large.power >= small.power);
        prop_assert_eq!(&large.samples[..3], &small.samples[..]);
        prop_assert!((0.0..=1.0).contains(&large.power));
    }
}
