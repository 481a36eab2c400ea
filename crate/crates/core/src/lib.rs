// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Temporal steering of a qubit that dephases through a transverse-field XY
//! spin chain.
//!
//! The numerical core is generic over the real scalar type (`f32` or `f64`);
//! the aliases at the bottom of this file fix it to one precision. The
//! brute-force oracle in [`exact_oracle`] works in `f64` only.

pub mod assemblage_sdp;
pub mod chain_spectrum;
pub mod dephasing_channel;
mod double_double;
pub mod error;
pub mod exact_oracle;
pub mod experiment;
pub mod mat2;
pub mod power_sweep;
pub mod scalar;
pub mod sdp;
pub mod steering_metrics;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Artifact version recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type ChainParamsF64 = chain_spectrum::ChainParams<f64>;
pub type ChainParamsF32 = chain_spectrum::ChainParams<f32>;
pub type SpectrumF64 = chain_spectrum::Spectrum<f64>;
pub type SpectrumF32 = chain_spectrum::Spectrum<f32>;
pub type QubitStateF64 = dephasing_channel::QubitState<f64>;
pub type QubitStateF32 = dephasing_channel::QubitState<f32>;
pub type MeasurementSetF64 = steering_metrics::MeasurementSet<f64>;
pub type MeasurementSetF32 = steering_metrics::MeasurementSet<f32>;
pub type AssemblageF64 = assemblage_sdp::Assemblage<f64>;
pub type AssemblageF32 = assemblage_sdp::Assemblage<f32>;
pub type SdpSolutionF64 = assemblage_sdp::SdpSolution<f64>;
pub type SdpSolutionF32 = assemblage_sdp::SdpSolution<f32>;
pub type PowerConfigF64 = power_sweep::PowerConfig<f64>;
pub type PowerConfigF32 = power_sweep::PowerConfig<f32>;
