// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Measurement sets built from rotation angles, and the temporal-steering
//! parameters `S₂`, `S₃`.
//!
//! Direction 1 is `U_y(φ) U_x(θ) |1⟩`, direction 2 the same at `θ + π/2`,
//! direction 3 is `U_y(φ) |+⟩`. With `U_x(θ) = e^{iθσₓ/2}` and
//! `U_y(φ) = e^{iφσ_y/2}` the three Bloch axes are
//!
//! ```text
//! n₁ = (−cos θ sin φ,  sin θ,  cos θ cos φ)
//! n₂ = ( sin θ sin φ,  cos θ, −sin θ cos φ)
//! n₃ = ( cos φ,        0,      sin φ)
//! ```
//!
//! and are mutually orthogonal for every `(θ, φ)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::dephasing_channel::{apply_dephasing, measure, Outcome, Projector, QubitState};
use crate::error::{invalid_input, Result};
use crate::mat2::{half_angle_rotation, Mat2};
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet<T> {
    pub theta: T,
    pub phi: T,
    pub n: usize,
    /// `2n` projectors ordered by direction, `+` before `−`.
    pub projectors: Vec<Projector<T>>,
}

/// Named axis sets for weight computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AxisPreset {
    /// `{σₓ, σ_y}` and `{σₓ, σ_y, σ_z}`, i.e. `θ = 0, φ = π/2`.
    #[default]
    Equatorial,
    /// `{σ_z, σₓ}` and `{σ_z, σₓ, σ_y}`.
    Standard,
}

impl fmt::Display for AxisPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxisPreset::Equatorial => "equatorial",
            AxisPreset::Standard => "standard",
        })
    }
}

impl FromStr for AxisPreset {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "equatorial" | "default-axes" => Ok(AxisPreset::Equatorial),
            "standard" => Ok(AxisPreset::Standard),
            other => Err(format!("unknown axis preset '{other}' (expected equatorial or standard)")),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(invalid_input(format!("measurement count must be 2 or 3, got {n}")))
    }
}

fn ket_one<T: Scalar>() -> [Complex<T>; 2] {
    [Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())]
}

fn ket_plus<T: Scalar>() -> [Complex<T>; 2] {
    let h = T::FRAC_1_SQRT_2();
    [Complex::new(h, T::zero()), Complex::new(h, T::zero())]
}

/// Projector pair on direction `i` from rotated basis vectors.
pub fn build_measurements<T: Scalar>(theta: T, phi: T, n: usize) -> Result<MeasurementSet<T>> {
    check_n(n)?;
    let uy = half_angle_rotation(phi, &Mat2::pauli_y());
    let rotated = |angle: T| (uy * half_angle_rotation(angle, &Mat2::pauli_x())).apply(ket_one());
    let half_pi = T::FRAC_PI_2();
    let mut projectors = Vec::with_capacity(2 * n);
    for (i, base) in [theta, theta + half_pi].into_iter().enumerate() {
        projectors.push(Projector::from_vector(rotated(base), i, Outcome::Plus)?);
        projectors.push(Projector::from_vector(rotated(base + T::PI()), i, Outcome::Minus)?);
    }
    if n == 3 {
        let plus = uy.apply(ket_plus());
        // e^{iπσ_y/2} = iσ_y sends |+⟩ to |−⟩
        let minus = (uy * half_angle_rotation(T::PI(), &Mat2::pauli_y())).apply(ket_plus());
        projectors.push(Projector::from_vector(plus, 2, Outcome::Plus)?);
        projectors.push(Projector::from_vector(minus, 2, Outcome::Minus)?);
    }
    Ok(MeasurementSet { theta, phi, n, projectors })
}

impl<T: Scalar> MeasurementSet<T> {
    /// Projective measurements along explicit unit axes; `theta`/`phi` are set to NaN.
    pub fn from_axes(axes: &[[T; 3]]) -> Result<Self> {
        check_n(axes.len())?;
        let mut projectors = Vec::with_capacity(2 * axes.len());
        for (i, a) in axes.iter().enumerate() {
            let len = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            if !len.is_finite() || (len - T::one()).abs() > lit(1e-6) {
                return Err(invalid_input(format!("axis {i} is not a unit vector")));
            }
            let unit = [a[0] / len, a[1] / len, a[2] / len];
            projectors.push(Projector::from_axis(unit, i, Outcome::Plus));
            projectors.push(Projector::from_axis(unit, i, Outcome::Minus));
        }
        Ok(Self { theta: T::nan(), phi: T::nan(), n: axes.len(), projectors })
    }

    pub fn preset(preset: AxisPreset, n: usize) -> Result<Self> {
        check_n(n)?;
        let (o, l) = (T::zero(), T::one());
        let (x, y, z) = ([l, o, o], [o, l, o], [o, o, l]);
        let axes = match preset {
            AxisPreset::Equatorial => [x, y, z],
            AxisPreset::Standard => [z, x, y],
        };
        Self::from_axes(&axes[..n])
    }

    /// Bloch axis of the `+` outcome of each direction.
    pub fn axes(&self) -> Vec<[T; 3]> {
        self.projectors.chunks(2).map(|pair| pair[0].axis()).collect()
    }

    pub fn projector(&self, direction: usize, outcome: Outcome) -> &Projector<T> {
        &self.projectors[2 * direction + outcome.index()]
    }

    /// Conjugates every projector by `e^{iχσ_z/2}`.
    pub fn rotate_z(&self, chi: T) -> Self {
        let u = half_angle_rotation(chi, &Mat2::pauli_z());
        let ud = u.adjoint();
        let projectors = self
            .projectors
            .iter()
            .map(|p| Projector { matrix: u * p.matrix * ud, ..*p })
            .collect();
        Self { projectors, ..self.clone() }
    }

    /// Keeps the first `n` directions.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        check_n(n)?;
        if n > self.n {
            return Err(invalid_input(format!("cannot take {n} of {} directions", self.n)));
        }
        Ok(Self { n, projectors: self.projectors[..2 * n].to_vec(), ..self.clone() })
    }
}

/// `S_N = Σ_i Σ_a P(A_i = a) ⟨B_i⟩²_{A_i=a}` with Bob measuring the same axis
/// after the dephasing channel.
pub fn ts_parameter_numeric<T: Scalar>(
    f: Complex<T>,
    meas: &MeasurementSet<T>,
    rho0: &QubitState<T>,
) -> Result<T> {
    let mut s = T::zero();
    for pair in meas.projectors.chunks(2) {
        let observable = pair[0].matrix - pair[1].matrix;
        for p in pair {
            let Some(c) = measure(rho0, p) else { continue };
            let evolved = apply_dephasing(&c.state, f)?;
            let b = (observable * *evolved.matrix()).trace().re;
            s += c.probability * b * b;
        }
    }
    Ok(s)
}

fn e1_e2<T: Scalar>(theta: T, phi: T, re_f: T) -> (T, T) {
    let c2p = phi.cos().powi(2);
    let keep = c2p * (T::one() - re_f);
    let e1 = theta.cos().powi(2) * keep + re_f;
    let e2 = theta.sin().powi(2) * keep + re_f;
    (e1 * e1, e2 * e2)
}

pub fn s2_analytic<T: Scalar>(theta: T, phi: T, re_f: T) -> T {
    let (e1, e2) = e1_e2(theta, phi, re_f);
    e1 + e2
}

pub fn s3_analytic<T: Scalar>(theta: T, phi: T, re_f: T) -> T {
    let e3 = phi.cos().powi(2) * re_f + phi.sin().powi(2);
    s2_analytic(theta, phi, re_f) + e3 * e3
}

/// `1 + (n − 1) Re² F`.
pub fn s_max<T: Scalar>(n: usize, re_f: T) -> Result<T> {
    check_n(n)?;
    Ok(T::one() + crate::scalar::from_usize::<T>(n - 1) * re_f * re_f)
}
