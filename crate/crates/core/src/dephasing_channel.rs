// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Qubit states, the pure-dephasing channel and projective measurement.

use num_complex::Complex;

use crate::error::{invalid_input, Error, Result};
use crate::mat2::Mat2;
use crate::scalar::{lit, Scalar};

/// Tolerance on `|F| ≤ 1` before a factor is rejected as non-physical.
pub const FACTOR_SLACK: f64 = 1e-9;

/// Probabilities below this are treated as an impossible outcome.
pub const ZERO_PROBABILITY: f64 = 1e-14;

/// Density matrix of the central qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState<T> {
    rho: Mat2<T>,
}

impl<T: Scalar> QubitState<T> {
    /// Checks Hermiticity, unit trace and positivity at the scalar's invariant tolerance.
    pub fn new(rho: Mat2<T>) -> Result<Self> {
        let tol = T::invariant_tolerance();
        if rho.hermiticity_defect() > tol {
            return Err(invalid_input("density matrix is not Hermitian"));
        }
        let tr = rho.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(invalid_input(format!("density matrix trace {} != 1", tr.re)));
        }
        if rho.min_eigenvalue() < -tol {
            return Err(invalid_input("density matrix has a negative eigenvalue"));
        }
        Ok(Self { rho })
    }

    pub fn maximally_mixed() -> Self {
        Self { rho: Mat2::identity().scale(lit(0.5)) }
    }

    /// State with Bloch vector `r`, `|r| ≤ 1`.
    pub fn from_bloch(r: [T; 3]) -> Result<Self> {
        let len2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        if len2 > T::one() + T::invariant_tolerance() {
            return Err(invalid_input("Bloch vector longer than one"));
        }
        Ok(Self { rho: Mat2::from_bloch(r) })
    }

    pub fn pure(v: [Complex<T>; 2]) -> Result<Self> {
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n == T::zero() {
            return Err(invalid_input("zero state vector"));
        }
        Ok(Self { rho: Mat2::outer([v[0] / n, v[1] / n]) })
    }

    pub fn matrix(&self) -> &Mat2<T> {
        &self.rho
    }

    pub fn bloch(&self) -> [T; 3] {
        self.rho.bloch_components().1
    }
}

/// Which of the two outcomes of a binary measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Outcome::Plus => T::one(),
            Outcome::Minus => -T::one(),
        }
    }
}

/// Rank-one projector for outcome `outcome` of measurement direction `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projector<T> {
    pub matrix: Mat2<T>,
    pub direction: usize,
    pub outcome: Outcome,
}

impl<T: Scalar> Projector<T> {
    /// `|v⟩⟨v|` for the normalized `v`.
    pub fn from_vector(v: [Complex<T>; 2], direction: usize, outcome: Outcome) -> Result<Self> {
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n == T::zero() {
            return Err(invalid_input("zero projector vector"));
        }
        Ok(Self { matrix: Mat2::outer([v[0] / n, v[1] / n]), direction, outcome })
    }

    /// `½(I + s·n̂·σ)` for a unit axis `n̂` and outcome sign `s`.
    pub fn from_axis(axis: [T; 3], direction: usize, outcome: Outcome) -> Self {
        let s = outcome.sign::<T>();
        Self { matrix: Mat2::from_bloch([s * axis[0], s * axis[1], s * axis[2]]), direction, outcome }
    }

    /// Bloch axis of the `+` outcome this projector belongs to.
    pub fn axis(&self) -> [T; 3] {
        let r = self.matrix.bloch_components().1;
        let s = self.outcome.sign::<T>();
        [s * r[0], s * r[1], s * r[2]]
    }

    /// Idempotence defect `‖P² − P‖`.
    pub fn idempotence_defect(&self) -> T {
        (self.matrix * self.matrix - self.matrix).frobenius_norm()
    }
}

/// Coherences pick up `F*` above and `F` below the diagonal; populations are untouched.
pub fn apply_dephasing<T: Scalar>(rho0: &QubitState<T>, f: Complex<T>) -> Result<QubitState<T>> {
    let modulus = f.norm();
    if !(modulus <= T::one() + lit(FACTOR_SLACK)) {
        return Err(Error::NonPhysicalFactor(modulus.to_f64().unwrap_or(f64::NAN)));
    }
    let mut rho = rho0.rho;
    rho.m[0][1] = rho.m[0][1] * f.conj();
    rho.m[1][0] = rho.m[1][0] * f;
    Ok(QubitState { rho })
}

/// Result of a projective measurement with a nonzero-probability outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collapse<T> {
    pub probability: T,
    pub state: QubitState<T>,
}

/// `Tr[Pρ]` and `PρP / Tr[Pρ]`; `None` when the outcome has zero probability.
pub fn measure<T: Scalar>(rho: &QubitState<T>, p: &Projector<T>) -> Option<Collapse<T>> {
    let probability = (p.matrix * rho.rho).trace().re;
    if probability < lit(ZERO_PROBABILITY) {
        return None;
    }
    let post = (p.matrix * rho.rho * p.matrix).scale(T::one() / probability);
    Some(Collapse { probability, state: QubitState { rho: post.hermitian_part() } })
}
