// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Floating-point abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the physics and the solver are written against: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Default duality-gap tolerance for the SDP solver at this precision.
    fn default_gap_tolerance() -> Self;

    /// Tolerance used by state and projector invariant checks.
    fn invariant_tolerance() -> Self;
}

impl Scalar for f64 {
    fn default_gap_tolerance() -> Self {
        1e-8
    }

    fn invariant_tolerance() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn default_gap_tolerance() -> Self {
        2e-3
    }

    fn invariant_tolerance() -> Self {
        1e-5
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}
