// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical or numerical parameter violates its invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed input that is not a single parameter (grids, indices, shapes).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested quantity diverges at these parameters.
    #[error("singular parameter: {0}")]
    Singular(String),

    /// A decoherence factor with modulus above one.
    #[error("non-physical decoherence factor with modulus {0}")]
    NonPhysicalFactor(f64),

    /// The brute-force path would exceed its memory budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Every solve of a quantity failed.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub(crate) fn invalid_param(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn invalid_input(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
