// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Operations on one variable block. A block is either a 1×1 real scalar,
//! stored in the top-left entry of a zero-padded [`Mat2`], or a 2×2
//! Hermitian matrix.

use num_complex::Complex;

use crate::mat2::Mat2;
use crate::scalar::{lit, Scalar};

pub(crate) fn identity<T: Scalar>(dim: usize) -> Mat2<T> {
    if dim == 1 {
        Mat2::diag(T::one(), T::zero())
    } else {
        Mat2::identity()
    }
}

/// Inverse of a positive definite block.
pub(crate) fn inverse<T: Scalar>(dim: usize, m: &Mat2<T>) -> Option<Mat2<T>> {
    if dim == 1 {
        let x = m.m[0][0].re;
        return (x > T::zero()).then(|| Mat2::diag(T::one() / x, T::zero()));
    }
    let det = m.det().re;
    if !(det > T::zero()) {
        return None;
    }
    let inv = T::one() / det;
    let a = &m.m;
    Some(Mat2::new(a[1][1] * inv, -a[0][1] * inv, -a[1][0] * inv, a[0][0] * inv))
}

/// Largest `α` with `X + αD ⪰ 0`, infinite when `D` never leaves the cone.
///
/// For 2×2 blocks this is `−1/λ_min(L⁻¹ D L⁻ᴴ)` with `X = LLᴴ`.
pub(crate) fn max_step<T: Scalar>(dim: usize, x: &Mat2<T>, d: &Mat2<T>) -> T {
    if dim == 1 {
        let (xv, dv) = (x.m[0][0].re, d.m[0][0].re);
        return if dv < T::zero() { -xv / dv } else { T::infinity() };
    }
    let l11 = x.m[0][0].re.max(T::min_positive_value()).sqrt();
    let l21 = x.m[1][0] / l11;
    let l22 = (x.m[1][1].re - l21.norm_sqr()).max(T::min_positive_value()).sqrt();
    // E = L⁻¹ D L⁻ᴴ with L = [[l11, 0], [l21, l22]]
    let e11 = d.m[0][0].re / (l11 * l11);
    let u = d.m[1][0] - l21 * d.m[0][0].re / l11;
    let e21 = u / (l11 * l22);
    let w = d.m[1][1].re - (l21.conj() * d.m[1][0]).re * lit::<T>(2.0) / l11
        + l21.norm_sqr() * d.m[0][0].re / (l11 * l11);
    let e22 = w / (l22 * l22);
    let e = Mat2::new(
        Complex::new(e11, T::zero()),
        e21.conj(),
        e21,
        Complex::new(e22, T::zero()),
    );
    let lo = e.min_eigenvalue();
    if lo < T::zero() {
        -T::one() / lo
    } else {
        T::infinity()
    }
}

/// `½(A + Aᴴ)`, with the padding of 1×1 blocks kept at zero.
pub(crate) fn sym<T: Scalar>(dim: usize, a: &Mat2<T>) -> Mat2<T> {
    let mut h = a.hermitian_part();
    if dim == 1 {
        let z = Complex::new(T::zero(), T::zero());
        h.m[0][1] = z;
        h.m[1][0] = z;
        h.m[1][1] = z;
    }
    h
}

/// Real coordinates `⟨P/√2, A⟩` of a Hermitian matrix in the Pauli basis `{I, X, Y, Z}`.
pub fn pauli_coordinates<T: Scalar>(a: &Mat2<T>) -> [T; 4] {
    let (tr, r) = a.bloch_components();
    let s = T::FRAC_1_SQRT_2();
    [tr * s, r[0] * s, r[1] * s, r[2] * s]
}

/// Inverse of [`pauli_coordinates`].
pub fn from_pauli_coordinates<T: Scalar>(v: [T; 4]) -> Mat2<T> {
    let s = T::FRAC_1_SQRT_2();
    Mat2::paulis()
        .iter()
        .zip(v)
        .fold(Mat2::zero(), |acc, (p, c)| acc + p.scale(c * s))
}

/// The orthonormal Hermitian basis `P/√2`.
pub fn pauli_basis<T: Scalar>() -> [Mat2<T>; 4] {
    Mat2::paulis().map(|p| p.scale(T::FRAC_1_SQRT_2()))
}
