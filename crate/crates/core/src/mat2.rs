// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense 2×2 complex matrices, the only operator size a qubit needs.
//!
//! Basis convention: index 0 is |1⟩ (σ_z = +1), index 1 is |0⟩ (σ_z = −1).

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

#[inline]
fn c<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, cc: Complex<T>, d: Complex<T>) -> Self {
        Self { m: [[a, b], [cc, d]] }
    }

    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        let o = c(T::one(), T::zero());
        let z = c(T::zero(), T::zero());
        Self::new(o, z, z, o)
    }

    pub fn pauli_x() -> Self {
        let o = c(T::one(), T::zero());
        let z = c(T::zero(), T::zero());
        Self::new(z, o, o, z)
    }

    pub fn pauli_y() -> Self {
        let z = c(T::zero(), T::zero());
        Self::new(z, c(T::zero(), -T::one()), c(T::zero(), T::one()), z)
    }

    pub fn pauli_z() -> Self {
        let o = c(T::one(), T::zero());
        let z = c(T::zero(), T::zero());
        Self::new(o, z, z, -o)
    }

    /// Pauli basis {I, X, Y, Z} in that order.
    pub fn paulis() -> [Self; 4] {
        [Self::identity(), Self::pauli_x(), Self::pauli_y(), Self::pauli_z()]
    }

    /// Real diagonal matrix.
    pub fn diag(a: T, d: T) -> Self {
        let z = c(T::zero(), T::zero());
        Self::new(c(a, T::zero()), z, z, c(d, T::zero()))
    }

    /// `½(I + r·σ)` for a Bloch vector `r`.
    pub fn from_bloch(r: [T; 3]) -> Self {
        let h = lit::<T>(0.5);
        Self::new(
            c(h * (T::one() + r[2]), T::zero()),
            c(h * r[0], -h * r[1]),
            c(h * r[0], h * r[1]),
            c(h * (T::one() - r[2]), T::zero()),
        )
    }

    /// Outer product |v⟩⟨v|.
    pub fn outer(v: [Complex<T>; 2]) -> Self {
        Self::new(
            v[0] * v[0].conj(),
            v[0] * v[1].conj(),
            v[1] * v[0].conj(),
            v[1] * v[1].conj(),
        )
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for e in row.iter_mut() {
                *e = *e * s;
            }
        }
        out
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for e in row.iter_mut() {
                *e = *e * s;
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Re Tr(self · other), the real Frobenius pairing for Hermitian arguments.
    pub fn inner(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                acc += (self.m[i][j] * other.m[j][i]).re;
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> T {
        self.m
            .iter()
            .flat_map(|r| r.iter())
            .map(|e| e.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// ‖A − A†‖_F.
    pub fn hermiticity_defect(&self) -> T {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> [T; 2] {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = (self.m[0][1] + self.m[1][0].conj()) * lit::<T>(0.5);
        let mean = (a + d) * lit::<T>(0.5);
        let half_diff = (a - d) * lit::<T>(0.5);
        let r = (half_diff * half_diff + b.norm_sqr()).sqrt();
        [mean - r, mean + r]
    }

    pub fn min_eigenvalue(&self) -> T {
        self.hermitian_eigenvalues()[0]
    }

    /// Bloch coordinates (x, y, z) and trace of a Hermitian matrix:
    /// `A = ½(tr·I + x σ_x + y σ_y + z σ_z)`.
    pub fn bloch_components(&self) -> (T, [T; 3]) {
        let tr = self.trace().re;
        let x = self.m[0][1].re + self.m[1][0].re;
        let y = self.m[1][0].im - self.m[0][1].im;
        let z = self.m[0][0].re - self.m[1][1].re;
        (tr, [x, y, z])
    }

    /// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
    pub fn psd_projection(&self) -> Self {
        let (tr, r) = self.bloch_components();
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        let h = lit::<T>(0.5);
        let lo = h * (tr - len);
        let hi = h * (tr + len);
        if lo >= T::zero() {
            return self.hermitian_part();
        }
        if hi <= T::zero() {
            return Self::zero();
        }
        // keep only the upper eigenvector: hi · ½(I + r̂·σ)
        let unit = [r[0] / len, r[1] / len, r[2] / len];
        Self::from_bloch(unit).scale(hi)
    }

    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(lit::<T>(0.5))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        m
    }

    /// Casts into another precision.
    pub fn cast<U: Scalar>(&self) -> Mat2<U> {
        let cv = |z: Complex<T>| {
            Complex::new(
                U::from_f64(z.re.to_f64().unwrap()).unwrap(),
                U::from_f64(z.im.to_f64().unwrap()).unwrap(),
            )
        };
        Mat2::new(cv(self.m[0][0]), cv(self.m[0][1]), cv(self.m[1][0]), cv(self.m[1][1]))
    }
}

impl<T: Scalar> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = self.m[i][j] + o.m[i][j];
            }
        }
        out
    }
}

impl<T: Scalar> AddAssign for Mat2<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = self.m[i][j] - o.m[i][j];
            }
        }
        out
    }
}

impl<T: Scalar> Neg for Mat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// `exp(i·angle/2·σ)` for a Pauli matrix `σ` (σ² = I).
pub fn half_angle_rotation<T: Scalar>(angle: T, pauli: &Mat2<T>) -> Mat2<T> {
    let h = angle * lit::<T>(0.5);
    Mat2::identity().scale(h.cos()) + pauli.scale_complex(Complex::new(T::zero(), h.sin()))
}
