// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Cholesky factorization of the Schur complement.
//!
//! Hand-rolled over [`Scalar`]: the system is at most a few dozen rows, and
//! nalgebra's factorizations need a `RealField` bound whose methods clash
//! with `num_traits::Float` on a generic `T`.

use crate::scalar::{lit, Scalar};

/// Lower-triangular factor of a symmetric positive definite matrix, row major.
pub(crate) struct Cholesky<T> {
    n: usize,
    l: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// `None` when a pivot is not positive.
    pub(crate) fn factor(n: usize, a: &[T]) -> Option<Self> {
        let mut l = vec![T::zero(); n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > T::zero()) {
                return None;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Some(Self { n, l })
    }

    /// Retries with a growing diagonal shift when the matrix is numerically singular.
    pub(crate) fn factor_shifted(n: usize, mut a: Vec<T>) -> Option<Self> {
        if let Some(c) = Self::factor(n, &a) {
            return Some(c);
        }
        let scale = (0..n).map(|i| a[i * n + i].abs()).fold(T::zero(), |x, y| x.max(y));
        let mut shift = scale * T::epsilon();
        let mut applied = T::zero();
        for _ in 0..8 {
            for i in 0..n {
                a[i * n + i] += shift - applied;
            }
            applied = shift;
            if let Some(c) = Self::factor(n, &a) {
                return Some(c);
            }
            shift = shift * lit(100.0);
        }
        None
    }

    pub(crate) fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let v = self.l[i * n + k] * y[k];
                y[i] -= v;
            }
            y[i] /= self.l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let v = self.l[k * n + i] * y[k];
                y[i] -= v;
            }
            y[i] /= self.l[i * n + i];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_spd_system() {
        let a = [4.0, 2.0, 0.6, 2.0, 5.0, 1.0, 0.6, 1.0, 3.0];
        let b = [1.0, -2.0, 0.5];
        let x = Cholesky::factor(3, &a).unwrap().solve(&b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i * 3 + j] * x[j]).sum::<f64>() - b[i];
            assert!(r.abs() < 1e-14);
        }
        assert!(Cholesky::factor(2, &[1.0, 2.0, 2.0, 1.0]).is_none());
    }
}
