// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Double-double scalar used to re-solve SDPs that stall in `f64`.
//!
//! Wraps [`TwoFloat`] so the crate can add the `Sum` impl the [`Scalar`]
//! bound asks for.

use std::fmt;
use std::iter::Sum;
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

use crate::scalar::Scalar;

/// About 106 bits of mantissa.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub(crate) struct Dd(TwoFloat);

macro_rules! binary_ops {
    ($($tr:ident $f:ident $atr:ident $af:ident),*) => {$(
        impl $tr for Dd {
            type Output = Dd;
            #[inline]
            fn $f(self, rhs: Dd) -> Dd {
                Dd(self.0.$f(rhs.0))
            }
        }
        impl $atr for Dd {
            #[inline]
            fn $af(&mut self, rhs: Dd) {
                self.0 = self.0.$f(rhs.0);
            }
        }
    )*};
}

binary_ops!(
    Add add AddAssign add_assign,
    Sub sub SubAssign sub_assign,
    Mul mul MulAssign mul_assign,
    Rem rem RemAssign rem_assign
);

/// Long division with two correction terms. The upstream quotient only
/// carries `f64` accuracy because its reciprocal residual is not fused.
fn quotient(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    if !q1.is_finite() {
        return <TwoFloat as From<f64>>::from(q1);
    }
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    <TwoFloat as From<f64>>::from(q1) + q2 + q3
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        Dd(quotient(self.0, rhs.0))
    }
}

impl DivAssign for Dd {
    #[inline]
    fn div_assign(&mut self, rhs: Dd) {
        self.0 = quotient(self.0, rhs.0);
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd(<TwoFloat as From<f64>>::from(0.0))
    }

    fn is_zero(&self) -> bool {
        self.0 == <TwoFloat as From<f64>>::from(0.0)
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd(<TwoFloat as From<f64>>::from(1.0))
    }
}

impl Num for Dd {
    type FromStrRadixErr = <TwoFloat as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        <TwoFloat as Num>::from_str_radix(s, radix).map(Dd)
    }
}

impl ToPrimitive for Dd {
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(&self.0)
    }

    fn to_u64(&self) -> Option<u64> {
        ToPrimitive::to_u64(&self.0)
    }

    fn to_f64(&self) -> Option<f64> {
        ToPrimitive::to_f64(&self.0)
    }
}

impl FromPrimitive for Dd {
    fn from_i64(n: i64) -> Option<Self> {
        <TwoFloat as FromPrimitive>::from_i64(n).map(Dd)
    }

    fn from_u64(n: u64) -> Option<Self> {
        <TwoFloat as FromPrimitive>::from_u64(n).map(Dd)
    }

    // the upstream default routes through an integer and truncates
    fn from_f64(n: f64) -> Option<Self> {
        Some(Dd(<TwoFloat as From<f64>>::from(n)))
    }
}

impl NumCast for Dd {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        <TwoFloat as NumCast>::from(n).map(Dd)
    }
}

macro_rules! consts {
    ($tr:ident: $($f:ident),*) => {$(
        #[inline]
        fn $f() -> Self {
            Dd(<TwoFloat as $tr>::$f())
        }
    )*};
}

impl FloatConst for Dd {
    consts!(
        FloatConst: E, FRAC_1_PI, FRAC_1_SQRT_2, FRAC_2_PI, FRAC_2_SQRT_PI, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6,
        FRAC_PI_8, LN_10, LN_2, LOG10_E, LOG2_E, PI, SQRT_2
    );
}

macro_rules! unary {
    ($($f:ident),*) => {$(
        #[inline]
        fn $f(self) -> Self {
            Dd(Float::$f(self.0))
        }
    )*};
}

macro_rules! predicate {
    ($($f:ident),*) => {$(
        #[inline]
        fn $f(self) -> bool {
            self.0.$f()
        }
    )*};
}

macro_rules! binary {
    ($($f:ident),*) => {$(
        #[inline]
        fn $f(self, other: Self) -> Self {
            Dd(Float::$f(self.0, other.0))
        }
    )*};
}

impl Float for Dd {
    consts!(Float: nan, infinity, neg_infinity, neg_zero, min_value, min_positive_value, max_value);

    // upstream reports the smallest subnormal here
    fn epsilon() -> Self {
        Dd(<TwoFloat as From<f64>>::from(2f64.powi(-104)))
    }
    unary!(
        floor, ceil, round, trunc, fract, abs, signum, sqrt, exp, exp2, ln, log2, log10, cbrt, sin, cos,
        tan, asin, acos, atan, exp_m1, ln_1p, sinh, cosh, tanh, asinh, acosh, atanh, to_degrees, to_radians
    );
    predicate!(is_nan, is_infinite, is_finite, is_normal, is_sign_positive, is_sign_negative);
    binary!(max, min, powf, log, abs_sub, hypot, atan2);

    fn recip(self) -> Self {
        Dd::one() / self
    }

    fn classify(self) -> FpCategory {
        Float::classify(self.0)
    }

    fn mul_add(self, a: Self, b: Self) -> Self {
        Dd(Float::mul_add(self.0, a.0, b.0))
    }

    fn powi(self, n: i32) -> Self {
        Dd(Float::powi(self.0, n))
    }

    fn sin_cos(self) -> (Self, Self) {
        let (s, c) = Float::sin_cos(self.0);
        (Dd(s), Dd(c))
    }

    fn integer_decode(self) -> (u64, i16, i8) {
        Float::integer_decode(self.0)
    }
}

impl Scalar for Dd {
    fn default_gap_tolerance() -> Self {
        Dd(<TwoFloat as From<f64>>::from(1e-8))
    }

    fn invariant_tolerance() -> Self {
        Dd(<TwoFloat as From<f64>>::from(1e-10))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::lit;

    #[test]
    fn carries_more_than_f64() {
        let tiny: Dd = lit(1e-20);
        let x = Dd::one() + tiny;
        assert!(x - Dd::one() == tiny);
        let r = lit::<Dd>(2.0).sqrt();
        assert!((r * r - lit(2.0)).abs() < lit(1e-30));
        assert_eq!([Dd::one(); 3].into_iter().sum::<Dd>().to_f64(), Some(3.0));
        assert_eq!(lit::<Dd>(0.25).to_f64(), Some(0.25));
        assert!(Dd::one() + Dd::epsilon() > Dd::one());
        let third = Dd::one() / lit::<Dd>(3.0);
        assert!((third * lit(3.0) - Dd::one()).abs() < lit(1e-31));
        assert!((lit::<Dd>(7.0).recip() * lit(7.0) - Dd::one()).abs() < lit(1e-31));
    }
}
