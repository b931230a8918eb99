//! Scalar abstraction shared by plain `f64` evaluation and dual numbers.
//!
//! Objectives are written once against [`Scalar`] and evaluated either on
//! `f64` (values) or on [`Dual`](crate::Dual) (values plus one directional
//! derivative). Both implementations route through the same `libm` kernels,
//! so the real part of a dual evaluation is bit-identical to the plain one.

use core::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + core::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// Lift a constant. Its derivative part, if any, is zero.
    fn constant(value: f64) -> Self;

    /// The real (function value) part.
    fn value(self) -> f64;

    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn powf(self, e: f64) -> Self;

    #[inline]
    fn square(self) -> Self {
        self * self
    }
}

/// Integer power by repeated squaring.
///
/// Used for both `f64` and the real part of duals so the two stay identical.
pub fn powi_f64(base: f64, n: i32) -> f64 {
    if n < 0 {
        return 1.0 / powi_f64(base, n.checked_neg().unwrap_or(i32::MAX));
    }
    let mut exp = n as u32;
    let mut acc = 1.0;
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= b;
        }
        exp >>= 1;
        if exp > 0 {
            b *= b;
        }
    }
    acc
}

impl Scalar for f64 {
    #[inline]
    fn constant(value: f64) -> Self {
        value
    }

    #[inline]
    fn value(self) -> f64 {
        self
    }

    #[inline]
    fn exp(self) -> Self {
        libm::exp(self)
    }

    #[inline]
    fn ln(self) -> Self {
        libm::log(self)
    }

    #[inline]
    fn sin(self) -> Self {
        libm::sin(self)
    }

    #[inline]
    fn cos(self) -> Self {
        libm::cos(self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        libm::sqrt(self)
    }

    #[inline]
    fn powi(self, n: i32) -> Self {
        powi_f64(self, n)
    }

    #[inline]
    fn powf(self, e: f64) -> Self {
        libm::pow(self, e)
    }
}
