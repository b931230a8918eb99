//! Forward-mode automatic differentiation with dual numbers.
//!
//! A [`Dual`] is `a + bε` with `ε² = 0`. Evaluating an objective on duals
//! whose tangent is `1` along coordinate `i` and `0` elsewhere yields the
//! partial derivative `∂f/∂xᵢ` in the tangent of the result. The gradient
//! therefore costs `dim` evaluations.
//!
//! Operator overloads follow IEEE semantics and never fail; a domain
//! violation shows up as a NaN or infinity that [`forward_gradient`] turns
//! into a [`DomainError`]. The `checked_*` methods report violations
//! eagerly for callers that want them.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::DomainError;
use crate::objectives::Objective;
use crate::scalar::{powi_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    /// Value part `a`.
    pub real: f64,
    /// Tangent part `b`.
    pub dual: f64,
}

impl Dual {
    #[inline]
    pub const fn new(real: f64, dual: f64) -> Self {
        Self { real, dual }
    }

    #[inline]
    pub const fn constant(real: f64) -> Self {
        Self { real, dual: 0.0 }
    }

    /// An independent variable, tangent seeded to one.
    #[inline]
    pub const fn variable(real: f64) -> Self {
        Self { real, dual: 1.0 }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, DomainError> {
        if rhs.real == 0.0 {
            return Err(DomainError::DivisionByZero);
        }
        Ok(self / rhs)
    }

    pub fn checked_sqrt(self) -> Result<Self, DomainError> {
        if self.real < 0.0 {
            return Err(DomainError::SqrtOfNegative(self.real));
        }
        if self.real == 0.0 {
            return Err(DomainError::SqrtAtZero);
        }
        Ok(Scalar::sqrt(self))
    }

    pub fn checked_powf(self, e: f64) -> Result<Self, DomainError> {
        if self.real <= 0.0 && e != libm::trunc(e) {
            return Err(DomainError::PowNonPositiveBase(self.real));
        }
        Ok(Scalar::powf(self, e))
    }

    pub fn checked_ln(self) -> Result<Self, DomainError> {
        if self.real <= 0.0 {
            return Err(DomainError::LogNonPositive(self.real));
        }
        Ok(Scalar::ln(self))
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.real.is_finite() && self.dual.is_finite()
    }
}

impl Add for Dual {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.real + rhs.real, self.dual + rhs.dual)
    }
}

impl Sub for Dual {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.real - rhs.real, self.dual - rhs.dual)
    }
}

impl Mul for Dual {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.real * rhs.real, self.real * rhs.dual + self.dual * rhs.real)
    }
}

impl Div for Dual {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        Self::new(
            self.real / rhs.real,
            (self.dual * rhs.real - self.real * rhs.dual) / (rhs.real * rhs.real),
        )
    }
}

impl Neg for Dual {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.real, -self.dual)
    }
}

impl Add<f64> for Dual {
    type Output = Self;
    #[inline]
    fn add(self, rhs: f64) -> Self {
        Self::new(self.real + rhs, self.dual)
    }
}

impl Sub<f64> for Dual {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: f64) -> Self {
        Self::new(self.real - rhs, self.dual)
    }
}

impl Mul<f64> for Dual {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.real * rhs, self.dual * rhs)
    }
}

impl Div<f64> for Dual {
    type Output = Self;
    #[inline]
    fn div(self, rhs: f64) -> Self {
        Self::new(self.real / rhs, self.dual / rhs)
    }
}

impl Scalar for Dual {
    #[inline]
    fn constant(value: f64) -> Self {
        Dual::constant(value)
    }

    #[inline]
    fn value(self) -> f64 {
        self.real
    }

    #[inline]
    fn exp(self) -> Self {
        let e = libm::exp(self.real);
        Self::new(e, e * self.dual)
    }

    #[inline]
    fn ln(self) -> Self {
        Self::new(libm::log(self.real), self.dual / self.real)
    }

    #[inline]
    fn sin(self) -> Self {
        Self::new(libm::sin(self.real), libm::cos(self.real) * self.dual)
    }

    #[inline]
    fn cos(self) -> Self {
        Self::new(libm::cos(self.real), -libm::sin(self.real) * self.dual)
    }

    #[inline]
    fn sqrt(self) -> Self {
        let s = libm::sqrt(self.real);
        Self::new(s, self.dual / (2.0 * s))
    }

    #[inline]
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::constant(1.0);
        }
        Self::new(
            powi_f64(self.real, n),
            n as f64 * powi_f64(self.real, n - 1) * self.dual,
        )
    }

    #[inline]
    fn powf(self, e: f64) -> Self {
        Self::new(libm::pow(self.real, e), e * libm::pow(self.real, e - 1.0) * self.dual)
    }
}

/// Gradient of `f` at `x` by seeding one coordinate at a time.
pub fn forward_gradient<F: Objective + ?Sized>(f: &F, x: &[f64]) -> Result<Vec<f64>, DomainError> {
    let mut lifted = vec![Dual::default(); x.len()];
    let mut grad = vec![0.0; x.len()];
    forward_gradient_into(f, x, &mut lifted, &mut grad)?;
    Ok(grad)
}

/// Allocation-free variant of [`forward_gradient`].
///
/// `lifted` and `grad` must have the same length as `x`. Performs exactly
/// `x.len()` dual evaluations; every seed is reset before the next one so no
/// tangent leaks between coordinates.
pub fn forward_gradient_into<F: Objective + ?Sized>(
    f: &F,
    x: &[f64],
    lifted: &mut [Dual],
    grad: &mut [f64],
) -> Result<(), DomainError> {
    debug_assert_eq!(lifted.len(), x.len());
    debug_assert_eq!(grad.len(), x.len());
    for (d, &xi) in lifted.iter_mut().zip(x) {
        *d = Dual::constant(xi);
    }
    for i in 0..x.len() {
        lifted[i].dual = 1.0;
        let result = f.eval(lifted);
        lifted[i].dual = 0.0;
        if !result.is_finite() {
            return Err(DomainError::NonFinite { coordinate: Some(i) });
        }
        grad[i] = result.dual;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{rastrigin, rosenbrock, Benchmark};

    #[test]
    fn product_drops_epsilon_squared() {
        let r = Dual::new(2.0, 3.0) * Dual::new(5.0, 7.0);
        assert_eq!(r, Dual::new(10.0, 29.0));
    }

    #[test]
    fn additive_identity() {
        let a = Dual::new(1.25, -4.5);
        assert_eq!(a + Dual::constant(0.0), a);
    }

    #[test]
    fn quotient_rule() {
        let r = Dual::new(1.0, 1.0) / Dual::new(2.0, 0.0);
        assert_eq!(r, Dual::new(0.5, 0.5));
        assert_eq!(
            Dual::new(1.0, 1.0).checked_div(Dual::new(0.0, 3.0)),
            Err(DomainError::DivisionByZero)
        );
    }

    #[test]
    fn elementary_functions_at_reference_points() {
        assert_eq!(Scalar::cos(Dual::variable(0.0)), Dual::new(1.0, 0.0));
        assert_eq!(Scalar::exp(Dual::variable(0.0)), Dual::new(1.0, 1.0));
        assert_eq!(Scalar::sqrt(Dual::variable(4.0)), Dual::new(2.0, 0.25));
        assert_eq!(Scalar::sin(Dual::variable(0.0)), Dual::new(0.0, 1.0));
        assert_eq!(Scalar::ln(Dual::variable(1.0)), Dual::new(0.0, 1.0));
        assert_eq!(Scalar::powi(Dual::variable(3.0), 2), Dual::new(9.0, 6.0));
        assert_eq!(Scalar::powf(Dual::variable(4.0), 0.5), Dual::new(2.0, 0.25));
    }

    #[test]
    fn constants_have_zero_tangent() {
        assert_eq!(<Dual as Scalar>::constant(7.5).dual, 0.0);
        assert_eq!(Scalar::powi(Dual::variable(0.0), 0), Dual::new(1.0, 0.0));
    }

    #[test]
    fn checked_domain_violations() {
        assert_eq!(
            Dual::variable(-1.0).checked_sqrt(),
            Err(DomainError::SqrtOfNegative(-1.0))
        );
        assert_eq!(Dual::variable(0.0).checked_sqrt(), Err(DomainError::SqrtAtZero));
        assert_eq!(
            Dual::variable(-2.0).checked_powf(0.5),
            Err(DomainError::PowNonPositiveBase(-2.0))
        );
        assert!(Dual::variable(-2.0).checked_powf(2.0).is_ok());
        assert_eq!(Dual::variable(0.0).checked_ln(), Err(DomainError::LogNonPositive(0.0)));
    }

    struct Rosen2;
    impl Objective for Rosen2 {
        fn dim(&self) -> usize {
            2
        }
        fn eval<S: Scalar>(&self, x: &[S]) -> S {
            rosenbrock(x)
        }
    }

    #[test]
    fn rosenbrock_gradients() {
        assert_eq!(forward_gradient(&Rosen2, &[1.0, 1.0]).unwrap(), [0.0, 0.0]);
        assert_eq!(forward_gradient(&Rosen2, &[0.0, 0.0]).unwrap(), [-2.0, 0.0]);
    }

    #[test]
    fn rastrigin_stationary_at_origin() {
        struct R(usize);
        impl Objective for R {
            fn dim(&self) -> usize {
                self.0
            }
            fn eval<S: Scalar>(&self, x: &[S]) -> S {
                rastrigin(x)
            }
        }
        for d in 1..6 {
            let g = forward_gradient(&R(d), &vec![0.0; d]).unwrap();
            assert!(g.iter().all(|&v| v == 0.0), "{g:?}");
        }
    }

    #[test]
    fn ackley_gradient_undefined_at_origin() {
        let f = Benchmark::Ackley { dim: 2 };
        assert_eq!(
            forward_gradient(&f, &[0.0, 0.0]),
            Err(DomainError::NonFinite { coordinate: Some(0) })
        );
    }
}
