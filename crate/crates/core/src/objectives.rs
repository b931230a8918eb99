//! Benchmark objectives and the evaluation contract for user objectives.
//!
//! Every objective is written once, generic over [`Scalar`], so the same code
//! produces values on `f64` and derivatives on [`Dual`](crate::Dual).

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use crate::error::ConfigError;
use crate::scalar::Scalar;

/// An objective evaluable on any [`Scalar`].
///
/// Implement this for user-supplied functions; the optimizer gets gradients
/// for free through dual numbers.
pub trait Objective {
    fn dim(&self) -> usize;

    fn eval<S: Scalar>(&self, x: &[S]) -> S;

    #[inline]
    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        (**self).eval(x)
    }
}

/// Rastrigin amplitude.
pub const RASTRIGIN_A: f64 = 10.0;

/// `Σ_{i=1}^{n-1} (1 - xᵢ)² + 100 (xᵢ₊₁ - xᵢ²)²`.
pub fn rosenbrock<S: Scalar>(x: &[S]) -> S {
    let mut acc = S::constant(0.0);
    for w in x.windows(2) {
        let a = w[0] - 1.0;
        let b = w[1] - w[0] * w[0];
        acc = acc + a * a + b * b * 100.0;
    }
    acc
}

/// `A·N + Σ (xᵢ² - A cos(2π xᵢ))` with `A = 10`.
pub fn rastrigin<S: Scalar>(x: &[S]) -> S {
    let mut acc = S::constant(RASTRIGIN_A * x.len() as f64);
    for &xi in x {
        acc = acc + xi * xi - (xi * (2.0 * PI)).cos() * RASTRIGIN_A;
    }
    acc
}

/// `-20 exp(-0.2 √(Σxᵢ²/d)) - exp(Σcos(2πxᵢ)/d) + e + 20`.
///
/// The gradient does not exist at the origin; dual evaluation there yields a
/// NaN tangent through `sqrt`.
pub fn ackley<S: Scalar>(x: &[S]) -> S {
    let d = x.len() as f64;
    let mut sum_sq = S::constant(0.0);
    let mut sum_cos = S::constant(0.0);
    for &xi in x {
        sum_sq = sum_sq + xi * xi;
        sum_cos = sum_cos + (xi * (2.0 * PI)).cos();
    }
    let radial = ((sum_sq / d).sqrt() * -0.2).exp() * -20.0;
    let periodic = (sum_cos / d).exp();
    radial - periodic + E + 20.0
}

/// Two-dimensional Goldstein-Price function. Panics if `x.len() != 2`.
pub fn goldstein_price<S: Scalar>(x: &[S]) -> S {
    assert_eq!(x.len(), 2, "goldstein-price is two-dimensional");
    let (x1, x2) = (x[0], x[1]);
    let s = x1 + x2 + 1.0;
    let first_poly = x1 * -14.0 + x1 * x1 * 3.0 - x2 * 14.0 + x1 * x2 * 6.0 + x2 * x2 * 3.0 + 19.0;
    let first = s * s * first_poly + 1.0;
    let t = x1 * 2.0 - x2 * 3.0;
    let second_poly = x1 * -32.0 + x1 * x1 * 12.0 + x2 * 48.0 - x1 * x2 * 36.0 + x2 * x2 * 27.0 + 18.0;
    let second = t * t * second_poly + 30.0;
    first * second
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnownOptimum {
    pub location: Vec<f64>,
    pub value: f64,
}

/// Metadata for a registered objective.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub name: &'static str,
    pub dim: usize,
    pub lower: f64,
    pub upper: f64,
    pub known_optimum: Option<KnownOptimum>,
    /// False when the gradient is undefined somewhere in the range (Ackley).
    pub gradient_continuous: bool,
}

/// The registered benchmark functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    Rosenbrock { dim: usize },
    Rastrigin { dim: usize },
    Ackley { dim: usize },
    GoldsteinPrice,
}

impl Benchmark {
    pub const NAMES: [&'static str; 4] = ["rosenbrock", "rastrigin", "ackley", "goldstein-price"];

    /// Look up a benchmark by name. Names are case-insensitive; `_` and `-`
    /// are interchangeable.
    pub fn from_name(name: &str, dim: usize) -> Result<Self, ConfigError> {
        let key = name.trim().to_ascii_lowercase().replace('_', "-");
        let bench = match key.as_str() {
            "rosenbrock" => Benchmark::Rosenbrock { dim },
            "rastrigin" => Benchmark::Rastrigin { dim },
            "ackley" => Benchmark::Ackley { dim },
            "goldstein-price" | "goldsteinprice" => Benchmark::GoldsteinPrice,
            _ => return Err(ConfigError::UnknownObjective(name.to_string())),
        };
        match bench {
            Benchmark::Rosenbrock { dim } if dim < 2 => Err(ConfigError::DimensionMismatch {
                expected: 2,
                found: dim,
            }),
            Benchmark::GoldsteinPrice if dim != 2 => Err(ConfigError::DimensionMismatch {
                expected: 2,
                found: dim,
            }),
            _ if dim == 0 => Err(ConfigError::ZeroDimension),
            b => Ok(b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Benchmark::Rosenbrock { .. } => "rosenbrock",
            Benchmark::Rastrigin { .. } => "rastrigin",
            Benchmark::Ackley { .. } => "ackley",
            Benchmark::GoldsteinPrice => "goldstein-price",
        }
    }

    pub fn spec(&self) -> ObjectiveSpec {
        let dim = self.dim();
        let (lower, upper, location, value, gradient_continuous) = match self {
            Benchmark::Rosenbrock { .. } => (-5.0, 5.0, vec![1.0; dim], 0.0, true),
            Benchmark::Rastrigin { .. } => (-5.12, 5.12, vec![0.0; dim], 0.0, true),
            Benchmark::Ackley { .. } => (-5.0, 5.0, vec![0.0; dim], 0.0, false),
            Benchmark::GoldsteinPrice => (-2.0, 2.0, vec![0.0, -1.0], 3.0, true),
        };
        ObjectiveSpec {
            name: self.name(),
            dim,
            lower,
            upper,
            known_optimum: Some(KnownOptimum { location, value }),
            gradient_continuous,
        }
    }
}

impl Objective for Benchmark {
    fn dim(&self) -> usize {
        match *self {
            Benchmark::Rosenbrock { dim } | Benchmark::Rastrigin { dim } | Benchmark::Ackley { dim } => dim,
            Benchmark::GoldsteinPrice => 2,
        }
    }

    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        match self {
            Benchmark::Rosenbrock { .. } => rosenbrock(x),
            Benchmark::Rastrigin { .. } => rastrigin(x),
            Benchmark::Ackley { .. } => ackley(x),
            Benchmark::GoldsteinPrice => goldstein_price(x),
        }
    }
}
