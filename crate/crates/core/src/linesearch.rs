//! Backtracking line search under the Armijo sufficient-decrease condition.

use crate::error::ConfigError;
use crate::linalg::dot;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchParams {
    /// Armijo constant `c₁`.
    pub c1: f64,
    /// First trial step.
    pub alpha0: f64,
    /// Number of halvings; the search tries at most `max_iter + 1` steps.
    pub max_iter: usize,
    pub shrink: f64,
}

impl Default for LineSearchParams {
    fn default() -> Self {
        Self {
            c1: 0.3,
            alpha0: 1.0,
            max_iter: 20,
            shrink: 0.5,
        }
    }
}

impl LineSearchParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.c1 > 0.0 && self.c1 < 1.0) {
            return Err(ConfigError::LineSearch("c1 must lie in (0, 1)"));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(ConfigError::LineSearch("shrink must lie in (0, 1)"));
        }
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return Err(ConfigError::LineSearch("alpha0 must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchOutcome {
    pub alpha: f64,
    /// Objective value at `x + alpha·p`.
    pub value: f64,
    pub evaluations: usize,
    /// False when no trial satisfied the Armijo inequality and the smallest
    /// step was returned anyway.
    pub accepted: bool,
    /// `gᵀp < 0` at entry.
    pub descent: bool,
}

/// Returns the first `α ∈ {α₀, α₀·s, α₀·s², …, α₀·s^max_iter}` with
/// `f(x + αp) ≤ f₀ + c₁·α·gᵀp`, or the last trial if none qualifies.
///
/// `gᵀp` is computed once. `scratch` receives the trial points and must have
/// the length of `x`.
pub fn armijo_search<F>(
    mut f: F,
    x: &[f64],
    p: &[f64],
    g: &[f64],
    f0: f64,
    params: &LineSearchParams,
    scratch: &mut [f64],
) -> LineSearchOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let ddir = dot(g, p);
    let mut alpha = params.alpha0;
    let mut value = f64::NAN;
    let mut evaluations = 0;
    for trial in 0..=params.max_iter {
        for ((t, &xi), &pi) in scratch.iter_mut().zip(x).zip(p) {
            *t = xi + alpha * pi;
        }
        value = f(scratch);
        evaluations += 1;
        if value <= f0 + params.c1 * alpha * ddir {
            return LineSearchOutcome {
                alpha,
                value,
                evaluations,
                accepted: true,
                descent: ddir < 0.0,
            };
        }
        if trial < params.max_iter {
            alpha *= params.shrink;
        }
    }
    LineSearchOutcome {
        alpha,
        value,
        evaluations,
        accepted: false,
        descent: ddir < 0.0,
    }
}
