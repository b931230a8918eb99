//! BFGS with an explicit inverse-Hessian approximation.
//!
//! Gradients come from forward-mode differentiation; step lengths from the
//! Armijo backtracking search. A run ends as soon as the gradient norm drops
//! below `theta`, when the iteration cap is reached, when an external stop
//! signal is observed, or when the objective leaves its domain.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, Ordering};

use crate::autodiff::{forward_gradient_into, Dual};
use crate::linalg::{dot, norm};
use crate::linesearch::{armijo_search, LineSearchParams};
use crate::objectives::Objective;

/// Relative curvature floor below which the inverse-Hessian update is skipped.
pub const CURVATURE_FLOOR: f64 = 1e-12;

/// Read side of a cooperative stop signal.
pub trait StopProbe {
    fn stop_requested(&self) -> bool;
}

/// Probe that never fires.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeverStop;

impl StopProbe for NeverStop {
    #[inline]
    fn stop_requested(&self) -> bool {
        false
    }
}

impl StopProbe for AtomicBool {
    #[inline]
    fn stop_requested(&self) -> bool {
        self.load(Ordering::Relaxed)
    }
}

impl<T: StopProbe + ?Sized> StopProbe for &T {
    #[inline]
    fn stop_requested(&self) -> bool {
        (**self).stop_requested()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BfgsStatus {
    Converged,
    /// Iteration cap reached without meeting the gradient threshold.
    Diverged,
    Stopped,
    DomainError,
}

impl BfgsStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            BfgsStatus::Converged => "converged",
            BfgsStatus::Diverged => "diverged",
            BfgsStatus::Stopped => "stopped",
            BfgsStatus::DomainError => "domain_error",
        }
    }
}

/// Events that do not change the outcome but are worth reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BfgsDiagnostics {
    /// Line searches that exhausted their trials without satisfying Armijo.
    pub line_search_fallthroughs: usize,
    /// Iterations whose search direction was not a descent direction.
    pub non_descent_directions: usize,
    /// Inverse-Hessian updates skipped by the curvature guard.
    pub skipped_updates: usize,
    /// Iterates that left the box given in [`BfgsParams::bounds`].
    pub range_exits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfgsOutcome {
    pub x_final: Vec<f64>,
    pub f_final: f64,
    /// Euclidean norm of the last gradient evaluated (at `x_final`).
    pub grad_norm: f64,
    pub iterations: usize,
    pub status: BfgsStatus,
    pub diagnostics: BfgsDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsParams {
    /// Gradient-norm threshold `Θ`.
    pub theta: f64,
    pub max_iter: usize,
    pub line_search: LineSearchParams,
    /// Box used only to count range exits; iterates are never projected.
    pub bounds: Option<(f64, f64)>,
}

impl Default for BfgsParams {
    fn default() -> Self {
        Self {
            theta: 1e-6,
            max_iter: 10_000,
            line_search: LineSearchParams::default(),
            bounds: None,
        }
    }
}

/// Dense, row-major inverse-Hessian approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseHessian {
    dim: usize,
    data: Vec<f64>,
}

impl InverseHessian {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    /// Build from symmetric row-major entries. Panics on a length mismatch.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    /// `out = H·v`.
    pub fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        for (row, o) in self.data.chunks_exact(self.dim).zip(out.iter_mut()) {
            *o = dot(row, v);
        }
    }

    /// Rank-two update
    ///
    /// `H ← (I − ρ δx δgᵀ) H (I − ρ δg δxᵀ) + ρ δx δxᵀ`, `ρ = 1 / δxᵀδg`,
    ///
    /// evaluated in its expanded form
    /// `H − ρ(δx (Hδg)ᵀ + (Hδg) δxᵀ) + (ρ + ρ² δgᵀHδg) δx δxᵀ`,
    /// with the upper triangle mirrored so `H` stays exactly symmetric.
    ///
    /// Skipped (returns `false`, `H` untouched) when
    /// `δxᵀδg ≤ 1e-12·‖δx‖‖δg‖`.
    pub fn update(&mut self, dx: &[f64], dg: &[f64]) -> bool {
        let n = self.dim;
        let curvature = dot(dx, dg);
        if !(curvature > CURVATURE_FLOOR * norm(dx) * norm(dg)) || !curvature.is_finite() {
            return false;
        }
        let rho = 1.0 / curvature;
        let mut h_dg = vec![0.0; n];
        self.mul_vec(dg, &mut h_dg);
        let dg_h_dg = dot(dg, &h_dg);
        let outer = rho + rho * rho * dg_h_dg;
        for i in 0..n {
            for j in i..n {
                let cross = dx[i] * h_dg[j] + h_dg[i] * dx[j];
                let v = self.data[i * n + j] + (outer * (dx[i] * dx[j]) - rho * cross);
                self.data[i * n + j] = v;
                self.data[j * n + i] = v;
            }
        }
        true
    }
}

/// Minimize `f` from `x0`.
///
/// The convergence test runs immediately after every gradient evaluation;
/// the stop probe is read before each step, so an observed stop never costs
/// another gradient. A run that sees the stop flag before its first
/// gradient returns `x0` as stopped with `grad_norm = NaN`.
pub fn bfgs_run<F, P>(f: &F, x0: &[f64], params: &BfgsParams, stop: &P) -> BfgsOutcome
where
    F: Objective + ?Sized,
    P: StopProbe + ?Sized,
{
    let n = x0.len();
    let mut diagnostics = BfgsDiagnostics::default();
    let mut x = x0.to_vec();
    let mut fx = f.value(&x);

    let mut lifted = vec![Dual::default(); n];
    let mut g = vec![0.0; n];
    let finish = |x: Vec<f64>, fx, g_norm, k, status, diagnostics| BfgsOutcome {
        x_final: x,
        f_final: fx,
        grad_norm: g_norm,
        iterations: k,
        status,
        diagnostics,
    };

    if params.max_iter > 0 && fx.is_finite() && stop.stop_requested() {
        return finish(x, fx, f64::NAN, 0, BfgsStatus::Stopped, diagnostics);
    }
    if !fx.is_finite() || forward_gradient_into(f, &x, &mut lifted, &mut g).is_err() {
        return finish(x, fx, f64::NAN, 0, BfgsStatus::DomainError, diagnostics);
    }

    let mut h = InverseHessian::identity(n);
    let mut p = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut dx = vec![0.0; n];
    let mut dg = vec![0.0; n];
    let mut k = 0;
    loop {
        let g_norm = norm(&g);
        if g_norm < params.theta {
            return finish(x, fx, g_norm, k, BfgsStatus::Converged, diagnostics);
        }
        if k >= params.max_iter {
            return finish(x, fx, g_norm, k, BfgsStatus::Diverged, diagnostics);
        }
        if stop.stop_requested() {
            return finish(x, fx, g_norm, k, BfgsStatus::Stopped, diagnostics);
        }

        h.mul_vec(&g, &mut p);
        p.iter_mut().for_each(|v| *v = -*v);
        let ls = armijo_search(|t| f.value(t), &x, &p, &g, fx, &params.line_search, &mut x_new);
        if !ls.accepted {
            diagnostics.line_search_fallthroughs += 1;
        }
        if !ls.descent {
            diagnostics.non_descent_directions += 1;
        }
        for ((xn, &xi), &pi) in x_new.iter_mut().zip(&x).zip(&p) {
            *xn = xi + ls.alpha * pi;
        }
        if !ls.value.is_finite() || forward_gradient_into(f, &x_new, &mut lifted, &mut g_new).is_err() {
            return finish(x, fx, g_norm, k, BfgsStatus::DomainError, diagnostics);
        }
        for i in 0..n {
            dx[i] = x_new[i] - x[i];
            dg[i] = g_new[i] - g[i];
        }
        if !h.update(&dx, &dg) {
            diagnostics.skipped_updates += 1;
        }
        core::mem::swap(&mut x, &mut x_new);
        core::mem::swap(&mut g, &mut g_new);
        fx = ls.value;
        k += 1;
        if let Some((lo, hi)) = params.bounds {
            if x.iter().any(|&v| v < lo || v > hi) {
                diagnostics.range_exits += 1;
            }
        }
    }
}
