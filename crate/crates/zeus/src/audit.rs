//! Failure-mode audit for the Ackley function.
//!
//! Ackley's gradient is discontinuous at its global minimum, so a
//! gradient-norm stopping rule misreports both ways: runs that reach the
//! minimum keep seeing a gradient of norm close to 4/√d and end up diverged, while
//! runs trapped in a shallow local minimum report convergence. The audit runs
//! every start to completion and lists both populations.

use std::fmt;

use serde::Serialize;
use zeus_core::bfgs::BfgsStatus;
use zeus_core::linalg::norm;
use zeus_core::{Benchmark, ZeusConfig};

use crate::driver::zeus_run;
use crate::error::Result;

/// Diverged runs closer than this to the origin are reported as stalled at
/// the minimum.
pub const NEAR_OPTIMUM: f64 = 0.1;
/// Converged runs above this value are reported as false convergence.
pub const FALSE_CONVERGENCE_VALUE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntry {
    pub start: usize,
    pub x_final: Vec<f64>,
    pub f_final: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub dim: usize,
    pub particles: usize,
    pub theta: f64,
    pub seed: u64,
    pub converged: usize,
    pub diverged: usize,
    pub stopped: usize,
    pub domain_error: usize,
    /// Diverged runs ending with ‖x‖ below [`NEAR_OPTIMUM`].
    pub stalled_at_minimum: Vec<AuditEntry>,
    /// Converged runs ending with f above [`FALSE_CONVERGENCE_VALUE`].
    pub false_convergence: Vec<AuditEntry>,
}

impl AuditReport {
    /// Both failure populations are present.
    pub fn flags_both(&self) -> bool {
        !self.stalled_at_minimum.is_empty() && !self.false_convergence.is_empty()
    }
}

/// Default audit configuration: 2-D Ackley, 1000 starts, `Θ = 1e-6`, every
/// start run to completion.
pub fn audit_config(seed: u64) -> ZeusConfig {
    let f = Benchmark::Ackley { dim: 2 };
    ZeusConfig {
        particles: 1000,
        seed,
        deterministic: true,
        required_convergences: 1,
        bfgs_iterations: 1000,
        ..ZeusConfig::for_benchmark(&f)
    }
}

pub fn ackley_audit(cfg: &ZeusConfig) -> Result<AuditReport> {
    let f = Benchmark::from_name("ackley", cfg.dim)?;
    let result = zeus_run(&f, cfg)?;
    let entry = |i: usize| {
        let o = &result.per_run[i];
        AuditEntry {
            start: result.starts[i],
            x_final: o.x_final.clone(),
            f_final: o.f_final,
            grad_norm: o.grad_norm,
            iterations: o.iterations,
        }
    };
    let select = |status: BfgsStatus, keep: &dyn Fn(&zeus_core::BfgsOutcome) -> bool| {
        (0..result.per_run.len())
            .filter(|&i| result.per_run[i].status == status && keep(&result.per_run[i]))
            .map(entry)
            .collect::<Vec<_>>()
    };
    Ok(AuditReport {
        dim: cfg.dim,
        particles: cfg.particles,
        theta: cfg.theta,
        seed: cfg.seed,
        converged: result.count(BfgsStatus::Converged),
        diverged: result.count(BfgsStatus::Diverged),
        stopped: result.count(BfgsStatus::Stopped),
        domain_error: result.count(BfgsStatus::DomainError),
        stalled_at_minimum: select(BfgsStatus::Diverged, &|o| norm(&o.x_final) < NEAR_OPTIMUM),
        false_convergence: select(BfgsStatus::Converged, &|o| o.f_final > FALSE_CONVERGENCE_VALUE),
    })
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ackley audit: dim={} N={} theta={:e} seed={}",
            self.dim, self.particles, self.theta, self.seed
        )?;
        writeln!(
            f,
            "status: converged={} diverged={} stopped={} domain_error={}",
            self.converged, self.diverged, self.stopped, self.domain_error
        )?;
        let flag = |v: &[AuditEntry]| if v.is_empty() { "not observed" } else { "FLAGGED" };
        writeln!(
            f,
            "diverged with |x| < {NEAR_OPTIMUM}: {} ({})",
            self.stalled_at_minimum.len(),
            flag(&self.stalled_at_minimum)
        )?;
        writeln!(
            f,
            "converged with f > {FALSE_CONVERGENCE_VALUE}: {} ({})",
            self.false_convergence.len(),
            flag(&self.false_convergence)
        )?;
        for (label, entries) in [
            ("stalled", &self.stalled_at_minimum),
            ("false", &self.false_convergence),
        ] {
            for e in entries.iter().take(5) {
                writeln!(
                    f,
                    "  {label} start={} x={:?} f={:.6e} |g|={:.3e} iterations={}",
                    e.start, e.x_final, e.f_final, e.grad_norm, e.iterations
                )?;
            }
        }
        Ok(())
    }
}
