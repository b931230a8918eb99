//! Multistart orchestration: swarm phase, local runs with early stopping,
//! and the final reduction.
//!
//! This module holds the configuration, the shared convergence tracker, the
//! reduction and the sequential driver. The threaded driver in the `zeus`
//! crate reuses all of them.

use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::bfgs::{bfgs_run, BfgsOutcome, BfgsParams, BfgsStatus, StopProbe};
use crate::error::{ConfigError, ZeusError};
use crate::linesearch::LineSearchParams;
use crate::objectives::{Benchmark, Objective};
use crate::pso::{init_swarm, update_swarm, PsoParams, SwarmState};
use crate::streams::make_start_streams;

#[derive(Debug, Clone, PartialEq)]
pub struct ZeusConfig {
    /// Swarm size `N`; one local run is launched per particle.
    pub particles: usize,
    pub dim: usize,
    pub lower: f64,
    pub upper: f64,
    pub pso: PsoParams,
    /// Iteration cap for each BFGS run.
    pub bfgs_iterations: usize,
    pub line_search: LineSearchParams,
    /// Gradient-norm threshold `Θ`.
    pub theta: f64,
    /// Converged runs after which the remaining runs are told to stop.
    pub required_convergences: usize,
    pub seed: u64,
    /// Worker threads; `0` selects the sequential driver.
    pub workers: usize,
    /// Disables early stopping so results do not depend on scheduling.
    pub deterministic: bool,
}

impl ZeusConfig {
    /// Defaults for a registered benchmark: its canonical box, `Θ = 1e-6`,
    /// 1024 particles, five sweeps, 100 required convergences.
    pub fn for_benchmark(bench: &Benchmark) -> Self {
        let spec = bench.spec();
        Self {
            particles: 1024,
            dim: spec.dim,
            lower: spec.lower,
            upper: spec.upper,
            pso: PsoParams::default(),
            bfgs_iterations: 10_000,
            line_search: LineSearchParams::default(),
            theta: 1e-6,
            required_convergences: 100,
            seed: 0,
            workers: 0,
            deterministic: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.particles == 0 {
            return Err(ConfigError::ZeroParticles);
        }
        if self.dim == 0 {
            return Err(ConfigError::ZeroDimension);
        }
        if !(self.lower < self.upper) || !self.lower.is_finite() || !self.upper.is_finite() {
            return Err(ConfigError::EmptyRange {
                lower: self.lower,
                upper: self.upper,
            });
        }
        if self.required_convergences == 0 || self.required_convergences > self.particles {
            return Err(ConfigError::RequiredConvergences {
                required: self.required_convergences,
                particles: self.particles,
            });
        }
        if !(self.theta > 0.0) {
            return Err(ConfigError::Theta(self.theta));
        }
        self.line_search.validate()?;
        self.pso.validate()
    }

    /// `required_convergences`, or `particles` in deterministic mode.
    pub fn effective_required(&self) -> usize {
        if self.deterministic {
            self.particles
        } else {
            self.required_convergences
        }
    }

    pub fn bfgs_params(&self) -> BfgsParams {
        BfgsParams {
            theta: self.theta,
            max_iter: self.bfgs_iterations,
            line_search: self.line_search,
            bounds: Some((self.lower, self.upper)),
        }
    }

    pub fn check_objective<F: Objective + ?Sized>(&self, f: &F) -> Result<(), ConfigError> {
        self.validate()?;
        if f.dim() != self.dim {
            return Err(ConfigError::DimensionMismatch {
                expected: f.dim(),
                found: self.dim,
            });
        }
        Ok(())
    }
}

/// Shared early-stop state: a convergence counter and a one-way stop flag.
///
/// The run whose convergence brings the counter to `required` raises the
/// flag. Runs read the flag with relaxed ordering.
#[derive(Debug)]
pub struct ConvergenceTracker {
    converged: AtomicUsize,
    stop: AtomicBool,
    required: usize,
}

impl ConvergenceTracker {
    pub fn new(required: usize) -> Self {
        Self {
            converged: AtomicUsize::new(0),
            stop: AtomicBool::new(false),
            required,
        }
    }

    /// Count a finished run. Returns `true` if this call raised the flag.
    pub fn record(&self, status: BfgsStatus) -> bool {
        if status != BfgsStatus::Converged {
            return false;
        }
        let count = self.converged.fetch_add(1, Ordering::AcqRel) + 1;
        if count == self.required {
            self.stop.store(true, Ordering::Release);
            return true;
        }
        false
    }

    pub fn converged(&self) -> usize {
        self.converged.load(Ordering::Acquire)
    }

    pub fn stop_raised(&self) -> bool {
        self.stop.load(Ordering::Acquire)
    }

    pub fn required(&self) -> usize {
        self.required
    }
}

impl StopProbe for ConvergenceTracker {
    #[inline]
    fn stop_requested(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeusResult {
    pub best: BfgsOutcome,
    /// Position of `best` in `per_run`.
    pub best_index: usize,
    /// Outcomes of every launched run, ordered by start index.
    pub per_run: Vec<BfgsOutcome>,
    /// Particle index each entry of `per_run` started from.
    pub starts: Vec<usize>,
    pub converged_count: usize,
    pub stop_raised: bool,
    /// Global best value of the swarm when local refinement began.
    pub pso_best_before_bfgs: f64,
    /// Seconds; set by timed drivers, zero from [`run_sequential`].
    pub wall_time: f64,
}

impl ZeusResult {
    pub fn count(&self, status: BfgsStatus) -> usize {
        self.per_run.iter().filter(|o| o.status == status).count()
    }

    /// Assemble a result from finished runs.
    pub fn assemble(
        per_run: Vec<BfgsOutcome>,
        starts: Vec<usize>,
        tracker: &ConvergenceTracker,
        pso_best_before_bfgs: f64,
    ) -> Result<Self, ZeusError> {
        let (best, best_index) = reduce_best(&per_run)?;
        let best = best.clone();
        Ok(Self {
            best,
            best_index,
            converged_count: per_run.iter().filter(|o| o.status == BfgsStatus::Converged).count(),
            per_run,
            starts,
            stop_raised: tracker.stop_raised(),
            pso_best_before_bfgs,
            wall_time: 0.0,
        })
    }
}

/// Lowest `f_final` among runs that did not hit a domain error; the lowest
/// index wins ties.
pub fn reduce_best(outcomes: &[BfgsOutcome]) -> Result<(&BfgsOutcome, usize), ZeusError> {
    let mut best: Option<usize> = None;
    for (i, o) in outcomes.iter().enumerate() {
        if o.status == BfgsStatus::DomainError || o.f_final.is_nan() {
            continue;
        }
        match best {
            Some(b) if !(o.f_final < outcomes[b].f_final) => {}
            _ => best = Some(i),
        }
    }
    best.map(|i| (&outcomes[i], i)).ok_or(ZeusError::NoValidOptimum)
}

/// Initialization plus `cfg.pso.iterations` sweeps, single-threaded.
pub fn swarm_phase<F: Objective + ?Sized>(f: &F, cfg: &ZeusConfig) -> SwarmState {
    let streams = make_start_streams(cfg.seed, cfg.particles, cfg.dim);
    let mut swarm = init_swarm(f, cfg.lower, cfg.upper, &streams);
    for _ in 0..cfg.pso.iterations {
        update_swarm(&mut swarm, f, &cfg.pso, &streams);
    }
    swarm
}

/// Sequential driver: local runs in particle order, stopping once the
/// required number has converged.
pub fn run_sequential<F: Objective + ?Sized>(f: &F, cfg: &ZeusConfig) -> Result<ZeusResult, ZeusError> {
    cfg.check_objective(f)?;
    let swarm = swarm_phase(f, cfg);
    let tracker = ConvergenceTracker::new(cfg.effective_required());
    let params = cfg.bfgs_params();
    let mut per_run = Vec::new();
    let mut starts = Vec::new();
    for (i, particle) in swarm.particles.iter().enumerate() {
        let outcome = bfgs_run(f, &particle.position, &params, &tracker);
        tracker.record(outcome.status);
        per_run.push(outcome);
        starts.push(i);
        if tracker.stop_raised() {
            break;
        }
    }
    ZeusResult::assemble(per_run, starts, &tracker, swarm.global_best_value)
}
