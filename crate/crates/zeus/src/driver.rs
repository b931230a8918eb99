//! Timed multistart driver with a worker pool.
//!
//! `workers == 0` runs the sequential driver from `zeus_core`. Otherwise the
//! swarm phase and the local runs are spread over a dedicated rayon pool:
//!
//! * each sweep updates particles in parallel against the global best of the
//!   previous barrier, then reduces the new global best in index order, so
//!   the swarm is bit-identical for every worker count;
//! * local runs share a [`ConvergenceTracker`]; a run whose convergence
//!   brings the counter to the target raises the stop flag, in-flight runs
//!   observe it before their next step. Every particle gets a run, so a run
//!   picked up after the flag was raised ends as stopped at its swarm
//!   position, as it would on hardware where all runs are resident at once.

use std::time::Instant;

use rayon::prelude::*;
use zeus_core::bfgs::{bfgs_run, BfgsOutcome};
use zeus_core::driver::run_sequential;
use zeus_core::pso::{init_particle, step_particle, Particle, SwarmState};
use zeus_core::streams::make_start_streams;
use zeus_core::{ConvergenceTracker, Objective, ZeusConfig, ZeusError, ZeusResult};

/// Run the full pipeline and record wall-clock time.
pub fn zeus_run<F>(f: &F, cfg: &ZeusConfig) -> Result<ZeusResult, ZeusError>
where
    F: Objective + Sync + ?Sized,
{
    cfg.check_objective(f)?;
    let start = Instant::now();
    let mut result = if cfg.workers == 0 {
        run_sequential(f, cfg)?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .expect("failed to build worker pool");
        pool.install(|| run_parallel(f, cfg))?
    };
    result.wall_time = start.elapsed().as_secs_f64();
    Ok(result)
}

/// Swarm initialization and sweeps on the current rayon pool.
pub fn parallel_swarm_phase<F>(f: &F, cfg: &ZeusConfig) -> SwarmState
where
    F: Objective + Sync + ?Sized,
{
    let streams = make_start_streams(cfg.seed, cfg.particles, cfg.dim);
    let particles: Vec<Particle> = (0..cfg.particles)
        .into_par_iter()
        .map(|i| init_particle(f, &streams.stream(i), cfg.dim, cfg.lower, cfg.upper))
        .collect();
    let mut swarm = SwarmState::from_particles(particles);
    for _ in 0..cfg.pso.iterations {
        let sweep = swarm.sweeps;
        let global_best = &swarm.global_best_position;
        swarm
            .particles
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, p)| step_particle(f, p, &streams.stream(i), sweep, &cfg.pso, global_best));
        swarm.sweeps += 1;
        swarm.refresh_global_best();
    }
    swarm
}

fn run_parallel<F>(f: &F, cfg: &ZeusConfig) -> Result<ZeusResult, ZeusError>
where
    F: Objective + Sync + ?Sized,
{
    let swarm = parallel_swarm_phase(f, cfg);
    let tracker = ConvergenceTracker::new(cfg.effective_required());
    let params = cfg.bfgs_params();
    let per_run: Vec<BfgsOutcome> = swarm
        .particles
        .par_iter()
        .map(|p| {
            let outcome = bfgs_run(f, &p.position, &params, &tracker);
            tracker.record(outcome.status);
            outcome
        })
        .collect();
    let starts = (0..per_run.len()).collect();
    ZeusResult::assemble(per_run, starts, &tracker, swarm.global_best_value)
}
