//! Experiment execution and worker-scaling measurements.

use zeus_core::bfgs::BfgsStatus;
use zeus_core::linalg::distance;
use zeus_core::{Benchmark, Objective, ZeusConfig, ZeusResult};

use crate::driver::zeus_run;
use crate::error::Result;
use crate::output::RunRecord;
use crate::plan::{ExperimentPlan, GridPoint};

/// Distance below which a run counts as a correct solution.
pub const CORRECT_RADIUS: f64 = 0.5;
/// Stricter optional correctness radius.
pub const STRICT_RADIUS: f64 = 1e-6;
/// Minimum repetitions per worker count in [`speedup_study`].
pub const MIN_TIMING_REPS: usize = 5;

/// Summarize one driver result against the objective's known optimum.
pub fn summarize(
    experiment: &str,
    objective: &Benchmark,
    cfg: &ZeusConfig,
    rep: usize,
    result: &ZeusResult,
) -> RunRecord {
    let optimum = objective
        .spec()
        .known_optimum
        .expect("registered benchmarks have known optima")
        .location;
    let valid = || result.per_run.iter().filter(|o| o.status != BfgsStatus::DomainError);
    let correct_within = |radius: f64| valid().filter(|o| distance(&o.x_final, &optimum) < radius).count();
    RunRecord {
        experiment: experiment.to_owned(),
        objective: objective.name().to_owned(),
        dim: cfg.dim,
        particles: cfg.particles,
        iter_pso: cfg.pso.iterations,
        iter_bfgs: cfg.bfgs_iterations,
        required_c: cfg.required_convergences,
        workers: cfg.workers,
        seed: cfg.seed,
        rep,
        wall_time_s: result.wall_time,
        best_f: result.best.f_final,
        best_point: result.best.x_final.clone(),
        euclid_error: distance(&result.best.x_final, &optimum),
        n_correct: correct_within(CORRECT_RADIUS),
        n_correct_strict: correct_within(STRICT_RADIUS),
        converged: result.count(BfgsStatus::Converged),
        diverged: result.count(BfgsStatus::Diverged),
        stopped: result.count(BfgsStatus::Stopped),
        domain_error: result.count(BfgsStatus::DomainError),
    }
}

/// Execute one grid point with seed `base + rep`.
pub fn run_point(point: &GridPoint, rep: usize) -> Result<RunRecord> {
    let mut cfg = point.config.clone();
    cfg.seed = cfg.seed.wrapping_add(rep as u64);
    let result = zeus_run(&point.objective, &cfg)?;
    Ok(summarize(&point.experiment, &point.objective, &cfg, rep, &result))
}

/// Run every grid point `repetitions` times, handing each record to `sink`
/// as soon as it is complete. The whole grid is validated before the first
/// run starts.
pub fn run_experiment<S>(plan: &ExperimentPlan, mut sink: S) -> Result<Vec<RunRecord>>
where
    S: FnMut(&RunRecord) -> Result<()>,
{
    let grid = plan.grid()?;
    let mut records = Vec::with_capacity(grid.len() * plan.repetitions);
    for point in &grid {
        for rep in 0..plan.repetitions {
            let record = run_point(point, rep)?;
            sink(&record)?;
            records.push(record);
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SpeedupRow {
    pub workers: usize,
    /// Median wall time in seconds.
    pub wall_time: f64,
    /// Median wall time at one worker divided by `wall_time`.
    pub speedup: f64,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median wall time of `reps` executions of `cfg` with `workers` threads.
pub fn median_wall_time<F>(f: &F, cfg: &ZeusConfig, workers: usize, reps: usize) -> Result<f64>
where
    F: Objective + Sync + ?Sized,
{
    let cfg = ZeusConfig { workers, ..cfg.clone() };
    let mut times = (0..reps)
        .map(|_| zeus_run(f, &cfg).map(|r| r.wall_time))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(median(&mut times))
}

/// Wall-time medians (at least [`MIN_TIMING_REPS`] repetitions each) and
/// speedups relative to a single worker, all with the same seed.
pub fn speedup_study<F>(f: &F, cfg: &ZeusConfig, worker_counts: &[usize], reps: usize) -> Result<Vec<SpeedupRow>>
where
    F: Objective + Sync + ?Sized,
{
    let reps = reps.max(MIN_TIMING_REPS);
    let baseline = median_wall_time(f, cfg, 1, reps)?;
    worker_counts
        .iter()
        .map(|&w| {
            let wall_time = if w == 1 {
                baseline
            } else {
                median_wall_time(f, cfg, w, reps)?
            };
            Ok(SpeedupRow {
                workers: w,
                wall_time,
                speedup: baseline / wall_time,
            })
        })
        .collect()
}
