//! Experiment plans read from TOML.
//!
//! ```toml
//! repetitions = 20
//!
//! [[experiment]]
//! id = "dims"
//! objective = "rastrigin"
//! dim = [2, 3, 5]
//! particles = 10000
//! iter_pso = 5
//! required_c = 100
//! ```
//!
//! `dim`, `particles`, `iter_pso`, `required_c` and `workers` accept either a
//! single integer or a list; each experiment expands to the cartesian product
//! of its axes. Remaining keys mirror [`ZeusConfig`] and fall back to the
//! objective's defaults.

use std::path::Path;

use serde::Deserialize;
use zeus_core::{Benchmark, ConfigError, ZeusConfig};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    One(usize),
    Many(Vec<usize>),
}

impl Axis {
    pub fn values(&self) -> Vec<usize> {
        match self {
            Axis::One(v) => vec![*v],
            Axis::Many(v) => v.clone(),
        }
    }
}

impl From<usize> for Axis {
    fn from(v: usize) -> Self {
        Axis::One(v)
    }
}

impl From<Vec<usize>> for Axis {
    fn from(v: Vec<usize>) -> Self {
        Axis::Many(v)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub id: String,
    pub objective: String,
    pub dim: Axis,
    #[serde(default = "default_particles")]
    pub particles: Axis,
    #[serde(default = "default_iter_pso")]
    pub iter_pso: Axis,
    #[serde(default = "default_required")]
    pub required_c: Axis,
    #[serde(default = "default_workers")]
    pub workers: Axis,
    pub iter_bfgs: Option<usize>,
    pub iter_ls: Option<usize>,
    pub theta: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub w: Option<f64>,
    pub c1_pso: Option<f64>,
    pub c2_pso: Option<f64>,
    pub c1_armijo: Option<f64>,
    #[serde(default)]
    pub deterministic: bool,
}

fn default_particles() -> Axis {
    Axis::One(1024)
}

fn default_iter_pso() -> Axis {
    Axis::One(5)
}

fn default_required() -> Axis {
    Axis::One(100)
}

fn default_workers() -> Axis {
    Axis::One(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    #[serde(default = "default_repetitions")]
    repetitions: usize,
    #[serde(rename = "experiment", default)]
    experiments: Vec<ExperimentSpec>,
}

fn default_repetitions() -> usize {
    1
}

/// A parsed plan plus the base seed; repetition `r` uses seed `seed + r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub repetitions: usize,
    pub seed: u64,
    pub experiments: Vec<ExperimentSpec>,
}

/// One grid point of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub experiment: String,
    pub objective: Benchmark,
    pub config: ZeusConfig,
}

impl ExperimentPlan {
    pub fn parse(text: &str, seed: u64) -> Result<Self> {
        let file: PlanFile = toml::from_str(text).map_err(|e| Error::Plan(e.to_string()))?;
        if file.repetitions == 0 {
            return Err(Error::Plan("repetitions must be at least 1".into()));
        }
        Ok(Self {
            repetitions: file.repetitions,
            seed,
            experiments: file.experiments,
        })
    }

    pub fn load(path: &Path, seed: u64) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, seed)
    }

    /// Expand every experiment into grid points and validate all of them.
    /// Seeds are left at the base seed.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        let mut out = Vec::new();
        for spec in &self.experiments {
            for dim in spec.dim.values() {
                let objective = Benchmark::from_name(&spec.objective, dim)?;
                for particles in spec.particles.values() {
                    for iter_pso in spec.iter_pso.values() {
                        for required in spec.required_c.values() {
                            for workers in spec.workers.values() {
                                let config =
                                    spec.config(&objective, particles, iter_pso, required, workers, self.seed)?;
                                out.push(GridPoint {
                                    experiment: spec.id.clone(),
                                    objective,
                                    config,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

impl ExperimentSpec {
    fn config(
        &self,
        objective: &Benchmark,
        particles: usize,
        iter_pso: usize,
        required: usize,
        workers: usize,
        seed: u64,
    ) -> Result<ZeusConfig, ConfigError> {
        let mut cfg = ZeusConfig::for_benchmark(objective);
        cfg.particles = particles;
        cfg.pso.iterations = iter_pso;
        cfg.required_convergences = required;
        cfg.workers = workers;
        cfg.seed = seed;
        cfg.deterministic = self.deterministic;
        if let Some(v) = self.iter_bfgs {
            cfg.bfgs_iterations = v;
        }
        if let Some(v) = self.iter_ls {
            cfg.line_search.max_iter = v;
        }
        if let Some(v) = self.theta {
            cfg.theta = v;
        }
        if let Some(v) = self.lower {
            cfg.lower = v;
        }
        if let Some(v) = self.upper {
            cfg.upper = v;
        }
        if let Some(v) = self.w {
            cfg.pso.w = v;
        }
        if let Some(v) = self.c1_pso {
            cfg.pso.c1 = v;
        }
        if let Some(v) = self.c2_pso {
            cfg.pso.c2 = v;
        }
        if let Some(v) = self.c1_armijo {
            cfg.line_search.c1 = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
