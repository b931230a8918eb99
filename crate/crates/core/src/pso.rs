//! Particle-swarm phase that moves random starts toward promising regions
//! before local refinement.
//!
//! Velocities follow `v' = w·v + c₁ r₁∘(p − x) + c₂ r₂∘(g − x)` with `r₁`,
//! `r₂` drawn per coordinate. Within a sweep every particle sees the global
//! best from the previous barrier; the global best is recomputed by a
//! lowest-index-wins reduction after the sweep. Positions are not clamped.
//!
//! The per-particle functions are public so a threaded driver can run a sweep
//! in parallel and still reproduce the sequential result bit for bit.

use alloc::vec::Vec;

use crate::error::ConfigError;
use crate::objectives::Objective;
use crate::streams::{StartStreams, Stream};

const INIT_POSITION: u64 = 0;
const INIT_VELOCITY: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoParams {
    /// Inertia weight.
    pub w: f64,
    /// Cognitive coefficient.
    pub c1: f64,
    /// Social coefficient.
    pub c2: f64,
    /// Number of sweeps.
    pub iterations: usize,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            w: 0.5,
            c1: 1.2,
            c2: 1.5,
            iterations: 5,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite = self.w.is_finite() && self.c1.is_finite() && self.c2.is_finite();
        if !finite || self.w < 0.0 || self.c1 < 0.0 || self.c2 < 0.0 {
            return Err(ConfigError::Pso("coefficients must be finite and non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub particles: Vec<Particle>,
    pub global_best_position: Vec<f64>,
    pub global_best_value: f64,
    /// Completed sweeps.
    pub sweeps: usize,
}

/// Counter slots used by sweep `sweep` for `r₁` and `r₂`.
#[inline]
fn sweep_counters(sweep: usize) -> (u64, u64) {
    let base = 2 + 2 * sweep as u64;
    (base, base + 1)
}

/// Uniform position in the box, uniform velocity in `±(upper − lower)`.
pub fn init_particle<F: Objective + ?Sized>(f: &F, stream: &Stream, dim: usize, lower: f64, upper: f64) -> Particle {
    let span = upper - lower;
    let position: Vec<f64> = (0..dim)
        .map(|d| stream.uniform_in(INIT_POSITION, d as u64, lower, upper))
        .collect();
    let velocity = (0..dim)
        .map(|d| stream.uniform_in(INIT_VELOCITY, d as u64, -span, span))
        .collect();
    let best_value = f.value(&position);
    Particle {
        best_position: position.clone(),
        position,
        velocity,
        best_value,
    }
}

/// Velocity/position update for one particle during sweep `sweep`.
pub fn step_particle<F: Objective + ?Sized>(
    f: &F,
    particle: &mut Particle,
    stream: &Stream,
    sweep: usize,
    params: &PsoParams,
    global_best: &[f64],
) {
    let (c_r1, c_r2) = sweep_counters(sweep);
    let Particle {
        position,
        velocity,
        best_position,
        best_value,
    } = particle;
    for d in 0..position.len() {
        let r1 = stream.uniform(c_r1, d as u64);
        let r2 = stream.uniform(c_r2, d as u64);
        let x = position[d];
        let v =
            params.w * velocity[d] + params.c1 * r1 * (best_position[d] - x) + params.c2 * r2 * (global_best[d] - x);
        velocity[d] = v;
        position[d] = x + v;
    }
    let value = f.value(position);
    if value < *best_value {
        *best_value = value;
        best_position.copy_from_slice(position);
    }
}

impl SwarmState {
    /// Assemble a swarm and reduce its global best.
    pub fn from_particles(particles: Vec<Particle>) -> Self {
        let mut state = Self {
            particles,
            global_best_position: Vec::new(),
            global_best_value: f64::INFINITY,
            sweeps: 0,
        };
        state.refresh_global_best();
        state
    }

    /// Minimum personal best, lowest index on ties. NaN values never win
    /// unless every particle is NaN, in which case particle 0 is kept.
    pub fn refresh_global_best(&mut self) {
        let mut best = 0;
        for (i, p) in self.particles.iter().enumerate().skip(1) {
            let current = self.particles[best].best_value;
            if p.best_value < current || (current.is_nan() && !p.best_value.is_nan()) {
                best = i;
            }
        }
        if let Some(p) = self.particles.get(best) {
            self.global_best_value = p.best_value;
            self.global_best_position.clone_from(&p.best_position);
        }
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = &[f64]> {
        self.particles.iter().map(|p| p.position.as_slice())
    }
}

/// Sequential swarm initialization over `streams.len()` particles.
pub fn init_swarm<F: Objective + ?Sized>(f: &F, lower: f64, upper: f64, streams: &StartStreams) -> SwarmState {
    let particles = (0..streams.len())
        .map(|i| init_particle(f, &streams.stream(i), streams.dim(), lower, upper))
        .collect();
    SwarmState::from_particles(particles)
}

/// One sequential sweep followed by the global-best barrier.
pub fn update_swarm<F: Objective + ?Sized>(state: &mut SwarmState, f: &F, params: &PsoParams, streams: &StartStreams) {
    let sweep = state.sweeps;
    let global_best = &state.global_best_position;
    for (i, particle) in state.particles.iter_mut().enumerate() {
        step_particle(f, particle, &streams.stream(i), sweep, params, global_best);
    }
    state.sweeps += 1;
    state.refresh_global_best();
}
