//! Hybrid particle-swarm / BFGS multistart optimizer.
//!
//! The crate is `no_std` (it needs `alloc`) and carries the numerical core:
//! dual-number forward-mode differentiation, the benchmark objectives, an
//! Armijo backtracking line search, BFGS with an explicit inverse-Hessian
//! update, the swarm phase, counter-based random streams, a sequential
//! multistart driver and the binned chi-square fitting objective.
//!
//! Threads, timing, file formats and the CLI live in the `zeus` crate.

#![no_std]
// Negated float comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod autodiff;
pub mod bfgs;
pub mod driver;
pub mod error;
pub mod fitting;
pub mod linalg;
pub mod linesearch;
pub mod objectives;
pub mod pso;
pub mod scalar;
pub mod streams;

pub use autodiff::{forward_gradient, Dual};
pub use bfgs::{bfgs_run, BfgsOutcome, BfgsParams, BfgsStatus, InverseHessian, NeverStop, StopProbe};
pub use driver::{reduce_best, ConvergenceTracker, ZeusConfig, ZeusResult};

pub use error::{ConfigError, DomainError, ZeusError};
pub use linesearch::{armijo_search, LineSearchParams};
pub use objectives::{Benchmark, Objective, ObjectiveSpec};
pub use pso::{PsoParams, SwarmState};

pub use scalar::Scalar;
pub use streams::{make_start_streams, StartStreams, Stream};
