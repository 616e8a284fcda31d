//! Fuel tanker delivery routing.
//!
//! A delivery day is a capacitated vehicle routing problem with delivery
//! deadlines: a homogeneous tanker fleet leaves a single hub (index 0),
//! serves fuel stations before per-station deadlines, and returns. The crate
//! provides:
//!
//! - [`instance`]: problem documents (JSON schema), validation, per-day
//!   demand aggregation, and a seeded random instance generator.
//! - [`feasibility`]: schedule propagation and the violation checker that
//!   every solver output is judged against.
//! - [`construct`]: randomized greedy construction, best-of-R trials.
//! - [`anneal`]: per-route simulated annealing over segment reversals.
//! - [`solver`]: the two-phase heuristic (construction + annealing) per day.
//! - [`exact`]: a branch-and-bound oracle for small instances and an
//!   LP-format model exporter for external MIP solvers.
//! - [`bench`]: repetition harness producing CSV rows and trajectories.
//!
//! Distances are kilometers, travel and service times minutes, demands
//! liters. All randomness flows through [`rng::Rng`], seeded explicitly;
//! identical seeds give identical results on any platform.

pub mod anneal;
pub mod bench;
pub mod construct;
pub mod error;
pub mod exact;
pub mod feasibility;
pub mod instance;
pub mod rng;
pub mod solver;

#[cfg(test)]
pub(crate) mod testkit;

pub use error::Error;
pub use feasibility::{Route, Solution, Violation, ViolationKind};
pub use instance::{DayPlan, Fleet, Instance, LoadPolicy, Matrices, Station};
pub use solver::SolverParams;
