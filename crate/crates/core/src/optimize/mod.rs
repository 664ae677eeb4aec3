//! Max–min uptilt-angle optimization.
//!
//! The objective is the worst-case uncoordinated-slot SIR over the aerial
//! grid, in dB, as a function of the per-site uptilt angles. This module
//! provides the objective itself ([`objective_db`]), reference schemes
//! (downtilt-only, random, best common angle), a genetic algorithm with an
//! optional coordinate-wise refinement stage, particle-swarm optimization,
//! and an exhaustive oracle for small quantized instances.
//!
//! Every scheme is deterministic for a fixed seed: random draws happen in
//! single-threaded steps, and candidate evaluations — which may run in
//! parallel — consume no randomness.

mod baseline;
mod ga;
mod local_search;
mod oracle;
mod problem;
mod pso;

pub use baseline::{baseline_dt_only, baseline_random, baseline_single, DtOnlyField};
pub use ga::{ga_optimize, hybrid_ga, GaParams};
pub use local_search::{local_refine, LocalSearchParams};
pub use oracle::{brute_force_oracle, ORACLE_COMBINATION_LIMIT};
pub use problem::{objective_db, Evaluator, OptimizerReport, Scheme, TiltBounds, TiltProblem, TiltVector};
pub use pso::{pso_optimize, PsoParams};
