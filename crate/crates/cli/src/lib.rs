//! Scenario orchestration for the uptilt simulator: configuration loading,
//! scheme execution, and deterministic CSV/JSON artifact export.
//!
//! The binary in this crate wires command-line flags to [`scenario::Scenario`]
//! values, hands them to the run functions in [`runner`], and writes the
//! resulting [`runner::RunArtifact`] to disk through [`export`]. Everything
//! here is deterministic for a fixed seed: reruns produce byte-identical
//! files regardless of thread count.

pub mod export;
pub mod runner;
pub mod scenario;

pub use export::export_artifact;
pub use runner::{run_compare, run_gue_sweep, run_nt_sweep, run_oracle, run_scheme, RunArtifact};
pub use scenario::{load_config, Scenario};
