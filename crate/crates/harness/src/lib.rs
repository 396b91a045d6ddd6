//! Operational surface for the uncertainty-bound library: JSON run
//! configuration, seeded random sampling, time sweeps, fuzz campaigns,
//! derivative-free saturation search, and CSV/JSON emission.
//!
//! Every mode is a pure function of its [`config::RunConfig`], seeds
//! included. Fuzz trials, sweep rows, and search restarts may run in
//! parallel (the default `parallel` feature); worker count never changes
//! output content because each unit of work derives its own seed and
//! results are assembled in index order.

pub mod config;
pub mod emit;
pub mod error;
pub mod exec;
pub mod fuzz;
pub mod sample;
pub mod search;
pub mod sweep;

pub use config::{load_config, BuiltScenario, Mode, RunConfig, Scenario};
pub use error::HarnessError;
pub use fuzz::{run_fuzz, run_fuzz_sequential, FuzzReport, Violation};
pub use sample::{child_seed, mix64, sample_haar_state, sample_hermitian};
pub use search::find_min_slack;
pub use sweep::{run_check, run_sweep, CheckOutcome, TimeTrace, TraceRow};
