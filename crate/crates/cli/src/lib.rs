//! Experiment runner for Hilbert-metric nonexpansive dynamics.
//!
//! The binary front end exposes four subcommands:
//!
//! - `run`: execute one JSON experiment config, emitting `orbit.csv`,
//!   `report.json`, and (planar bodies, on request) `orbit.svg`;
//! - `sweep`: run every config in a directory in parallel and tabulate
//!   `summary.csv`;
//! - `metric`: print one Hilbert distance;
//! - `validate`: run the built-in oracle suites against the benchmark
//!   catalog.
//!
//! Exit codes: 0 ok, 1 config error, 2 runtime error, 3 validation failure.

pub mod config;
pub mod emit;
pub mod runner;
pub mod sweep;
pub mod validate;

/// Thread cap honored by sweep-level parallelism.
pub const THREADS_ENV: &str = "HILBERT_DYN_THREADS";
