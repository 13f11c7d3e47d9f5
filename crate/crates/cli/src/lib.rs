//! Batch front-end for the pension surplus games.
//!
//! A scenario file fixes the market, the preferences, the game and the
//! optional simulation, sweep and verification settings. [`run`] executes
//! one command on it and writes JSON and CSV artifacts plus a run report.
//!
//! Exit codes: 0 success, 1 unreadable or invalid input, 2 infeasible
//! scenario, 3 failed verification.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{execute, run, Command, RunOptions, RunReport, Scenario, Session};
pub use config::{GameChoice, ScenarioConfig};
pub use error::CliError;
