//! Robust equilibria of the surplus-sharing games between a union and a firm
//! in an overfunded defined-benefit pension plan.
//!
//! The closed forms live in [`game_one`] and [`game_two`]; [`stochastics`]
//! checks them independently by simulation, moment formulas and generator
//! residuals, and [`sensitivity`] provides derivatives and parameter sweeps.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod game_one;
pub mod game_two;
pub mod law;
pub mod market;
pub mod sensitivity;
pub mod stochastics;

pub use error::{Error, Result};
pub use game_one::{
    solve_game_one, solve_pareto, value_functions_g1, wealth_law_g1, GameOneSolution,
    ParetoSolution,
};
pub use game_two::{
    solve_game_two, value_functions_g2, wealth_law_g2, BarrierValues, Barriers, GameTwoSolution,
};
pub use law::{GbmLaw, Measure};
pub use market::{
    sharpe, validate_market, MarketParams, PreferenceValues, Preferences, SharpeInfo,
    ValidatedMarket,
};

#[cfg(test)]
#[path = "../tests/support/oracle.rs"]
mod oracle;
