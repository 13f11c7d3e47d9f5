//! Independent numerical checks of the closed forms: exact path simulation,
//! moment and exit-probability formulas, Monte-Carlo payoff estimators and
//! HJBI generator residuals.
//!
//! Every path draws from its own counter-based stream keyed by
//! `(seed, path index)`, and reductions run in index order, so results do
//! not depend on the number of worker threads.

pub mod barrier;
pub mod hjbi;
pub mod moments;
pub mod paths;
pub mod payoff;
pub mod rng;

pub use barrier::{
    default_barrier_grid, mc_firm_payoff_g2, mc_firm_payoff_g2_ladder, run_ladder, BarrierEstimate,
    DEFAULT_BARRIER_DT, DEFAULT_HORIZON_CAP, MAX_CENSORED_FRACTION,
};
pub use hjbi::{check_game, hjbi_grid_check, hjbi_scan, Candidate, HjbiGrid, HjbiReport, Player};
pub use moments::{exit_probability_gbm, gbm_moment};
pub use paths::{sample_paths, McEstimate, PathArray, PathGrid};
pub use payoff::{
    analytic_payoff_g1, mc_payoff_firm_g1, mc_payoff_g1, mc_payoff_union_g1, min_horizon,
    tail_fraction, Side, DEFAULT_TAIL_LIMIT,
};
pub use rng::PathNormals;
