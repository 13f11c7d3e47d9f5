//! Robust payoffs of the benefit/contribution game: closed-form integral and
//! Monte-Carlo estimate with entropy penalty.

use serde::{Deserialize, Serialize};

use super::moments::gbm_moment;
use super::paths::{per_path, McEstimate, PathGrid};
use super::rng::PathNormals;
use crate::error::{Error, Result};
use crate::game_one::{value_functions_g1, wealth_law_g1, GameOneSolution};
use crate::law::{GbmLaw, Measure};
use crate::market::{Preferences, ValidatedMarket};

/// Largest admissible share of the target carried by the analytic tail.
pub const DEFAULT_TAIL_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Union,
    Firm,
}

/// Entropy penalty rate `|h|²/(2·aversion)`, zero when there is no
/// distortion. With zero aversion any distortion is infinitely penalised.
pub fn penalty_rate(h_sq: f64, aversion: f64) -> f64 {
    if h_sq == 0.0 {
        0.0
    } else if aversion == 0.0 {
        f64::INFINITY
    } else {
        h_sq / (2.0 * aversion)
    }
}

/// The running payoff of one side along the equilibrium path is
/// `coef·exp{power·ln X(t) − discount·t}`, distributed under `law`.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffIntegrand {
    pub coef: f64,
    pub power: f64,
    pub discount: f64,
    pub law: GbmLaw,
}

impl PayoffIntegrand {
    pub fn of(sol: &GameOneSolution, m: &ValidatedMarket, p: &Preferences, side: Side) -> Self {
        match side {
            Side::Union => {
                let q = 1.0 - p.gamma();
                let rate = penalty_rate(sol.union_distortion.norm_squared(), p.lambda());
                // Utility of the benefit plus the value-weighted entropy penalty.
                let coef = (sol.benefit_ratio.powf(q) + q * rate * sol.union_value_coef) / q;
                Self {
                    coef,
                    power: q,
                    discount: p.alpha(),
                    law: wealth_law_g1(sol, m, p, Measure::WorstCaseUnion),
                }
            }
            Side::Firm => {
                let q = 1.0 - p.delta();
                let rate = penalty_rate(sol.firm_distortion.norm_squared(), p.mu());
                let coef = (1.0 + q * rate * sol.firm_value_coef) / q;
                Self {
                    coef,
                    power: q,
                    discount: p.beta(),
                    law: wealth_law_g1(sol, m, p, Measure::WorstCaseFirm),
                }
            }
        }
    }

    /// Growth rate of the undiscounted moment `E[X^power]`.
    pub fn growth(&self) -> f64 {
        self.law.moment_growth(self.power)
    }

    /// Decay rate of the discounted expected integrand; the payoff integral
    /// converges only when it is positive.
    pub fn decay(&self) -> f64 {
        self.discount - self.growth()
    }

    /// `∫_t^∞ E[integrand]` for the process started at `(s, x0)`.
    fn integral_from(&self, s: f64, x0: f64, t: f64) -> Result<f64> {
        let decay = self.decay();
        if !(decay > 0.0) {
            return Err(Error::DivergentIntegral {
                growth: self.growth(),
                discount: self.discount,
            });
        }
        let moment = gbm_moment(&self.law, x0, self.power, t - s)?;
        Ok(self.coef * (-self.discount * t).exp() * moment / decay)
    }
}

/// Closed-form robust payoff `∫_s^∞` of one side, from the moment formula and
/// a geometric discount integral. Equals the value function when the
/// integral converges.
pub fn analytic_payoff_g1(
    sol: &GameOneSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    side: Side,
    s: f64,
    x0: f64,
) -> Result<f64> {
    if !(x0 > 0.0) {
        return Err(Error::NonPositiveSurplus { x: x0 });
    }
    PayoffIntegrand::of(sol, m, p, side).integral_from(s, x0, s)
}

/// Share of the payoff carried beyond `horizon` for a start at time `s`.
pub fn tail_fraction(
    sol: &GameOneSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    side: Side,
    s: f64,
    horizon: f64,
) -> Result<f64> {
    let f = PayoffIntegrand::of(sol, m, p, side);
    let total = f.integral_from(s, 1.0, s)?;
    Ok(f.integral_from(s, 1.0, horizon)? / total)
}

/// Shortest horizon after `s` whose analytic tail is at most `limit` of the
/// payoff.
pub fn min_horizon(
    sol: &GameOneSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    side: Side,
    limit: f64,
) -> Result<f64> {
    let f = PayoffIntegrand::of(sol, m, p, side);
    let decay = f.decay();
    if !(decay > 0.0) {
        return Err(Error::DivergentIntegral {
            growth: f.growth(),
            discount: f.discount,
        });
    }
    Ok((1.0 / limit).ln() / decay)
}

/// Monte-Carlo estimate of one side's robust payoff started at
/// `(grid.t0, x0)`: trapezoidal integral up to the end of the grid plus the
/// analytic tail beyond it.
pub fn mc_payoff_g1(
    sol: &GameOneSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    side: Side,
    x0: f64,
    grid: &PathGrid,
    tail_limit: f64,
) -> Result<McEstimate> {
    grid.validate()?;
    // Checks admissibility of the start value as well.
    value_functions_g1(sol, p, grid.t0, x0)?;
    let f = PayoffIntegrand::of(sol, m, p, side);
    let s = grid.t0;
    let horizon = grid.t_end();
    let total = f.integral_from(s, x0, s)?;
    let tail = f.integral_from(s, x0, horizon)?;
    let fraction = (tail / total).abs();
    if !(fraction <= tail_limit) {
        return Err(Error::TailBoundNotMet {
            tail_fraction: fraction,
            limit: tail_limit,
        });
    }

    let n = grid.n_steps;
    let dt = grid.dt;
    let sd = (f.law.var_rate() * dt).sqrt();
    // exponent_k = base + slope·k + shock·Σz
    let base = f.power * x0.ln() - f.discount * s;
    let slope = (f.power * f.law.log_drift - f.discount) * dt;
    let shock = f.power * sd;
    let samples = per_path(grid.n_paths, |i| {
        let mut z = PathNormals::new(grid.seed, i);
        let mut w = 0.0;
        let mut acc = 0.5 * base.exp();
        for k in 1..n {
            w += z.next_normal();
            acc += (base + slope * k as f64 + shock * w).exp();
        }
        w += z.next_normal();
        acc += 0.5 * (base + slope * n as f64 + shock * w).exp();
        f.coef * acc * dt
    });
    let mut est = McEstimate::from_samples(&samples, grid.seed);
    est.mean += tail;
    Ok(est)
}

pub fn mc_payoff_union_g1(
    sol: &GameOneSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    x0: f64,
    grid: &PathGrid,
) -> Result<McEstimate> {
    mc_payoff_g1(sol, m, p, Side::Union, x0, grid, DEFAULT_TAIL_LIMIT)
}

pub fn mc_payoff_firm_g1(
    sol: &GameOneSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    x0: f64,
    grid: &PathGrid,
) -> Result<McEstimate> {
    mc_payoff_g1(sol, m, p, Side::Firm, x0, grid, DEFAULT_TAIL_LIMIT)
}
