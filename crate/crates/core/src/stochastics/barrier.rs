//! Monte-Carlo estimate of the firm's barrier payoff: the indicator of
//! reaching the upper level first plus the entropy penalty accrued before
//! exit, with barrier monitoring at grid points.

use serde::{Deserialize, Serialize};

use super::paths::{per_path, McEstimate, PathGrid};
use super::payoff::penalty_rate;
use super::rng::PathNormals;
use crate::error::{Error, Result};
use crate::game_two::{wealth_law_g2, Barriers, GameTwoSolution};
use crate::law::Measure;
use crate::market::{Preferences, ValidatedMarket};

/// Default step for barrier monitoring (years).
pub const DEFAULT_BARRIER_DT: f64 = 1.0 / 2000.0;
/// Default horizon cap for a barrier path (years).
pub const DEFAULT_HORIZON_CAP: f64 = 200.0;
/// Largest admissible share of paths still inside the band at the cap.
pub const MAX_CENSORED_FRACTION: f64 = 1e-3;

/// Estimates for one monitoring step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierEstimate {
    pub dt: f64,
    /// Indicator plus accrued penalty.
    pub payoff: McEstimate,
    /// Indicator of reaching the upper level first, without penalty.
    pub exit_probability: McEstimate,
    /// Paths still inside the band at the horizon cap. They contribute their
    /// accrued penalty and a zero indicator.
    pub censored: u64,
}

/// Barrier payoff at the monitoring step of `grid`; the horizon cap is
/// `grid.n_steps · grid.dt`.
pub fn mc_firm_payoff_g2(
    sol: &GameTwoSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    bar: &Barriers,
    grid: &PathGrid,
) -> Result<BarrierEstimate> {
    let mut out = mc_firm_payoff_g2_ladder(sol, m, p, bar, grid, &[1])?;
    Ok(out.remove(0))
}

/// Runs several monitoring steps on the same Brownian increments. Level `f`
/// monitors the barrier and accrues the penalty at every `f`-th point of
/// `grid`, i.e. with step `f · grid.dt`, so the levels differ only through
/// discretisation.
pub fn mc_firm_payoff_g2_ladder(
    sol: &GameTwoSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    bar: &Barriers,
    grid: &PathGrid,
    coarsening: &[usize],
) -> Result<Vec<BarrierEstimate>> {
    let levels = run_ladder(sol, m, p, bar, grid, coarsening)?;
    let limit = (MAX_CENSORED_FRACTION * grid.n_paths as f64).floor() as u64;
    for lv in &levels {
        if lv.censored > limit {
            return Err(Error::ExcessiveCensoring {
                censored: lv.censored,
                n: grid.n_paths as u64,
                limit: MAX_CENSORED_FRACTION,
            });
        }
    }
    Ok(levels)
}

/// Same as the ladder but never fails on censoring; the caller inspects the
/// counts.
pub fn run_ladder(
    sol: &GameTwoSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    bar: &Barriers,
    grid: &PathGrid,
    coarsening: &[usize],
) -> Result<Vec<BarrierEstimate>> {
    grid.validate()?;
    if coarsening.is_empty() || coarsening.iter().any(|&f| f == 0 || f > grid.n_steps) {
        return Err(Error::InvalidGrid(format!(
            "coarsening factors must lie in 1..={}, got {coarsening:?}",
            grid.n_steps
        )));
    }
    let law = wealth_law_g2(sol, m, p, Measure::WorstCaseFirm);
    let n_levels = coarsening.len();
    let dt = grid.dt;
    let step_drift = law.log_drift * dt;
    let step_sd = (law.var_rate() * dt).sqrt();
    let (lo, hi) = (bar.lower().ln(), bar.upper().ln());
    let power = 1.0 - sol.firm_exponent;
    // W_Fbar(x) + c = x^power / (v^power − l^power)
    let scale = 1.0 / (bar.upper().powf(power) - bar.lower().powf(power));
    let rate = penalty_rate(sol.firm_distortion.norm_squared(), p.mu()) * scale;
    let weights: Vec<f64> = coarsening.iter().map(|&f| f as f64 * dt * rate).collect();
    let x0_log = bar.start().ln();

    // Per path and level: (payoff, indicator, censored).
    let samples = per_path(grid.n_paths, |i| {
        let mut z = PathNormals::new(grid.seed, i);
        let mut acc = vec![0.0; n_levels];
        let mut hit = vec![0.0; n_levels];
        let mut active = vec![true; n_levels];
        let mut remaining = n_levels;
        let pen0 = (power * x0_log).exp();
        for j in 0..n_levels {
            acc[j] = weights[j] * pen0;
        }
        let mut y = x0_log;
        let mut k = 0;
        while remaining > 0 && k < grid.n_steps {
            k += 1;
            y += step_drift + step_sd * z.next_normal();
            let mut pen = None;
            for j in 0..n_levels {
                if !active[j] || k % coarsening[j] != 0 {
                    continue;
                }
                if y <= lo || y >= hi {
                    active[j] = false;
                    remaining -= 1;
                    if y >= hi {
                        hit[j] = 1.0;
                    }
                } else if rate != 0.0 {
                    let v = *pen.get_or_insert_with(|| (power * y).exp());
                    acc[j] += weights[j] * v;
                }
            }
        }
        // Levels still active here are censored.
        (0..n_levels)
            .map(|j| (acc[j] + hit[j], hit[j], active[j]))
            .collect::<Vec<_>>()
    });

    let mut out = Vec::with_capacity(n_levels);
    let mut payoff = vec![0.0; grid.n_paths];
    let mut indicator = vec![0.0; grid.n_paths];
    for j in 0..n_levels {
        let mut censored = 0u64;
        for (i, s) in samples.iter().enumerate() {
            payoff[i] = s[j].0;
            indicator[i] = s[j].1;
            censored += s[j].2 as u64;
        }
        out.push(BarrierEstimate {
            dt: coarsening[j] as f64 * dt,
            payoff: McEstimate::from_samples(&payoff, grid.seed),
            exit_probability: McEstimate::from_samples(&indicator, grid.seed),
            censored,
        });
    }
    Ok(out)
}

/// Grid with the default step and horizon cap.
pub fn default_barrier_grid(n_paths: usize, seed: u64) -> Result<PathGrid> {
    PathGrid::covering(0.0, DEFAULT_HORIZON_CAP, DEFAULT_BARRIER_DT, n_paths, seed)
}
