//! Simulation grids, exact path sampling and Monte-Carlo summaries.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::PathNormals;
use crate::error::{Error, Result};
use crate::law::GbmLaw;

/// Time grid and sample size of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathGrid {
    pub t0: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub n_paths: usize,
    pub seed: u64,
}

impl PathGrid {
    pub fn new(t0: f64, dt: f64, n_steps: usize, n_paths: usize, seed: u64) -> Result<Self> {
        let g = Self {
            t0,
            dt,
            n_steps,
            n_paths,
            seed,
        };
        g.validate()?;
        Ok(g)
    }

    /// Smallest grid of step `dt` that reaches `t_end`.
    pub fn covering(t0: f64, t_end: f64, dt: f64, n_paths: usize, seed: u64) -> Result<Self> {
        if !(t_end > t0) || !(dt > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "need t_end > t0 and dt > 0, got t0={t0}, t_end={t_end}, dt={dt}"
            )));
        }
        let steps = ((t_end - t0) / dt * (1.0 - 1e-12)).ceil() as usize;
        Self::new(t0, dt, steps.max(1), n_paths, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !self.t0.is_finite() {
            return Err(Error::InvalidGrid("t0 must be finite".into()));
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidGrid("n_steps must be at least 1".into()));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidGrid("n_paths must be at least 1".into()));
        }
        Ok(())
    }

    /// Time of grid point `k`.
    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n_steps)
    }
}

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Summarises samples in index order, so the result does not depend on
    /// how they were produced.
    pub fn from_samples(samples: &[f64], seed: u64) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_err = if n > 1 {
            let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std_err,
            n: n as u64,
            seed,
        }
    }

    /// `|mean − target|` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target).abs() / self.std_err
    }
}

/// Evaluates `f` for every path index in parallel and returns the results in
/// index order.
pub(crate) fn per_path<T, F>(n_paths: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..n_paths as u64).into_par_iter().map(f).collect()
}

/// Simulated surplus values, one row of `n_steps + 1` points per path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathArray {
    pub times: Vec<f64>,
    pub n_paths: usize,
    values: Vec<f64>,
}

impl PathArray {
    pub fn path(&self, i: usize) -> &[f64] {
        let w = self.times.len();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Exact sampling: `X(t_k) = x0·exp{log_drift·(t_k − t0) + |v|·√dt·Σ z}`.
///
/// `vᵀΔW` is drawn as a single normal with variance `|v|²·dt`, which has the
/// same law as the vector form, so one variate per step suffices for any
/// number of assets.
pub fn sample_paths(law: &GbmLaw, x0: f64, grid: &PathGrid) -> Result<PathArray> {
    grid.validate()?;
    if !(x0 > 0.0) {
        return Err(Error::NonPositiveStart { x0 });
    }
    let n = grid.n_steps;
    let sd = (law.var_rate() * grid.dt).sqrt();
    let rows = per_path(grid.n_paths, |i| {
        let mut z = PathNormals::new(grid.seed, i);
        let mut row = Vec::with_capacity(n + 1);
        row.push(x0);
        let mut w = 0.0;
        for k in 1..=n {
            w += z.next_normal();
            row.push(x0 * (law.log_drift * (k as f64 * grid.dt) + sd * w).exp());
        }
        row
    });
    Ok(PathArray {
        times: (0..=n).map(|k| grid.time(k)).collect(),
        n_paths: grid.n_paths,
        values: rows.concat(),
    })
}
