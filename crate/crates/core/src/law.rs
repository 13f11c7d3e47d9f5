//! Exact law of the equilibrium surplus, a geometric Brownian motion.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

/// Probability measure under which a surplus law is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// The reference model.
    Reference,
    /// The union's worst-case model.
    WorstCaseUnion,
    /// The firm's worst-case model.
    WorstCaseFirm,
}

impl Measure {
    pub const ALL: [Measure; 3] = [
        Measure::Reference,
        Measure::WorstCaseUnion,
        Measure::WorstCaseFirm,
    ];
}

/// `X(t) = X(0)·exp{log_drift·t + vol_vecᵀW(t)}` for a standard Brownian
/// motion `W` under `measure`.
#[derive(Debug, Clone, PartialEq)]
pub struct GbmLaw {
    pub log_drift: f64,
    pub vol_vec: DVector<f64>,
    pub measure: Measure,
}

impl GbmLaw {
    pub fn new(log_drift: f64, vol_vec: DVector<f64>, measure: Measure) -> Self {
        Self {
            log_drift,
            vol_vec,
            measure,
        }
    }

    /// Instantaneous variance of `log X` per unit time.
    pub fn var_rate(&self) -> f64 {
        self.vol_vec.dot(&self.vol_vec)
    }

    /// Drift of `dX/X`.
    pub fn sde_drift(&self) -> f64 {
        self.log_drift + 0.5 * self.var_rate()
    }

    /// Exponential growth rate of `E[X(t)^p]`.
    pub fn moment_growth(&self, p: f64) -> f64 {
        p * self.log_drift + 0.5 * p * p * self.var_rate()
    }
}
