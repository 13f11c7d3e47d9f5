//! Closed-form equilibrium of the barrier game, where the firm maximises the
//! robust probability that the surplus reaches an upper level before a lower
//! one while the union keeps its discounted-utility objective.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::{GbmLaw, Measure};
use crate::market::{Preferences, ValidatedMarket};

/// Guard on the firm ambiguity aversion around its excluded value 1.
pub const MU_ONE_EPS: f64 = 1e-12;
/// Exponents this close to 1 are rejected.
pub const ETA_ONE_EPS: f64 = 1e-10;

/// Lower and upper surplus levels plus the starting surplus between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BarrierValues", into = "BarrierValues")]
pub struct Barriers {
    lower: f64,
    upper: f64,
    start: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarrierValues {
    pub l: f64,
    pub v: f64,
    pub x0: f64,
}

impl TryFrom<BarrierValues> for Barriers {
    type Error = Error;

    fn try_from(b: BarrierValues) -> Result<Self> {
        Barriers::new(b.l, b.v, b.x0)
    }
}

impl From<Barriers> for BarrierValues {
    fn from(b: Barriers) -> Self {
        BarrierValues {
            l: b.lower,
            v: b.upper,
            x0: b.start,
        }
    }
}

impl Barriers {
    pub fn new(lower: f64, upper: f64, start: f64) -> Result<Self> {
        let ok = lower.is_finite()
            && upper.is_finite()
            && start.is_finite()
            && 0.0 < lower
            && lower < start
            && start < upper;
        if !ok {
            return Err(Error::InvalidBarriers {
                l: lower,
                x0: start,
                v: upper,
            });
        }
        Ok(Self {
            lower,
            upper,
            start,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }
    pub fn upper(&self) -> f64 {
        self.upper
    }
    pub fn start(&self) -> f64 {
        self.start
    }
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Robust Nash equilibrium of the barrier game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameTwoSolution {
    /// Discriminant of the quadratic for the effective aversion.
    pub discriminant: f64,
    /// Effective aversion scaling the firm's risky holdings.
    pub effective_aversion: f64,
    /// Exponent of the firm's value function.
    pub firm_exponent: f64,
    /// Coefficient of the union value function.
    pub union_value_coef: f64,
    /// Additive constant of the firm's entropy penalty.
    pub penalty_offset: f64,
    pub benefit_ratio: f64,
    pub invest_ratio: DVector<f64>,
    pub union_distortion: DVector<f64>,
    pub firm_distortion: DVector<f64>,
    /// Decay rate of the union's discounted utility moment under its
    /// worst-case law. The union payoff integral converges only when positive.
    pub union_moment_decay: f64,
}

/// Solves the barrier game. Only the `+√Δ` root of the quadratic is used; the
/// other root is discarded.
pub fn solve_game_two(
    m: &ValidatedMarket,
    p: &Preferences,
    bar: &Barriers,
) -> Result<GameTwoSolution> {
    let (alpha, gamma, lambda, mu) = (p.alpha(), p.gamma(), p.lambda(), p.mu());
    let r = m.r();
    let th2 = m.theta_sq();
    if !(alpha > r) {
        return Err(Error::RequiresAlphaAboveR { alpha, r });
    }
    if (1.0 - mu).abs() <= MU_ONE_EPS {
        return Err(Error::MuEqualsOne);
    }
    let lin = (1.0 - gamma / 2.0) * th2;
    let disc = lin * lin - 2.0 * (alpha - r) * (1.0 - gamma) * (lambda + gamma) * th2;
    if !(disc > 0.0) {
        return Err(Error::NegativeDiscriminant { disc });
    }
    let omega = (lin + disc.sqrt()) / (2.0 * (alpha - r));
    let eta = (omega - mu) / (1.0 - mu);
    if !(eta > 0.0 && eta < 1.0) || (1.0 - eta).abs() < ETA_ONE_EPS {
        return Err(Error::EtaOutOfRange { eta });
    }

    let benefit_ratio = r + th2 / (2.0 * omega);
    let union_value_coef = benefit_ratio.powf(-gamma);
    let l1 = bar.lower().powf(1.0 - eta);
    let v1 = bar.upper().powf(1.0 - eta);
    let penalty_offset = l1 / (v1 - l1);

    // (1-γ)-moment growth of the surplus under the union's worst-case law.
    let log_drift = r + th2 / omega
        - benefit_ratio
        - th2 / (2.0 * omega * omega)
        - lambda * th2 / (omega * omega);
    let q = 1.0 - gamma;
    let growth = q * log_drift + 0.5 * q * q * th2 / (omega * omega);

    let theta = &m.sharpe().theta;
    Ok(GameTwoSolution {
        discriminant: disc,
        effective_aversion: omega,
        firm_exponent: eta,
        union_value_coef,
        penalty_offset,
        benefit_ratio,
        invest_ratio: m.merton_direction() / omega,
        union_distortion: theta * (lambda / omega),
        firm_distortion: theta * (mu * (1.0 - eta) / omega),
        union_moment_decay: alpha - growth,
    })
}

/// Value functions `(union, firm)` at time `s` and surplus `x`.
pub fn value_functions_g2(
    sol: &GameTwoSolution,
    p: &Preferences,
    bar: &Barriers,
    s: f64,
    x: f64,
) -> Result<(f64, f64)> {
    let wu = union_value_g2(sol, p, s, x)?;
    let wf = firm_value_g2(sol, bar, x)?;
    Ok((wu, wf))
}

pub fn union_value_g2(sol: &GameTwoSolution, p: &Preferences, s: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveSurplus { x });
    }
    let gamma = p.gamma();
    Ok(sol.union_value_coef * (-p.alpha() * s).exp() * x.powf(1.0 - gamma) / (1.0 - gamma))
}

/// Robust probability-like value of the firm; 0 at the lower barrier and 1 at
/// the upper one.
pub fn firm_value_g2(sol: &GameTwoSolution, bar: &Barriers, x: f64) -> Result<f64> {
    if !bar.contains(x) {
        return Err(Error::SurplusOutsideBarriers {
            x,
            l: bar.lower(),
            v: bar.upper(),
        });
    }
    if x == bar.lower() {
        return Ok(0.0);
    }
    if x == bar.upper() {
        return Ok(1.0);
    }
    let e = 1.0 - sol.firm_exponent;
    let l1 = bar.lower().powf(e);
    Ok((x.powf(e) - l1) / (bar.upper().powf(e) - l1))
}

/// Law of the equilibrium surplus under the chosen measure.
pub fn wealth_law_g2(
    sol: &GameTwoSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    measure: Measure,
) -> GbmLaw {
    let th2 = m.theta_sq();
    let w = sol.effective_aversion;
    let reference = m.r() + th2 / w - sol.benefit_ratio - th2 / (2.0 * w * w);
    let shift = match measure {
        Measure::Reference => 0.0,
        Measure::WorstCaseUnion => p.lambda() * th2 / (w * w),
        Measure::WorstCaseFirm => p.mu() * (1.0 - sol.firm_exponent) * th2 / (w * w),
    };
    GbmLaw::new(reference - shift, &m.sharpe().theta / w, measure)
}
