//! Closed-form equilibrium of the infinite-horizon benefit/contribution game
//! and of the cooperative problem that maximises the union's payoff.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::law::{GbmLaw, Measure};
use crate::market::{Preferences, ValidatedMarket};

/// Brackets of absolute size below this are treated as the pole of the firm
/// coefficient.
pub const FIRM_BRACKET_EPS: f64 = 1e-14;

/// Robust Nash equilibrium of the benefit/contribution game.
///
/// Controls are feedback ratios per unit of surplus: the union pays itself
/// `benefit_ratio·x` and the firm holds `invest_ratio·x` in the risky assets.
#[derive(Debug, Clone, PartialEq)]
pub struct GameOneSolution {
    /// Coefficient of the union value function.
    pub union_value_coef: f64,
    /// Coefficient of the firm value function.
    pub firm_value_coef: f64,
    /// `union_value_coef^(-1/γ)`, computed directly rather than by the power.
    pub benefit_ratio: f64,
    /// Risky holdings per unit surplus.
    pub invest_ratio: DVector<f64>,
    /// Drift distortion of the union's worst-case model.
    pub union_distortion: DVector<f64>,
    /// Drift distortion of the firm's worst-case model.
    pub firm_distortion: DVector<f64>,
    /// Combined risk and ambiguity aversion of the firm, `μ + δ`.
    pub firm_aversion: f64,
}

/// Benefit ratio of the game as a function of scalar inputs. Feasibility is
/// not checked; the result is the bracket whose positivity decides it.
pub fn benefit_bracket(
    alpha: f64,
    r: f64,
    theta_sq: f64,
    firm_aversion: f64,
    gamma: f64,
    lambda: f64,
) -> f64 {
    let k = firm_aversion;
    alpha / gamma
        - ((1.0 - gamma) / gamma) * (r + (1.0 / k - (lambda + gamma) / (2.0 * k * k)) * theta_sq)
}

/// Solves the game; fails when either value coefficient is not positive.
pub fn solve_game_one(m: &ValidatedMarket, p: &Preferences) -> Result<GameOneSolution> {
    let (alpha, beta, gamma, delta, lambda, mu) = (
        p.alpha(),
        p.beta(),
        p.gamma(),
        p.delta(),
        p.lambda(),
        p.mu(),
    );
    let r = m.r();
    let th2 = m.theta_sq();
    let k = mu + delta;

    let a = benefit_bracket(alpha, r, th2, k, gamma, lambda);
    if !(a > 0.0) {
        return Err(Error::InadmissibleA { bracket: a });
    }
    let union_value_coef = a.powf(-gamma);
    if !union_value_coef.is_finite() || union_value_coef <= 0.0 {
        return Err(Error::InadmissibleA { bracket: a });
    }

    let firm_bracket = beta / (1.0 - delta)
        + (alpha - r) / gamma
        + ((1.0 - gamma) * (lambda + gamma) / (2.0 * gamma * k * k)
            - (1.0 - gamma) / (gamma * k)
            - 1.0 / (2.0 * k))
            * th2;
    if !(firm_bracket.abs() >= FIRM_BRACKET_EPS) {
        return Err(Error::InadmissibleB {
            bracket: firm_bracket,
        });
    }
    let firm_value_coef = 1.0 / ((1.0 - delta) * firm_bracket);
    if !(firm_value_coef > 0.0) || !firm_value_coef.is_finite() {
        return Err(Error::InadmissibleB {
            bracket: firm_bracket,
        });
    }

    let theta = &m.sharpe().theta;
    Ok(GameOneSolution {
        union_value_coef,
        firm_value_coef,
        benefit_ratio: a,
        invest_ratio: m.merton_direction() / k,
        union_distortion: theta * (lambda / k),
        firm_distortion: theta * (mu / k),
        firm_aversion: k,
    })
}

impl GameOneSolution {
    /// Benefit paid at surplus `x`.
    pub fn benefit(&self, x: f64) -> f64 {
        self.benefit_ratio * x
    }

    /// Risky holdings at surplus `x`.
    pub fn investment(&self, x: f64) -> DVector<f64> {
        &self.invest_ratio * x
    }

    /// Sign of each risky holding. Long-only positions are not enforced;
    /// with correlated assets some components may be negative.
    pub fn invest_signs(&self) -> Vec<i8> {
        self.invest_ratio.iter().map(|v| sign(*v)).collect()
    }
}

pub(crate) fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Value functions `(union, firm)` at time `s` and surplus `x`.
pub fn value_functions_g1(
    sol: &GameOneSolution,
    p: &Preferences,
    s: f64,
    x: f64,
) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveSurplus { x });
    }
    let (gamma, delta) = (p.gamma(), p.delta());
    let wu = sol.union_value_coef * (-p.alpha() * s).exp() * x.powf(1.0 - gamma) / (1.0 - gamma);
    let wf = sol.firm_value_coef * (-p.beta() * s).exp() * x.powf(1.0 - delta) / (1.0 - delta);
    Ok((wu, wf))
}

/// Law of the equilibrium surplus under the chosen measure.
pub fn wealth_law_g1(
    sol: &GameOneSolution,
    m: &ValidatedMarket,
    p: &Preferences,
    measure: Measure,
) -> GbmLaw {
    let th2 = m.theta_sq();
    let k = sol.firm_aversion;
    let reference = m.r() + th2 / k - sol.benefit_ratio - th2 / (2.0 * k * k);
    let shift = match measure {
        Measure::Reference => 0.0,
        Measure::WorstCaseUnion => p.lambda() * th2 / (k * k),
        Measure::WorstCaseFirm => p.mu() * th2 / (k * k),
    };
    GbmLaw::new(reference - shift, &m.sharpe().theta / k, measure)
}

/// Cooperative solution in which the firm maximises the union's robust payoff.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoSolution {
    pub value_coef: f64,
    pub benefit_ratio: f64,
    pub invest_ratio: DVector<f64>,
    pub distortion: DVector<f64>,
}

/// Solves the cooperative problem. Only the union's discount rate, risk
/// aversion and ambiguity aversion enter.
pub fn solve_pareto(m: &ValidatedMarket, p: &Preferences) -> Result<ParetoSolution> {
    let (alpha, gamma, lambda) = (p.alpha(), p.gamma(), p.lambda());
    let k = gamma + lambda;
    let a = alpha / gamma - ((1.0 - gamma) / gamma) * (m.r() + m.theta_sq() / (2.0 * k));
    if !(a > 0.0) {
        return Err(Error::InadmissibleA0 { bracket: a });
    }
    let value_coef = a.powf(-gamma);
    if !value_coef.is_finite() {
        return Err(Error::InadmissibleA0 { bracket: a });
    }
    Ok(ParetoSolution {
        value_coef,
        benefit_ratio: a,
        invest_ratio: m.merton_direction() / k,
        distortion: &m.sharpe().theta * (lambda / k),
    })
}
