//! Closed-form moments and exit probabilities of geometric Brownian motion.

use crate::error::{Error, Result};
use crate::law::GbmLaw;

/// Below this `|ρ|` the exit probability uses its logarithmic limit.
pub const RHO_EPS: f64 = 1e-10;

/// `E[X(t)^m_exp]` for `X(0) = x0`:
/// `x0^m · exp{m·log_drift·t + m²·|v|²·t/2}`.
pub fn gbm_moment(law: &GbmLaw, x0: f64, m_exp: f64, t: f64) -> Result<f64> {
    if !(x0 > 0.0) {
        return Err(Error::NonPositiveStart { x0 });
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidGrid(format!(
            "moment time must be >= 0, got {t}"
        )));
    }
    if m_exp == 0.0 {
        return Ok(1.0);
    }
    Ok(x0.powf(m_exp) * (law.moment_growth(m_exp) * t).exp())
}

/// Probability that the law started at `x0` reaches `v` before `l`, with
/// continuous monitoring.
pub fn exit_probability_gbm(law: &GbmLaw, l: f64, v: f64, x0: f64) -> Result<f64> {
    if !(0.0 < l && l <= x0 && x0 <= v && l < v) {
        return Err(Error::InvalidBarriers { l, x0, v });
    }
    let s2 = law.var_rate();
    if s2 == 0.0 {
        return Err(Error::DegenerateVolatility);
    }
    if x0 == l {
        return Ok(0.0);
    }
    if x0 == v {
        return Ok(1.0);
    }
    let rho = 1.0 - 2.0 * law.sde_drift() / s2;
    if rho.abs() <= RHO_EPS {
        return Ok((x0.ln() - l.ln()) / (v.ln() - l.ln()));
    }
    // Written with exp_m1 so that small |ρ| keeps full precision.
    let (lx, ll, lv) = (x0.ln(), l.ln(), v.ln());
    let num = (rho * (lx - ll)).exp_m1();
    let den = (rho * (lv - ll)).exp_m1();
    Ok(num / den)
}
