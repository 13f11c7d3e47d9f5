//! Market and preference parameters with their validation.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative eigenvalue threshold below which the covariance counts as singular.
pub const PD_REL_TOL: f64 = 1e-12;

/// Raw constant-coefficient market: one risk-free asset plus `n` risky ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketParams {
    /// Risk-free rate per year.
    pub r: f64,
    /// Drift of each risky asset per year.
    pub b: Vec<f64>,
    /// Volatility matrix, row `i` loads asset `i` on the Brownian factors.
    pub sigma: Vec<Vec<f64>>,
}

impl MarketParams {
    pub fn single(r: f64, b: f64, sigma: f64) -> Self {
        Self {
            r,
            b: vec![b],
            sigma: vec![vec![sigma]],
        }
    }

    /// Bull-market parameter set used throughout the examples.
    pub fn bull() -> Self {
        Self::single(0.01, 0.144604, 0.10748)
    }

    /// Bear-market parameter set used throughout the examples.
    pub fn bear() -> Self {
        Self::single(0.01, 0.014, 0.2678)
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    fn sigma_matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.b.len();
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "market has no risky assets".into(),
            ));
        }
        if self.sigma.len() != n || self.sigma.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "volatility matrix must be {n}x{n}"
            )));
        }
        Ok(DMatrix::from_fn(n, n, |i, j| self.sigma[i][j]))
    }
}

/// Sharpe ratio vector and its squared norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpeInfo {
    pub theta: DVector<f64>,
    pub theta_sq: f64,
}

impl SharpeInfo {
    pub fn new(theta: DVector<f64>) -> Self {
        let theta_sq = theta.dot(&theta);
        Self { theta, theta_sq }
    }
}

/// A market that passed validation, with the derived matrices cached.
#[derive(Debug, Clone)]
pub struct ValidatedMarket {
    params: MarketParams,
    sigma: DMatrix<f64>,
    cov: DMatrix<f64>,
    cov_inv: DMatrix<f64>,
    excess: DVector<f64>,
    merton: DVector<f64>,
    sharpe: SharpeInfo,
}

/// Checks the market invariants and caches `Σ = σσᵀ`, its inverse and the
/// Sharpe ratio.
///
/// Only positive definiteness of `Σ` is required; individual volatility
/// loadings may take either sign.
pub fn validate_market(m: &MarketParams) -> Result<ValidatedMarket> {
    if !m.r.is_finite() {
        return Err(Error::NonFinite("risk-free rate"));
    }
    if m.r <= 0.0 {
        return Err(Error::NonPositiveRate { r: m.r });
    }
    let sigma = m.sigma_matrix()?;
    if m.b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("drift vector"));
    }
    if sigma.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("volatility matrix"));
    }
    for (index, &drift) in m.b.iter().enumerate() {
        if drift <= m.r {
            return Err(Error::DriftBelowRiskFree {
                index,
                drift,
                r: m.r,
            });
        }
    }

    let cov = &sigma * sigma.transpose();
    let eig = SymmetricEigen::new(cov.clone());
    let max_eig = eig.eigenvalues.max();
    let min_eig = eig.eigenvalues.min();
    if !(max_eig > 0.0) || min_eig <= PD_REL_TOL * max_eig {
        return Err(Error::SingularVolatility { min_eig, max_eig });
    }

    let n = m.dim();
    let excess = DVector::from_iterator(n, m.b.iter().map(|bi| bi - m.r));
    let chol = cov
        .clone()
        .cholesky()
        .ok_or(Error::SingularVolatility { min_eig, max_eig })?;
    let cov_inv = chol.inverse();
    let merton = chol.solve(&excess);
    let theta = sigma
        .clone()
        .lu()
        .solve(&excess)
        .ok_or(Error::SingularVolatility { min_eig, max_eig })?;

    Ok(ValidatedMarket {
        params: m.clone(),
        sigma,
        cov,
        cov_inv,
        excess,
        merton,
        sharpe: SharpeInfo::new(theta),
    })
}

/// Sharpe ratio `σ⁻¹(b − r·1)` of a validated market.
pub fn sharpe(m: &ValidatedMarket) -> SharpeInfo {
    m.sharpe.clone()
}

impl ValidatedMarket {
    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    pub fn r(&self) -> f64 {
        self.params.r
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn cov_inv(&self) -> &DMatrix<f64> {
        &self.cov_inv
    }

    /// Excess drift `b − r·1`.
    pub fn excess(&self) -> &DVector<f64> {
        &self.excess
    }

    /// Unscaled Merton direction `Σ⁻¹(b − r·1)`.
    pub fn merton_direction(&self) -> &DVector<f64> {
        &self.merton
    }

    pub fn sharpe(&self) -> &SharpeInfo {
        &self.sharpe
    }

    pub fn theta_sq(&self) -> f64 {
        self.sharpe.theta_sq
    }

    /// A one-asset market with zero excess return. Validation forbids this
    /// case, but the closed forms have a well-defined limit there.
    #[cfg(test)]
    pub(crate) fn zero_excess(r: f64, sigma: f64) -> Self {
        let s = DMatrix::from_element(1, 1, sigma);
        let cov = DMatrix::from_element(1, 1, sigma * sigma);
        Self {
            params: MarketParams::single(r, r, sigma),
            sigma: s,
            cov_inv: DMatrix::from_element(1, 1, 1.0 / (sigma * sigma)),
            cov,
            excess: DVector::zeros(1),
            merton: DVector::zeros(1),
            sharpe: SharpeInfo::new(DVector::zeros(1)),
        }
    }
}

/// Unvalidated preference record, the serialized form of [`Preferences`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferenceValues {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub lambda: f64,
    pub mu: f64,
}

/// Discount rates, risk aversions and ambiguity aversions of both players.
///
/// Construction rejects unit risk aversion, so every instance is valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PreferenceValues", into = "PreferenceValues")]
pub struct Preferences {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    lambda: f64,
    mu: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite(name));
    }
    if value <= 0.0 {
        return Err(Error::InvalidPreference {
            name,
            reason: format!("must be > 0, got {value}"),
        });
    }
    Ok(())
}

fn check_risk_aversion(name: &'static str, value: f64) -> Result<()> {
    check_positive(name, value)?;
    if value == 1.0 {
        return Err(Error::InvalidPreference {
            name,
            reason: format!("{name} must differ from 1 (logarithmic utility is not supported)"),
        });
    }
    Ok(())
}

fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite(name));
    }
    if value < 0.0 {
        return Err(Error::InvalidPreference {
            name,
            reason: format!("must be >= 0, got {value}"),
        });
    }
    Ok(())
}

impl TryFrom<PreferenceValues> for Preferences {
    type Error = Error;

    fn try_from(v: PreferenceValues) -> Result<Self> {
        check_positive("alpha", v.alpha)?;
        check_positive("beta", v.beta)?;
        check_risk_aversion("gamma", v.gamma)?;
        check_risk_aversion("delta", v.delta)?;
        check_non_negative("lambda", v.lambda)?;
        check_non_negative("mu", v.mu)?;
        Ok(Self {
            alpha: v.alpha,
            beta: v.beta,
            gamma: v.gamma,
            delta: v.delta,
            lambda: v.lambda,
            mu: v.mu,
        })
    }
}

impl From<Preferences> for PreferenceValues {
    fn from(p: Preferences) -> Self {
        p.values()
    }
}

impl Preferences {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        lambda: f64,
        mu: f64,
    ) -> Result<Self> {
        PreferenceValues {
            alpha,
            beta,
            gamma,
            delta,
            lambda,
            mu,
        }
        .try_into()
    }

    pub fn values(&self) -> PreferenceValues {
        PreferenceValues {
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
            lambda: self.lambda,
            mu: self.mu,
        }
    }

    /// Copy with some fields replaced, re-validated.
    pub fn modified(&self, f: impl FnOnce(&mut PreferenceValues)) -> Result<Self> {
        let mut v = self.values();
        f(&mut v);
        v.try_into()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
}
