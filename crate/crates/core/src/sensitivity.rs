//! Derivatives of the first game's benefit ratio and parameter sweeps over
//! both games.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game_one::{benefit_bracket, solve_game_one};
use crate::game_two::{solve_game_two, Barriers};
use crate::market::{PreferenceValues, Preferences, ValidatedMarket};

/// Partial derivatives of the first game's benefit ratio.
///
/// The Sharpe ratio enters only through `θᵀθ`; `d_theta` is the derivative
/// with respect to a scalar Sharpe ratio and exists only for one risky asset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenefitRatioGradient {
    pub d_alpha: f64,
    pub d_r: f64,
    pub d_theta: Option<f64>,
    pub d_theta_sq: f64,
    /// Derivative with respect to `μ + δ`; equal to both the `μ` and the `δ`
    /// partial.
    pub d_firm_aversion: f64,
    pub d_gamma: f64,
    pub d_lambda: f64,
}

/// Analytic gradient at `(m, p)`. The risk-free rate is varied with the
/// Sharpe ratio held fixed.
pub fn benefit_ratio_gradient(m: &ValidatedMarket, p: &Preferences) -> BenefitRatioGradient {
    let (alpha, gamma, lambda) = (p.alpha(), p.gamma(), p.lambda());
    let r = m.r();
    let th2 = m.theta_sq();
    let k = p.mu() + p.delta();
    let d_theta_sq = (1.0 - gamma) * ((lambda + gamma) - 2.0 * k) / (2.0 * gamma * k * k);
    let d_theta = (m.dim() == 1).then(|| 2.0 * m.sharpe().theta[0] * d_theta_sq);
    BenefitRatioGradient {
        d_alpha: 1.0 / gamma,
        d_r: -(1.0 - gamma) / gamma,
        d_theta,
        d_theta_sq,
        d_firm_aversion: (1.0 - gamma) * (k - (lambda + gamma)) * th2 / (gamma * k * k * k),
        d_gamma: (r - alpha) / (gamma * gamma)
            + (2.0 * k - lambda - gamma * gamma) * th2 / (2.0 * gamma * gamma * k * k),
        d_lambda: (1.0 - gamma) * th2 / (2.0 * gamma * k * k),
    }
}

/// Parameter perturbed by [`fd_gradient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityParam {
    Alpha,
    R,
    /// Scalar Sharpe ratio; one risky asset only.
    Theta,
    ThetaSq,
    Mu,
    Delta,
    /// `μ + δ` moved as a single quantity.
    FirmAversion,
    Gamma,
    Lambda,
}

impl SensitivityParam {
    pub fn name(self) -> &'static str {
        match self {
            SensitivityParam::Alpha => "alpha",
            SensitivityParam::R => "r",
            SensitivityParam::Theta => "theta",
            SensitivityParam::ThetaSq => "theta_sq",
            SensitivityParam::Mu => "mu",
            SensitivityParam::Delta => "delta",
            SensitivityParam::FirmAversion => "firm_aversion",
            SensitivityParam::Gamma => "gamma",
            SensitivityParam::Lambda => "lambda",
        }
    }
}

pub const DEFAULT_FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
struct Inputs {
    alpha: f64,
    r: f64,
    theta: f64,
    theta_sq: f64,
    mu: f64,
    delta: f64,
    firm_aversion: f64,
    gamma: f64,
    lambda: f64,
}

impl Inputs {
    fn get(&self, param: SensitivityParam) -> f64 {
        match param {
            SensitivityParam::Alpha => self.alpha,
            SensitivityParam::R => self.r,
            SensitivityParam::Theta => self.theta,
            SensitivityParam::ThetaSq => self.theta_sq,
            SensitivityParam::Mu => self.mu,
            SensitivityParam::Delta => self.delta,
            SensitivityParam::FirmAversion => self.firm_aversion,
            SensitivityParam::Gamma => self.gamma,
            SensitivityParam::Lambda => self.lambda,
        }
    }

    fn with(mut self, param: SensitivityParam, value: f64) -> Self {
        match param {
            SensitivityParam::Alpha => self.alpha = value,
            SensitivityParam::R => self.r = value,
            SensitivityParam::Theta => {
                self.theta = value;
                self.theta_sq = value * value;
            }
            SensitivityParam::ThetaSq => self.theta_sq = value,
            SensitivityParam::Mu => {
                self.mu = value;
                self.firm_aversion = self.mu + self.delta;
            }
            SensitivityParam::Delta => {
                self.delta = value;
                self.firm_aversion = self.mu + self.delta;
            }
            SensitivityParam::FirmAversion => self.firm_aversion = value,
            SensitivityParam::Gamma => self.gamma = value,
            SensitivityParam::Lambda => self.lambda = value,
        }
        self
    }

    fn admissible(&self) -> bool {
        self.alpha > 0.0
            && self.r > 0.0
            && self.theta_sq >= 0.0
            && self.mu >= 0.0
            && self.delta > 0.0
            && self.firm_aversion > 0.0
            && self.gamma > 0.0
            && self.gamma != 1.0
            && self.lambda >= 0.0
            && self.benefit_ratio() > 0.0
    }

    fn benefit_ratio(&self) -> f64 {
        benefit_bracket(
            self.alpha,
            self.r,
            self.theta_sq,
            self.firm_aversion,
            self.gamma,
            self.lambda,
        )
    }
}

/// Richardson-extrapolated central difference of the benefit ratio with
/// respect to `param`, using a step of `step` relative to the parameter value
/// (absolute when the value is zero).
pub fn fd_gradient(
    m: &ValidatedMarket,
    p: &Preferences,
    param: SensitivityParam,
    step: f64,
) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "step must be positive, got {step}"
        )));
    }
    if param == SensitivityParam::Theta && m.dim() != 1 {
        return Err(Error::Unsupported(
            "the scalar Sharpe derivative needs exactly one risky asset; use theta_sq".into(),
        ));
    }
    let base = Inputs {
        alpha: p.alpha(),
        r: m.r(),
        theta: m.sharpe().theta[0],
        theta_sq: m.theta_sq(),
        mu: p.mu(),
        delta: p.delta(),
        firm_aversion: p.mu() + p.delta(),
        gamma: p.gamma(),
        lambda: p.lambda(),
    };
    let x = base.get(param);
    let h = if x == 0.0 { step } else { step * x.abs() };
    let eval = |dx: f64| -> Result<f64> {
        let moved = base.with(param, x + dx);
        if !moved.admissible() {
            return Err(Error::InfeasiblePerturbation {
                param: param.name(),
            });
        }
        Ok(moved.benefit_ratio())
    };
    let central = |h: f64| -> Result<f64> { Ok((eval(h)? - eval(-h)?) / (2.0 * h)) };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Parameter (or tied pair of parameters) varied along a sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParam {
    /// Both risk aversions set to the same value.
    GammaDelta,
    /// Both ambiguity aversions set to the same value.
    LambdaMu,
    Gamma,
    Delta,
    Lambda,
    Mu,
}

impl AxisParam {
    pub fn column(self) -> &'static str {
        match self {
            AxisParam::GammaDelta => "gamma_delta",
            AxisParam::LambdaMu => "lambda_mu",
            AxisParam::Gamma => "gamma",
            AxisParam::Delta => "delta",
            AxisParam::Lambda => "lambda",
            AxisParam::Mu => "mu",
        }
    }

    fn apply(self, v: &mut PreferenceValues, x: f64) {
        match self {
            AxisParam::GammaDelta => {
                v.gamma = x;
                v.delta = x;
            }
            AxisParam::LambdaMu => {
                v.lambda = x;
                v.mu = x;
            }
            AxisParam::Gamma => v.gamma = x,
            AxisParam::Delta => v.delta = x,
            AxisParam::Lambda => v.lambda = x,
            AxisParam::Mu => v.mu = x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: AxisParam,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(param: AxisParam, values: Vec<f64>) -> Self {
        Self { param, values }
    }

    pub fn linspace(param: AxisParam, start: f64, end: f64, n: usize) -> Self {
        Self::new(param, linspace(start, end, n))
    }
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    end
                } else {
                    start + (end - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Default risk-aversion grid; unit risk aversion is excluded.
pub fn default_risk_axis() -> Axis {
    Axis::linspace(AxisParam::GammaDelta, 1.05, 10.0, 60)
}

/// Default ambiguity-aversion grid.
pub fn default_ambiguity_axis() -> Axis {
    Axis::linspace(AxisParam::LambdaMu, 0.0, 4.0, 60)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Game {
    /// Benefit/contribution game with discounted-utility objectives.
    One,
    /// Barrier game with the firm's reach-before-ruin objective.
    Two,
}

impl Game {
    pub fn label(self) -> &'static str {
        match self {
            Game::One => "game1",
            Game::Two => "game2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarketKind {
    Bull,
    Bear,
}

impl MarketKind {
    pub fn label(self) -> &'static str {
        match self {
            MarketKind::Bull => "bull",
            MarketKind::Bear => "bear",
        }
    }
}

/// Equilibrium ratios of one feasible cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellValues {
    pub benefit_ratio: f64,
    pub invest_ratio: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    /// Axis values in axis order.
    pub coords: Vec<f64>,
    pub outcome: std::result::Result<CellValues, Error>,
}

impl SweepCell {
    pub fn feasible(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn values(&self) -> Option<&CellValues> {
        self.outcome.as_ref().ok()
    }

    pub fn reason(&self) -> Option<&'static str> {
        self.outcome.as_ref().err().map(Error::code)
    }
}

/// Grid of equilibrium ratios for one game in one market. Cells are stored in
/// lexicographic order of the axis indices, first axis outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub game: Game,
    pub market: MarketKind,
    pub axes: Vec<Axis>,
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.values.len()).collect()
    }

    /// Flat position of a multi-index.
    pub fn index(&self, idx: &[usize]) -> usize {
        let shape = self.shape();
        idx.iter().zip(&shape).fold(0, |acc, (i, n)| acc * n + i)
    }

    pub fn cell(&self, idx: &[usize]) -> &SweepCell {
        &self.cells[self.index(idx)]
    }

    fn asset_count(&self) -> usize {
        self.cells
            .iter()
            .find_map(|c| c.values().map(|v| v.invest_ratio.len()))
            .unwrap_or(1)
    }

    /// Column names: axes, then value columns. Several risky assets produce
    /// one investment column per asset.
    pub fn header(&self) -> Vec<String> {
        let mut cols: Vec<String> = self
            .axes
            .iter()
            .map(|a| a.param.column().to_string())
            .collect();
        cols.push("benefit_ratio".into());
        let n = self.asset_count();
        if n == 1 {
            cols.push("invest_ratio".into());
        } else {
            cols.extend((1..=n).map(|i| format!("invest_ratio_{i}")));
        }
        cols.push("feasible".into());
        cols.push("reason".into());
        cols
    }

    /// Rows as text fields. Numbers use the shortest representation that
    /// parses back to the same `f64`; infeasible cells leave them empty.
    pub fn records(&self) -> Vec<Vec<String>> {
        let n = self.asset_count();
        self.cells
            .iter()
            .map(|cell| {
                let mut row: Vec<String> = cell.coords.iter().map(|x| format!("{x}")).collect();
                match &cell.outcome {
                    Ok(v) => {
                        row.push(format!("{}", v.benefit_ratio));
                        row.extend(v.invest_ratio.iter().map(|x| format!("{x}")));
                        row.push("true".into());
                        row.push(String::new());
                    }
                    Err(e) => {
                        row.extend(std::iter::repeat_n(String::new(), n + 1));
                        row.push("false".into());
                        row.push(e.code().into());
                    }
                }
                row
            })
            .collect()
    }
}

/// Axes plus the games and markets to tabulate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    pub games: Vec<Game>,
    pub markets: Vec<MarketKind>,
}

impl SweepSpec {
    /// Risk aversion against ambiguity aversion, both games, both markets.
    pub fn default_figures() -> Self {
        Self {
            axes: vec![default_risk_axis(), default_ambiguity_axis()],
            games: vec![Game::One, Game::Two],
            markets: vec![MarketKind::Bull, MarketKind::Bear],
        }
    }
}

/// Barriers used by sweeps when none are supplied. Equilibrium ratios do not
/// depend on them.
pub fn default_barriers() -> Barriers {
    Barriers::new(1.0, 2.0, 1.5).expect("valid default barriers")
}

/// Solves one cell. Any failure, including preferences made invalid by the
/// axis values, is recorded as the cell's outcome.
pub fn solve_cell(
    game: Game,
    m: &ValidatedMarket,
    p: &Preferences,
    bar: &Barriers,
) -> std::result::Result<CellValues, Error> {
    match game {
        Game::One => solve_game_one(m, p).map(|s| CellValues {
            benefit_ratio: s.benefit_ratio,
            invest_ratio: s.invest_ratio.iter().copied().collect(),
        }),
        Game::Two => solve_game_two(m, p, bar).map(|s| CellValues {
            benefit_ratio: s.benefit_ratio,
            invest_ratio: s.invest_ratio.iter().copied().collect(),
        }),
    }
}

/// Preferences of the cell at the given coordinates.
pub fn cell_preferences(
    p_base: &Preferences,
    axes: &[Axis],
    coords: &[f64],
) -> Result<Preferences> {
    p_base.modified(|v| {
        for (axis, &x) in axes.iter().zip(coords) {
            axis.param.apply(v, x);
        }
    })
}

fn coords_of(axes: &[Axis], mut flat: usize) -> Vec<f64> {
    let mut coords = vec![0.0; axes.len()];
    for (k, axis) in axes.iter().enumerate().rev() {
        let n = axis.values.len();
        coords[k] = axis.values[flat % n];
        flat /= n;
    }
    coords
}

/// Tabulates one game in one market. Cells are solved in parallel; the output
/// order depends only on the axes.
pub fn sweep_table(
    game: Game,
    market_kind: MarketKind,
    m: &ValidatedMarket,
    p_base: &Preferences,
    axes: &[Axis],
    bar: &Barriers,
) -> SweepTable {
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    let cells = (0..total)
        .into_par_iter()
        .map(|flat| {
            let coords = coords_of(axes, flat);
            let outcome =
                cell_preferences(p_base, axes, &coords).and_then(|p| solve_cell(game, m, &p, bar));
            SweepCell { coords, outcome }
        })
        .collect();
    SweepTable {
        game,
        market: market_kind,
        axes: axes.to_vec(),
        cells,
    }
}

/// One table per (game, market) pair, games outermost.
pub fn sweep(
    m_bull: &ValidatedMarket,
    m_bear: &ValidatedMarket,
    p_base: &Preferences,
    spec: &SweepSpec,
    bar: &Barriers,
) -> Vec<SweepTable> {
    let mut out = Vec::with_capacity(spec.games.len() * spec.markets.len());
    for &game in &spec.games {
        for &kind in &spec.markets {
            let m = match kind {
                MarketKind::Bull => m_bull,
                MarketKind::Bear => m_bear,
            };
            out.push(sweep_table(game, kind, m, p_base, &spec.axes, bar));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::{validate_market, MarketParams};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn bull() -> ValidatedMarket {
        validate_market(&MarketParams::bull()).unwrap()
    }

    fn bear() -> ValidatedMarket {
        validate_market(&MarketParams::bear()).unwrap()
    }

    fn base() -> Preferences {
        Preferences::new(0.02, 0.02, 2.0, 2.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let g = benefit_ratio_gradient(&bull(), &base());
        assert_eq!(g.d_alpha, 0.5);
        assert_eq!(g.d_r, 0.5);
        assert_relative_eq!(
            g.d_lambda,
            crate::oracle::BULL_D_LAMBDA,
            max_relative = 1e-13
        );
    }

    #[test]
    fn theta_derivative_vanishes_on_balance_line() {
        // λ + γ = 2(μ + δ)
        let p = Preferences::new(0.02, 0.02, 2.0, 1.5, 3.0, 1.0).unwrap();
        let g = benefit_ratio_gradient(&bull(), &p);
        assert_eq!(g.d_theta, Some(0.0));
        assert_eq!(g.d_theta_sq, 0.0);
        let fd = fd_gradient(&bull(), &p, SensitivityParam::Theta, DEFAULT_FD_STEP).unwrap();
        assert!(fd.abs() < 1e-8, "{fd}");
    }

    #[test]
    fn alpha_by_differences() {
        let fd = fd_gradient(&bull(), &base(), SensitivityParam::Alpha, DEFAULT_FD_STEP).unwrap();
        assert!((fd - 0.5).abs() <= 1e-8, "{fd}");
    }

    #[test]
    fn firm_aversion_partials_coincide() {
        let p = Preferences::new(0.03, 0.02, 3.0, 2.5, 0.7, 0.4).unwrap();
        let g = benefit_ratio_gradient(&bull(), &p);
        let dm = fd_gradient(&bull(), &p, SensitivityParam::Mu, DEFAULT_FD_STEP).unwrap();
        let dd = fd_gradient(&bull(), &p, SensitivityParam::Delta, DEFAULT_FD_STEP).unwrap();
        let dk = fd_gradient(&bull(), &p, SensitivityParam::FirmAversion, DEFAULT_FD_STEP).unwrap();
        assert!((dm - dd).abs() <= 1e-8);
        assert!((dk - g.d_firm_aversion).abs() <= 1e-8);
    }

    #[test]
    fn step_ladder_error_shrinks() {
        let p = Preferences::new(0.03, 0.02, 3.0, 2.5, 0.7, 0.4).unwrap();
        let exact = benefit_ratio_gradient(&bull(), &p).d_gamma;
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
            .iter()
            .map(|&h| (fd_gradient(&bull(), &p, SensitivityParam::Gamma, h).unwrap() - exact).abs())
            .collect();
        // Truncation error falls until round-off takes over.
        assert!(errs[0] > errs[1], "{errs:?}");
        assert!(
            errs[2..].iter().all(|&e| e < 1e-10 && e > errs[1] * 1e-3),
            "{errs:?}"
        );
    }

    #[test]
    fn perturbation_leaving_region_is_reported() {
        let p = Preferences::new(0.02, 0.02, 2.0, 2.0, 0.0, 1.0).unwrap();
        let err = fd_gradient(&bull(), &p, SensitivityParam::Lambda, DEFAULT_FD_STEP).unwrap_err();
        assert_eq!(err, Error::InfeasiblePerturbation { param: "lambda" });
    }

    #[test]
    fn theta_needs_one_asset() {
        let m = validate_market(&MarketParams {
            r: 0.01,
            b: vec![0.05, 0.06],
            sigma: vec![vec![0.2, 0.0], vec![0.05, 0.2]],
        })
        .unwrap();
        assert!(benefit_ratio_gradient(&m, &base()).d_theta.is_none());
        assert!(matches!(
            fd_gradient(&m, &base(), SensitivityParam::Theta, DEFAULT_FD_STEP),
            Err(Error::Unsupported(_))
        ));
        let g = benefit_ratio_gradient(&m, &base());
        let fd = fd_gradient(&m, &base(), SensitivityParam::ThetaSq, DEFAULT_FD_STEP).unwrap();
        assert!((fd - g.d_theta_sq).abs() <= 1e-6 * g.d_theta_sq.abs().max(1.0));
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(1.05, 10.0, 60);
        assert_eq!(v.len(), 60);
        assert_eq!(v[0], 1.05);
        assert_eq!(v[59], 10.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sweep_cells_match_direct_solves() {
        let spec = SweepSpec {
            axes: vec![
                Axis::new(AxisParam::GammaDelta, vec![2.0, 3.0]),
                Axis::new(AxisParam::LambdaMu, vec![1.0, 0.1]),
            ],
            games: vec![Game::One, Game::Two],
            markets: vec![MarketKind::Bull, MarketKind::Bear],
        };
        let tables = sweep(&bull(), &bear(), &base(), &spec, &default_barriers());
        assert_eq!(tables.len(), 4);
        assert_eq!(
            (tables[0].game, tables[0].market),
            (Game::One, MarketKind::Bull)
        );
        assert_eq!(
            (tables[3].game, tables[3].market),
            (Game::Two, MarketKind::Bear)
        );
        for t in &tables {
            assert_eq!(t.cells.len(), 4);
        }
        let cell = tables[0].cell(&[0, 0]);
        assert_eq!(cell.coords, vec![2.0, 1.0]);
        assert_relative_eq!(
            cell.values().unwrap().benefit_ratio,
            crate::oracle::BULL_BENEFIT,
            max_relative = 1e-13
        );
        assert_eq!(tables[0].cell(&[1, 0]).coords, vec![3.0, 1.0]);

        // Barrier game in the bull market at γ=2 with λ=μ=0.1 is infeasible.
        let p = Preferences::new(0.02, 0.02, 2.0, 2.0, 1.0, 0.1).unwrap();
        let t = sweep_table(
            Game::Two,
            MarketKind::Bull,
            &bull(),
            &p,
            &[Axis::new(AxisParam::Mu, vec![0.1])],
            &default_barriers(),
        );
        assert_eq!(t.cells[0].reason(), Some("EtaOutOfRange"));
    }

    #[test]
    fn records_leave_infeasible_fields_empty() {
        let t = sweep_table(
            Game::Two,
            MarketKind::Bull,
            &bull(),
            &base(),
            &[Axis::new(AxisParam::Mu, vec![0.1, 0.5])],
            &default_barriers(),
        );
        assert_eq!(
            t.header(),
            ["mu", "benefit_ratio", "invest_ratio", "feasible", "reason"]
        );
        let rows = t.records();
        assert_eq!(rows[0], ["0.1", "", "", "false", "EtaOutOfRange"]);
        assert!(rows.iter().flatten().all(|f| !f.contains("NaN")));
    }

    #[test]
    fn invalid_axis_values_become_reasons() {
        let t = sweep_table(
            Game::One,
            MarketKind::Bear,
            &bear(),
            &base(),
            &[Axis::new(AxisParam::Gamma, vec![1.0, 2.0])],
            &default_barriers(),
        );
        assert_eq!(t.cells[0].reason(), Some("InvalidPreference"));
        assert!(t.cells[1].feasible());
    }

    #[test]
    fn bear_benefit_ratio_falls_with_risk_aversion() {
        let t = sweep_table(
            Game::One,
            MarketKind::Bear,
            &bear(),
            &base(),
            &[default_risk_axis(), default_ambiguity_axis()],
            &default_barriers(),
        );
        for j in 0..60 {
            for i in 1..60 {
                let a = t.cell(&[i - 1, j]).values().unwrap().benefit_ratio;
                let b = t.cell(&[i, j]).values().unwrap().benefit_ratio;
                assert!(b < a);
            }
        }
    }

    proptest! {
        #[test]
        fn analytic_matches_differences(
            alpha in 0.005f64..0.1,
            gamma in 1.05f64..10.0,
            delta in 1.05f64..10.0,
            lambda in 0.01f64..4.0,
            mu in 0.01f64..4.0,
            bull_market in any::<bool>(),
        ) {
            let m = if bull_market { bull() } else { bear() };
            let p = Preferences::new(alpha, 0.02, gamma, delta, lambda, mu).unwrap();
            prop_assume!(solve_game_one(&m, &p).is_ok());
            let g = benefit_ratio_gradient(&m, &p);
            let pairs = [
                (SensitivityParam::Alpha, g.d_alpha),
                (SensitivityParam::R, g.d_r),
                (SensitivityParam::Theta, g.d_theta.unwrap()),
                (SensitivityParam::FirmAversion, g.d_firm_aversion),
                (SensitivityParam::Gamma, g.d_gamma),
                (SensitivityParam::Lambda, g.d_lambda),
            ];
            for (param, exact) in pairs {
                if let Ok(fd) = fd_gradient(&m, &p, param, DEFAULT_FD_STEP) {
                    prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{param:?}: {fd} vs {exact}");
                }
            }
        }
    }
}
