//! Scenario files.
//!
//! TOML is the primary format; a `.json` extension selects JSON. Every
//! nested value is validated on load, so a parsed [`ScenarioConfig`] can be
//! handed to any command.

use std::fmt;
use std::path::Path;

use pensiongame_core::sensitivity::{Axis, AxisParam, Game, MarketKind, SweepSpec};
use pensiongame_core::stochastics::{HjbiGrid, PathGrid, DEFAULT_HORIZON_CAP, DEFAULT_TAIL_LIMIT};
use pensiongame_core::{validate_market, Barriers, MarketParams, Measure, Preferences};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;

/// Which equilibrium a scenario describes. Written as `1`, `2` or
/// `"pareto"`; the strings `"1"` and `"2"` are accepted too.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameChoice {
    One,
    Two,
    Pareto,
}

impl GameChoice {
    pub fn label(self) -> &'static str {
        match self {
            GameChoice::One => "game1",
            GameChoice::Two => "game2",
            GameChoice::Pareto => "pareto",
        }
    }
}

impl fmt::Display for GameChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for GameChoice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GameChoice::One => s.serialize_u8(1),
            GameChoice::Two => s.serialize_u8(2),
            GameChoice::Pareto => s.serialize_str("pareto"),
        }
    }
}

impl<'de> Deserialize<'de> for GameChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(1) => Ok(GameChoice::One),
            Raw::Int(2) => Ok(GameChoice::Two),
            Raw::Text(t) => match t.to_ascii_lowercase().as_str() {
                "1" | "one" => Ok(GameChoice::One),
                "2" | "two" => Ok(GameChoice::Two),
                "pareto" => Ok(GameChoice::Pareto),
                other => Err(de::Error::custom(format!(
                    "game must be 1, 2 or \"pareto\", got \"{other}\""
                ))),
            },
            Raw::Int(other) => Err(de::Error::custom(format!(
                "game must be 1, 2 or \"pareto\", got {other}"
            ))),
        }
    }
}

/// A full scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub game: GameChoice,
    pub market: MarketParams,
    pub preferences: Preferences,
    /// Required for the barrier game and rejected otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barriers: Option<Barriers>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyConfig>,
}

/// Path simulation settings. Exactly one of `n_steps` and `horizon` fixes the
/// grid length; the barrier game falls back to the default horizon cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    /// Measure of the dumped paths. Payoff estimates always use the law their
    /// definition requires.
    #[serde(default = "default_measure")]
    pub measure: Measure,
    /// Start value; 1 in the first game and the barrier start in the second.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default)]
    pub t0: f64,
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    pub n_paths: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "yes")]
    pub write_paths: bool,
    #[serde(default)]
    pub payoff: bool,
    /// Largest analytic tail, as a fraction of the payoff, allowed beyond the
    /// horizon of a first-game payoff estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_limit: Option<f64>,
}

fn default_measure() -> Measure {
    Measure::Reference
}

fn yes() -> bool {
    true
}

impl SimulationConfig {
    pub fn grid(&self, game: GameChoice) -> Result<PathGrid, CliError> {
        let grid = match (self.n_steps, self.horizon) {
            (Some(_), Some(_)) => {
                return Err(CliError::ConfigParse(
                    "simulation: give n_steps or horizon, not both".into(),
                ))
            }
            (Some(n), None) => PathGrid::new(self.t0, self.dt, n, self.n_paths, self.seed),
            (None, Some(h)) => {
                PathGrid::covering(self.t0, self.t0 + h, self.dt, self.n_paths, self.seed)
            }
            (None, None) if game == GameChoice::Two => PathGrid::covering(
                self.t0,
                self.t0 + DEFAULT_HORIZON_CAP,
                self.dt,
                self.n_paths,
                self.seed,
            ),
            (None, None) => {
                return Err(CliError::ConfigParse(
                    "simulation: n_steps or horizon is required".into(),
                ))
            }
        };
        grid.map_err(|e| CliError::ConfigParse(format!("simulation: {e}")))
    }

    pub fn tail_limit(&self) -> f64 {
        self.tail_limit.unwrap_or(DEFAULT_TAIL_LIMIT)
    }
}

/// Sweep axes plus the games and markets to tabulate. Markets are the two
/// preset parameter sets; the base preferences come from the scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<AxisConfig>,
    #[serde(default = "both_games")]
    pub games: Vec<Game>,
    #[serde(default = "both_markets")]
    pub markets: Vec<MarketKind>,
}

fn both_games() -> Vec<Game> {
    vec![Game::One, Game::Two]
}

fn both_markets() -> Vec<MarketKind> {
    vec![MarketKind::Bull, MarketKind::Bear]
}

/// One axis, either as explicit `values` or as `start`, `end`, `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub param: AxisParam,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl AxisConfig {
    pub fn axis(&self) -> Result<Axis, CliError> {
        let name = self.param.column();
        let axis = match (&self.values, self.start, self.end, self.n) {
            (Some(v), None, None, None) => Axis::new(self.param, v.clone()),
            (None, Some(a), Some(b), Some(n)) => Axis::linspace(self.param, a, b, n),
            _ => {
                return Err(CliError::ConfigParse(format!(
                    "sweep axis {name}: give either values or start, end and n"
                )))
            }
        };
        if axis.values.is_empty() {
            return Err(CliError::ConfigParse(format!("sweep axis {name} is empty")));
        }
        if axis.values.iter().any(|x| !x.is_finite()) {
            return Err(CliError::ConfigParse(format!(
                "sweep axis {name} has non-finite values"
            )));
        }
        Ok(axis)
    }
}

impl SweepConfig {
    pub fn spec(&self) -> Result<SweepSpec, CliError> {
        if self.axes.is_empty() {
            return Err(CliError::ConfigParse(
                "sweep needs at least one axis".into(),
            ));
        }
        if self.games.is_empty() || self.markets.is_empty() {
            return Err(CliError::ConfigParse(
                "sweep needs at least one game and one market".into(),
            ));
        }
        Ok(SweepSpec {
            axes: self
                .axes
                .iter()
                .map(AxisConfig::axis)
                .collect::<Result<_, _>>()?,
            games: self.games.clone(),
            markets: self.markets.clone(),
        })
    }
}

/// Settings of the verification suite. Every field has a default, so an
/// empty or missing block runs the standard checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Check a candidate whose union value coefficient is scaled by
    /// `coef_scale`; its generator checks are expected to fail.
    pub negative_control: bool,
    pub coef_scale: f64,
    pub seed: u64,
    /// Paths per measure for the moment checks at t = 1.
    pub moment_paths: usize,
    /// First game: paths, horizon and step of the truncated payoff check.
    pub payoff_paths: usize,
    pub payoff_horizon: f64,
    pub payoff_dt: f64,
    /// Second game: paths and monitoring step of the barrier payoff check.
    pub barrier_paths: usize,
    pub barrier_dt: f64,
    pub barrier_abs_tol: f64,
    pub hjbi: HjbiGrid,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            negative_control: false,
            coef_scale: 1.01,
            seed: 1,
            moment_paths: 100_000,
            payoff_paths: 20_000,
            payoff_horizon: 20.0,
            payoff_dt: 1.0 / 52.0,
            barrier_paths: 10_000,
            barrier_dt: 1.0 / 1000.0,
            barrier_abs_tol: 0.005,
            hjbi: HjbiGrid::default(),
        }
    }
}

impl ScenarioConfig {
    /// Reads and validates a scenario; `.json` files are parsed as JSON and
    /// everything else as TOML.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let cfg = if is_json {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| CliError::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the rules that span several fields.
    pub fn validate(&self) -> Result<(), CliError> {
        validate_market(&self.market).map_err(|e| CliError::ConfigParse(format!("market: {e}")))?;
        match (self.game, self.barriers.is_some()) {
            (GameChoice::Two, false) => {
                return Err(CliError::ConfigParse(
                    "game 2 requires a [barriers] block".into(),
                ))
            }
            (GameChoice::One | GameChoice::Pareto, true) => {
                return Err(CliError::ConfigParse(format!(
                    "barriers are only used by game 2, but game is {}",
                    self.game
                )))
            }
            _ => {}
        }
        if let Some(sim) = &self.simulation {
            if sim.x0.is_some_and(|x| !(x > 0.0)) {
                return Err(CliError::ConfigParse(
                    "simulation: x0 must be positive".into(),
                ));
            }
            sim.grid(self.game)?;
        }
        if let Some(sweep) = &self.sweep {
            sweep.spec()?;
        }
        if let Some(v) = &self.verify {
            if !(v.coef_scale > 0.0) || v.coef_scale == 1.0 && v.negative_control {
                return Err(CliError::ConfigParse(
                    "verify: coef_scale must be positive and differ from 1".into(),
                ));
            }
        }
        Ok(())
    }

    /// Replaces every seed in the scenario.
    pub fn override_seed(&mut self, seed: u64) {
        if let Some(sim) = &mut self.simulation {
            sim.seed = seed;
        }
        if let Some(v) = &mut self.verify {
            v.seed = seed;
        }
    }
}
