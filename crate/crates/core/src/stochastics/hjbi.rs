//! Generator residuals of the HJBI equations on control grids around a
//! candidate equilibrium.
//!
//! For each player `G = ∂ₛW + (r·x + πᵀ(b − r·1) − P − πᵀσh)·∂ₓW
//! + ½·πᵀΣπ·∂ₓₓW + Φ`, where `Φ` is the player's running reward plus the
//! entropy penalty. A candidate is an equilibrium when, at every surplus
//! level, `G ≥ 0` over the player's distortions (with the controls at the
//! candidate), `G ≤ 0` over the player's own control (with the distortion at
//! the candidate), and `G = 0` at the candidate itself.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game_one::{solve_game_one, GameOneSolution};
use crate::game_two::{solve_game_two, Barriers, GameTwoSolution};
use crate::market::{Preferences, ValidatedMarket};
use crate::sensitivity::Game;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Union,
    Firm,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Union, Player::Firm];

    pub fn label(self) -> &'static str {
        match self {
            Player::Union => "union",
            Player::Firm => "firm",
        }
    }
}

/// Closed-form value function of one player.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueShape {
    /// `coef·e^{−discount·s}·x^power/power`.
    Power {
        coef: f64,
        discount: f64,
        power: f64,
    },
    /// `scale·(x^power − lower^power)`, time independent.
    Band { scale: f64, power: f64, lower: f64 },
}

/// Value with its time and surplus derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueJet {
    pub w: f64,
    pub w_s: f64,
    pub w_x: f64,
    pub w_xx: f64,
}

impl ValueShape {
    pub fn jet(&self, s: f64, x: f64) -> ValueJet {
        match *self {
            ValueShape::Power {
                coef,
                discount,
                power,
            } => {
                let c = coef * (-discount * s).exp();
                let w_x = c * x.powf(power - 1.0);
                let w = w_x * x / power;
                ValueJet {
                    w,
                    w_s: -discount * w,
                    w_x,
                    w_xx: (power - 1.0) * w_x / x,
                }
            }
            ValueShape::Band {
                scale,
                power,
                lower,
            } => {
                let w_x = scale * power * x.powf(power - 1.0);
                ValueJet {
                    w: scale * (x.powf(power) - lower.powf(power)),
                    w_s: 0.0,
                    w_x,
                    w_xx: (power - 1.0) * w_x / x,
                }
            }
        }
    }
}

/// Running reward inside `Φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Running {
    /// Utility of the benefit: `e^{−discount·s}·P^power/power`.
    Benefit {
        discount: f64,
        power: f64,
    },
    /// Utility of the surplus: `e^{−discount·s}·x^power/power`.
    Surplus {
        discount: f64,
        power: f64,
    },
    None,
}

/// Entropy penalty `|h|²/(2·aversion)·weight·(W + offset)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalty {
    pub aversion: f64,
    pub weight: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayerSpec {
    pub value: ValueShape,
    pub running: Running,
    pub penalty: Penalty,
}

/// Inner products that enter the generator for one control/distortion
/// choice: `πᵀ(b − r·1)`, `πᵀσh`, `πᵀΣπ`, the benefit `P` and `|h|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlPoint {
    pub excess: f64,
    pub cross: f64,
    pub var: f64,
    pub benefit: f64,
    pub h_sq: f64,
}

impl PlayerSpec {
    /// `G` at `(s, x)` for the given controls and distortion.
    pub fn generator(&self, r: f64, s: f64, x: f64, c: &ControlPoint) -> f64 {
        let j = self.value.jet(s, x);
        self.generator_with(&j, r, s, x, c)
    }

    fn generator_with(&self, j: &ValueJet, r: f64, s: f64, x: f64, c: &ControlPoint) -> f64 {
        let drift = r * x + c.excess - c.benefit - c.cross;
        let running = match self.running {
            Running::Benefit { discount, power } => {
                (-discount * s).exp() * c.benefit.powf(power) / power
            }
            Running::Surplus { discount, power } => (-discount * s).exp() * x.powf(power) / power,
            Running::None => 0.0,
        };
        let penalty = if c.h_sq == 0.0 {
            0.0
        } else {
            c.h_sq / (2.0 * self.penalty.aversion)
                * self.penalty.weight
                * (j.w + self.penalty.offset)
        };
        j.w_s + drift * j.w_x + 0.5 * c.var * j.w_xx + running + penalty
    }
}

/// Candidate equilibrium in feedback form together with the players'
/// closed-form value functions.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub game: Game,
    pub r: f64,
    pub excess: DVector<f64>,
    pub sigma: DMatrix<f64>,
    pub cov: DMatrix<f64>,
    pub benefit_ratio: f64,
    pub invest_ratio: DVector<f64>,
    pub union_distortion: DVector<f64>,
    pub firm_distortion: DVector<f64>,
    pub union: PlayerSpec,
    pub firm: PlayerSpec,
    /// Surplus range on which the value functions apply, if bounded.
    pub band: Option<(f64, f64)>,
}

impl Candidate {
    fn market_parts(m: &ValidatedMarket) -> (f64, DVector<f64>, DMatrix<f64>, DMatrix<f64>) {
        (
            m.r(),
            m.excess().clone(),
            m.sigma().clone(),
            m.cov().clone(),
        )
    }

    pub fn game_one(sol: &GameOneSolution, m: &ValidatedMarket, p: &Preferences) -> Self {
        let (r, excess, sigma, cov) = Self::market_parts(m);
        let qu = 1.0 - p.gamma();
        let qf = 1.0 - p.delta();
        Self {
            game: Game::One,
            r,
            excess,
            sigma,
            cov,
            benefit_ratio: sol.benefit_ratio,
            invest_ratio: sol.invest_ratio.clone(),
            union_distortion: sol.union_distortion.clone(),
            firm_distortion: sol.firm_distortion.clone(),
            union: PlayerSpec {
                value: ValueShape::Power {
                    coef: sol.union_value_coef,
                    discount: p.alpha(),
                    power: qu,
                },
                running: Running::Benefit {
                    discount: p.alpha(),
                    power: qu,
                },
                penalty: Penalty {
                    aversion: p.lambda(),
                    weight: qu,
                    offset: 0.0,
                },
            },
            firm: PlayerSpec {
                value: ValueShape::Power {
                    coef: sol.firm_value_coef,
                    discount: p.beta(),
                    power: qf,
                },
                running: Running::Surplus {
                    discount: p.beta(),
                    power: qf,
                },
                penalty: Penalty {
                    aversion: p.mu(),
                    weight: qf,
                    offset: 0.0,
                },
            },
            band: None,
        }
    }

    pub fn game_two(
        sol: &GameTwoSolution,
        m: &ValidatedMarket,
        p: &Preferences,
        bar: &Barriers,
    ) -> Self {
        let (r, excess, sigma, cov) = Self::market_parts(m);
        let qu = 1.0 - p.gamma();
        let e = 1.0 - sol.firm_exponent;
        let (l, v) = (bar.lower(), bar.upper());
        Self {
            game: Game::Two,
            r,
            excess,
            sigma,
            cov,
            benefit_ratio: sol.benefit_ratio,
            invest_ratio: sol.invest_ratio.clone(),
            union_distortion: sol.union_distortion.clone(),
            firm_distortion: sol.firm_distortion.clone(),
            union: PlayerSpec {
                value: ValueShape::Power {
                    coef: sol.union_value_coef,
                    discount: p.alpha(),
                    power: qu,
                },
                running: Running::Benefit {
                    discount: p.alpha(),
                    power: qu,
                },
                penalty: Penalty {
                    aversion: p.lambda(),
                    weight: qu,
                    offset: 0.0,
                },
            },
            firm: PlayerSpec {
                value: ValueShape::Band {
                    scale: 1.0 / (v.powf(e) - l.powf(e)),
                    power: e,
                    lower: l,
                },
                running: Running::None,
                penalty: Penalty {
                    aversion: p.mu(),
                    weight: 1.0,
                    offset: sol.penalty_offset,
                },
            },
            band: Some((l, v)),
        }
    }

    /// Scales the union's value coefficient and re-derives the benefit ratio
    /// from it, leaving everything else unchanged. Used as a negative
    /// control: the result is no longer an equilibrium.
    pub fn with_union_coef_scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        if let ValueShape::Power { coef, power, .. } = &mut out.union.value {
            *coef *= factor;
            let gamma = 1.0 - *power;
            out.benefit_ratio = coef.powf(-1.0 / gamma);
        }
        out
    }

    pub fn spec(&self, player: Player) -> &PlayerSpec {
        match player {
            Player::Union => &self.union,
            Player::Firm => &self.firm,
        }
    }

    pub fn distortion(&self, player: Player) -> &DVector<f64> {
        match player {
            Player::Union => &self.union_distortion,
            Player::Firm => &self.firm_distortion,
        }
    }

    fn point(&self, pi: &DVector<f64>, benefit: f64, h: &DVector<f64>) -> ControlPoint {
        ControlPoint {
            excess: pi.dot(&self.excess),
            cross: (self.sigma.transpose() * pi).dot(h),
            var: (&self.cov * pi).dot(pi),
            benefit,
            h_sq: h.norm_squared(),
        }
    }

    /// `G` of `player` at `(s, x)` for arbitrary controls and distortion.
    pub fn generator(
        &self,
        player: Player,
        s: f64,
        x: f64,
        pi: &DVector<f64>,
        benefit: f64,
        h: &DVector<f64>,
    ) -> f64 {
        self.spec(player)
            .generator(self.r, s, x, &self.point(pi, benefit, h))
    }

    /// `G` of `player` at the candidate controls and distortion.
    pub fn residual(&self, player: Player, s: f64, x: f64) -> f64 {
        let pi = &self.invest_ratio * x;
        self.generator(
            player,
            s,
            x,
            &pi,
            self.benefit_ratio * x,
            self.distortion(player),
        )
    }

    /// Gradient of the firm's `G` with respect to the investment vector at
    /// the candidate: `((b − r·1) − σh)·∂ₓW + Σπ·∂ₓₓW`.
    pub fn invest_gradient(&self, s: f64, x: f64) -> DVector<f64> {
        let j = self.firm.value.jet(s, x);
        let pi = &self.invest_ratio * x;
        (&self.excess - &self.sigma * &self.firm_distortion) * j.w_x + (&self.cov * pi) * j.w_xx
    }

    /// Derivative of the union's `G` with respect to the benefit at the
    /// candidate: `−∂ₓW + e^{−αs}·P^{−γ}`.
    pub fn benefit_derivative(&self, s: f64, x: f64) -> f64 {
        let j = self.union.value.jet(s, x);
        let running = match self.union.running {
            Running::Benefit { discount, power } => {
                (-discount * s).exp() * (self.benefit_ratio * x).powf(power - 1.0)
            }
            _ => 0.0,
        };
        running - j.w_x
    }
}

/// Grid settings. Control and distortion grids span `1 ± rel_range` times
/// the candidate (or `± rel_range` additively for zero components).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HjbiGrid {
    pub x_points: usize,
    pub control_points: usize,
    pub rel_range: f64,
    /// Surplus range; `None` uses `[0.5, 2]` for unbounded value functions
    /// and the open barrier band otherwise.
    pub x_range: Option<(f64, f64)>,
    /// Relative tolerance; the absolute tolerance is `tol·(1 + |W|)`.
    pub tol: f64,
    pub time: f64,
}

impl Default for HjbiGrid {
    fn default() -> Self {
        Self {
            x_points: 41,
            control_points: 41,
            rel_range: 0.5,
            x_range: None,
            tol: 1e-9,
            time: 0.0,
        }
    }
}

impl HjbiGrid {
    fn validate(&self) -> Result<()> {
        if self.x_points < 2 || self.control_points < 1 {
            return Err(Error::InvalidGrid(
                "need at least 2 surplus points and 1 control point".into(),
            ));
        }
        if !(self.rel_range > 0.0) || !(self.tol > 0.0) {
            return Err(Error::InvalidGrid(
                "rel_range and tol must be positive".into(),
            ));
        }
        Ok(())
    }

    fn surplus_points(&self, band: Option<(f64, f64)>) -> Result<Vec<f64>> {
        let n = self.x_points;
        let pts = match (self.x_range, band) {
            (Some((a, b)), _) => {
                if !(0.0 < a && a < b) {
                    return Err(Error::InvalidGrid(format!("bad surplus range [{a}, {b}]")));
                }
                if let Some((l, v)) = band {
                    if a <= l || b >= v {
                        return Err(Error::InvalidGrid(format!(
                            "surplus range must lie inside ({l}, {v})"
                        )));
                    }
                }
                (0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect()
            }
            // Strictly inside the band.
            (None, Some((l, v))) => (1..=n)
                .map(|i| l + (v - l) * i as f64 / (n + 1) as f64)
                .collect(),
            (None, None) => (0..n)
                .map(|i| 0.5 + 1.5 * i as f64 / (n - 1) as f64)
                .collect(),
        };
        Ok(pts)
    }

    /// Multipliers `1 + rel_range·u`, `u` uniform on `[−1, 1]`; the middle
    /// point is exactly 1 for an odd count.
    fn offsets(&self) -> Vec<f64> {
        let n = self.control_points;
        if n == 1 {
            return vec![0.0];
        }
        (0..n)
            .map(|i| {
                let c = (n - 1) as f64 / 2.0;
                self.rel_range * (i as f64 - c) / c
            })
            .collect()
    }

    /// Vectors around `center`: each component along its own axis, then the
    /// whole vector scaled. Zero components move additively.
    fn vector_grid(&self, center: &DVector<f64>) -> Vec<DVector<f64>> {
        let offs = self.offsets();
        let shift = |c: f64, u: f64| if c == 0.0 { u } else { c * (1.0 + u) };
        let mut out = Vec::new();
        for k in 0..center.len() {
            for &u in &offs {
                let mut v = center.clone();
                v[k] = shift(center[k], u);
                out.push(v);
            }
        }
        if center.len() > 1 {
            for &u in &offs {
                out.push(center.map(|c| shift(c, u)));
            }
        }
        out
    }

    fn scalar_grid(&self, center: f64) -> Vec<f64> {
        self.offsets().iter().map(|&u| center * (1.0 + u)).collect()
    }
}

/// Sizes of the grids used in a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HjbiGridSize {
    pub x_points: usize,
    /// Distortions tried per player and surplus level.
    pub h_points: usize,
    /// Controls tried per player and surplus level.
    pub control_points: usize,
    pub evaluations: usize,
}

/// Worst point found for one property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub property: &'static str,
    pub player: Player,
    pub x: f64,
    /// Signed slack divided by `1 + |W|`.
    pub slack: f64,
}

/// Result of a grid scan. Slacks are normalised by `1 + |W|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HjbiReport {
    pub max_abs_residual_at_candidate: f64,
    /// Smallest `G` over distortions at the candidate controls; negative
    /// values violate the distortion property.
    pub min_over_h_slack: f64,
    /// Largest `G` over own controls at the candidate distortion; positive
    /// values violate the control property.
    pub max_over_controls_slack: f64,
    /// Whether, at every surplus level and for each player, the smallest `G`
    /// over the distortion grid sits at the candidate distortion (ties within
    /// tolerance count).
    pub argmin_at_candidate: bool,
    pub grid_size: HjbiGridSize,
    pub tol: f64,
    pub violations: Vec<Violation>,
}

impl HjbiReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Extremes at one surplus level for one player.
struct PointScan {
    x: f64,
    player: Player,
    residual: f64,
    min_h: f64,
    argmin_ok: bool,
    max_ctrl: f64,
}

/// Scans both players' properties on the grid and reports the extremes
/// without failing.
pub fn hjbi_scan(cand: &Candidate, grid: &HjbiGrid) -> Result<HjbiReport> {
    grid.validate()?;
    let xs = grid.surplus_points(cand.band)?;
    let s = grid.time;
    let tol = grid.tol;

    // Distortion grids; a player without ambiguity aversion cannot distort.
    let h_grid = |player: Player| -> (Vec<DVector<f64>>, usize) {
        let center = cand.distortion(player);
        if cand.spec(player).penalty.aversion == 0.0 {
            (vec![DVector::zeros(center.len())], 0)
        } else {
            let g = grid.vector_grid(center);
            // Index of the unperturbed centre on the first axis line.
            (g, grid.control_points / 2)
        }
    };
    let (hu, hu_c) = h_grid(Player::Union);
    let (hf, hf_c) = h_grid(Player::Firm);
    let benefit_mults = grid.scalar_grid(1.0);
    let invest_dirs = grid.vector_grid(&cand.invest_ratio);

    let tasks: Vec<(f64, Player)> = xs
        .iter()
        .flat_map(|&x| Player::BOTH.into_iter().map(move |pl| (x, pl)))
        .collect();
    let scans: Vec<PointScan> = tasks
        .par_iter()
        .map(|&(x, player)| {
            let spec = cand.spec(player);
            let jet = spec.value.jet(s, x);
            let scale = 1.0 + jet.w.abs();
            let pi_star = &cand.invest_ratio * x;
            let benefit_star = cand.benefit_ratio * x;
            let h_star = cand.distortion(player);
            let g = |pi: &DVector<f64>, benefit: f64, h: &DVector<f64>| {
                spec.generator_with(&jet, cand.r, s, x, &cand.point(pi, benefit, h)) / scale
            };

            let residual = g(&pi_star, benefit_star, h_star);

            let (hs, centre) = match player {
                Player::Union => (&hu, hu_c),
                Player::Firm => (&hf, hf_c),
            };
            let vals: Vec<f64> = hs.iter().map(|h| g(&pi_star, benefit_star, h)).collect();
            let min_h = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let argmin_ok = vals[centre] <= min_h + tol;

            let max_ctrl = match player {
                Player::Union => benefit_mults
                    .iter()
                    .map(|&k| g(&pi_star, benefit_star * k, h_star))
                    .fold(f64::NEG_INFINITY, f64::max),
                Player::Firm => invest_dirs
                    .iter()
                    .map(|d| g(&(d * x), benefit_star, h_star))
                    .fold(f64::NEG_INFINITY, f64::max),
            };
            PointScan {
                x,
                player,
                residual,
                min_h,
                argmin_ok,
                max_ctrl,
            }
        })
        .collect();

    let mut report = HjbiReport {
        max_abs_residual_at_candidate: 0.0,
        min_over_h_slack: f64::INFINITY,
        max_over_controls_slack: f64::NEG_INFINITY,
        argmin_at_candidate: true,
        grid_size: HjbiGridSize {
            x_points: xs.len(),
            h_points: hu.len().max(hf.len()),
            control_points: invest_dirs.len().max(benefit_mults.len()),
            evaluations: xs.len()
                * (3 + hu.len() + hf.len() + invest_dirs.len() + benefit_mults.len()),
        },
        tol,
        violations: Vec::new(),
    };
    let mut worst: [Option<Violation>; 3] = [None, None, None];
    let mut note = |slot: usize, property: &'static str, sc: &PointScan, slack: f64, bad: bool| {
        if bad
            && worst[slot]
                .as_ref()
                .is_none_or(|w| slack.abs() > w.slack.abs())
        {
            worst[slot] = Some(Violation {
                property,
                player: sc.player,
                x: sc.x,
                slack,
            });
        }
    };
    for sc in &scans {
        // NaN compares false, so a non-finite value is flagged as a violation.
        report.max_abs_residual_at_candidate =
            report.max_abs_residual_at_candidate.max(sc.residual.abs());
        report.min_over_h_slack = report.min_over_h_slack.min(sc.min_h);
        report.max_over_controls_slack = report.max_over_controls_slack.max(sc.max_ctrl);
        report.argmin_at_candidate &= sc.argmin_ok;
        note(0, "distortion", sc, sc.min_h, !(sc.min_h >= -tol));
        note(1, "control", sc, sc.max_ctrl, !(sc.max_ctrl <= tol));
        note(2, "residual", sc, sc.residual, !(sc.residual.abs() <= tol));
    }
    report.violations = worst.into_iter().flatten().collect();
    Ok(report)
}

/// Scans the grid and fails with the worst violation, if any.
pub fn hjbi_grid_check(cand: &Candidate, grid: &HjbiGrid) -> Result<HjbiReport> {
    let report = hjbi_scan(cand, grid)?;
    if let Some(v) = report.violations.last() {
        return Err(Error::PropertyViolation {
            property: v.property,
            x: v.x,
            detail: format!("{} player, {:?} game", v.player.label(), cand.game),
            slack: v.slack,
        });
    }
    Ok(report)
}

/// Solves the chosen game and scans its candidate.
pub fn check_game(
    game: Game,
    m: &ValidatedMarket,
    p: &Preferences,
    bar: &Barriers,
    grid: &HjbiGrid,
) -> Result<HjbiReport> {
    let cand = match game {
        Game::One => Candidate::game_one(&solve_game_one(m, p)?, m, p),
        Game::Two => Candidate::game_two(&solve_game_two(m, p, bar)?, m, p, bar),
    };
    hjbi_scan(&cand, grid)
}
