use pensiongame_core::game_two::firm_value_g2;
use pensiongame_core::{
    solve_game_one, solve_game_two, solve_pareto, GameOneSolution, GameTwoSolution, ParetoSolution,
};
use serde::Serialize;

use super::{to_vec, Scenario, Session};
use crate::config::GameChoice;
use crate::error::{CliError, ErrorRecord};

pub const SOLUTION_FILE: &str = "solution.json";

#[derive(Debug, Serialize)]
struct SolveRecord {
    game: GameChoice,
    feasible: bool,
    sharpe: SharpeRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    solution: Option<SolutionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorRecord>,
}

#[derive(Debug, Serialize)]
struct SharpeRecord {
    theta: Vec<f64>,
    theta_sq: f64,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum SolutionRecord {
    One(GameOneRecord),
    Two(GameTwoRecord),
    Pareto(ParetoRecord),
}

#[derive(Debug, Serialize)]
struct GameOneRecord {
    benefit_ratio: f64,
    union_value_coef: f64,
    firm_value_coef: f64,
    invest_ratio: Vec<f64>,
    invest_signs: Vec<i8>,
    union_distortion: Vec<f64>,
    firm_distortion: Vec<f64>,
    firm_aversion: f64,
}

impl From<&GameOneSolution> for GameOneRecord {
    fn from(s: &GameOneSolution) -> Self {
        Self {
            benefit_ratio: s.benefit_ratio,
            union_value_coef: s.union_value_coef,
            firm_value_coef: s.firm_value_coef,
            invest_ratio: to_vec(&s.invest_ratio),
            invest_signs: s.invest_signs(),
            union_distortion: to_vec(&s.union_distortion),
            firm_distortion: to_vec(&s.firm_distortion),
            firm_aversion: s.firm_aversion,
        }
    }
}

#[derive(Debug, Serialize)]
struct GameTwoRecord {
    benefit_ratio: f64,
    discriminant: f64,
    effective_aversion: f64,
    firm_exponent: f64,
    union_value_coef: f64,
    penalty_offset: f64,
    invest_ratio: Vec<f64>,
    union_distortion: Vec<f64>,
    firm_distortion: Vec<f64>,
    union_moment_decay: f64,
    /// Firm value at the barrier start.
    firm_value_at_start: f64,
}

impl GameTwoRecord {
    fn new(s: &GameTwoSolution, firm_value_at_start: f64) -> Self {
        Self {
            benefit_ratio: s.benefit_ratio,
            discriminant: s.discriminant,
            effective_aversion: s.effective_aversion,
            firm_exponent: s.firm_exponent,
            union_value_coef: s.union_value_coef,
            penalty_offset: s.penalty_offset,
            invest_ratio: to_vec(&s.invest_ratio),
            union_distortion: to_vec(&s.union_distortion),
            firm_distortion: to_vec(&s.firm_distortion),
            union_moment_decay: s.union_moment_decay,
            firm_value_at_start,
        }
    }
}

#[derive(Debug, Serialize)]
struct ParetoRecord {
    benefit_ratio: f64,
    value_coef: f64,
    invest_ratio: Vec<f64>,
    distortion: Vec<f64>,
}

impl From<&ParetoSolution> for ParetoRecord {
    fn from(s: &ParetoSolution) -> Self {
        Self {
            benefit_ratio: s.benefit_ratio,
            value_coef: s.value_coef,
            invest_ratio: to_vec(&s.invest_ratio),
            distortion: to_vec(&s.distortion),
        }
    }
}

fn solve_record(sc: &Scenario) -> Result<SolutionRecord, pensiongame_core::Error> {
    let (m, p) = (&sc.market, &sc.prefs);
    Ok(match sc.game {
        GameChoice::One => SolutionRecord::One((&solve_game_one(m, p)?).into()),
        GameChoice::Two => {
            let bar = sc.barriers();
            let sol = solve_game_two(m, p, &bar)?;
            let wf = firm_value_g2(&sol, &bar, bar.start())?;
            SolutionRecord::Two(GameTwoRecord::new(&sol, wf))
        }
        GameChoice::Pareto => SolutionRecord::Pareto((&solve_pareto(m, p)?).into()),
    })
}

/// Writes the equilibrium of the configured game. An infeasible scenario
/// still produces the file, with the error in place of the solution.
pub fn cmd_solve(session: &mut Session, sc: &Scenario) -> Result<(), CliError> {
    let sharpe = SharpeRecord {
        theta: to_vec(&sc.market.sharpe().theta),
        theta_sq: sc.market.theta_sq(),
    };
    let (record, result) = match solve_record(sc) {
        Ok(sol) => (
            SolveRecord {
                game: sc.game,
                feasible: true,
                sharpe,
                solution: Some(sol),
                error: None,
            },
            Ok(()),
        ),
        Err(e) => {
            let err = CliError::from(e);
            (
                SolveRecord {
                    game: sc.game,
                    feasible: false,
                    sharpe,
                    solution: None,
                    error: Some(err.record()),
                },
                Err(err),
            )
        }
    };
    session
        .feasibility
        .insert(sc.game.label().into(), record.feasible);
    session.out.write_json(SOLUTION_FILE, &record)?;
    result
}
