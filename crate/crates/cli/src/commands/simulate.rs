use pensiongame_core::game_two::firm_value_g2;
use pensiongame_core::stochastics::{
    exit_probability_gbm, mc_firm_payoff_g2, mc_payoff_g1, sample_paths, McEstimate, PathGrid, Side,
};
use pensiongame_core::{
    solve_game_one, solve_game_two, value_functions_g1, wealth_law_g1, wealth_law_g2, GbmLaw,
    Measure,
};
use serde::Serialize;

use super::{Scenario, Session};
use crate::config::{GameChoice, SimulationConfig};
use crate::error::CliError;
use crate::output::fmt_f64;

pub const PATHS_FILE: &str = "paths.csv";
pub const PAYOFF_FILE: &str = "payoff.json";

/// Grid and law settings echoed next to every estimate.
#[derive(Debug, Serialize)]
struct Settings {
    law: Measure,
    x0: f64,
    t0: f64,
    dt: f64,
    n_steps: usize,
    horizon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail_limit: Option<f64>,
}

impl Settings {
    fn new(law: Measure, x0: f64, grid: &PathGrid, tail_limit: Option<f64>) -> Self {
        Self {
            law,
            x0,
            t0: grid.t0,
            dt: grid.dt,
            n_steps: grid.n_steps,
            horizon: grid.t_end() - grid.t0,
            tail_limit,
        }
    }
}

#[derive(Debug, Serialize)]
struct PayoffRecord {
    mean: f64,
    std_err: f64,
    n: u64,
    seed: u64,
    /// Closed-form value at the start.
    target: f64,
    settings: Settings,
}

#[derive(Debug, Serialize)]
struct GameOnePayoffs {
    union: PayoffRecord,
    firm: PayoffRecord,
}

#[derive(Debug, Serialize)]
struct BarrierRecord {
    estimate: f64,
    std_err: f64,
    censored_count: u64,
    n: u64,
    seed: u64,
    target: f64,
    exit_probability: McEstimate,
    exit_probability_target: f64,
    settings: Settings,
}

fn start_value(sc: &Scenario, sim: &SimulationConfig) -> f64 {
    match (sim.x0, sc.game) {
        (Some(x), _) => x,
        (None, GameChoice::Two) => sc.barriers().start(),
        (None, _) => 1.0,
    }
}

/// Writes `paths.csv` (unless disabled) and, when requested, `payoff.json`.
///
/// The path file holds one row per path and grid point after the start, so
/// `n_paths·n_steps` rows; the start value is the same for every path.
/// Dumped paths follow the unstopped surplus law even in the barrier game.
pub fn cmd_simulate(session: &mut Session, sc: &Scenario) -> Result<(), CliError> {
    let sim =
        sc.config.simulation.as_ref().ok_or_else(|| {
            CliError::ConfigParse("simulate requires a [simulation] block".into())
        })?;
    let grid = sim.grid(sc.game)?;
    let x0 = start_value(sc, sim);
    let (m, p) = (&sc.market, &sc.prefs);

    let law: GbmLaw = match sc.game {
        GameChoice::One => wealth_law_g1(&solve_game_one(m, p)?, m, p, sim.measure),
        GameChoice::Two => wealth_law_g2(&solve_game_two(m, p, &sc.barriers())?, m, p, sim.measure),
        GameChoice::Pareto => {
            return Err(CliError::ConfigParse(
                "simulate supports games 1 and 2 only".into(),
            ))
        }
    };
    session.feasibility.insert(sc.game.label().into(), true);

    if sim.write_paths {
        let paths = sample_paths(&law, x0, &grid)?;
        let rows = (0..paths.n_paths).flat_map(|i| {
            let row = paths.path(i);
            let times = &paths.times;
            (1..times.len()).map(move |k| [fmt_f64(times[k]), i.to_string(), fmt_f64(row[k])])
        });
        session
            .out
            .write_csv(PATHS_FILE, ["t", "path_id", "X"], rows)?;
    }

    if sim.payoff {
        match sc.game {
            GameChoice::One => {
                let sol = solve_game_one(m, p)?;
                let (wu, wf) = value_functions_g1(&sol, p, grid.t0, x0)?;
                let limit = sim.tail_limit();
                let one =
                    |side: Side, law: Measure, target: f64| -> Result<PayoffRecord, CliError> {
                        let est = mc_payoff_g1(&sol, m, p, side, x0, &grid, limit)?;
                        Ok(PayoffRecord {
                            mean: est.mean,
                            std_err: est.std_err,
                            n: est.n,
                            seed: est.seed,
                            target,
                            settings: Settings::new(law, x0, &grid, Some(limit)),
                        })
                    };
                let record = GameOnePayoffs {
                    union: one(Side::Union, Measure::WorstCaseUnion, wu)?,
                    firm: one(Side::Firm, Measure::WorstCaseFirm, wf)?,
                };
                session.out.write_json(PAYOFF_FILE, &record)?;
            }
            GameChoice::Two => {
                let bar = sc.barriers();
                if sim.x0.is_some_and(|x| x != bar.start()) {
                    return Err(CliError::ConfigParse(
                        "the barrier payoff starts at the barrier start; drop simulation.x0".into(),
                    ));
                }
                let sol = solve_game_two(m, p, &bar)?;
                let est = mc_firm_payoff_g2(&sol, m, p, &bar, &grid)?;
                let firm_law = wealth_law_g2(&sol, m, p, Measure::WorstCaseFirm);
                let record = BarrierRecord {
                    estimate: est.payoff.mean,
                    std_err: est.payoff.std_err,
                    censored_count: est.censored,
                    n: est.payoff.n,
                    seed: est.payoff.seed,
                    target: firm_value_g2(&sol, &bar, bar.start())?,
                    exit_probability: est.exit_probability,
                    exit_probability_target: exit_probability_gbm(
                        &firm_law,
                        bar.lower(),
                        bar.upper(),
                        bar.start(),
                    )?,
                    settings: Settings::new(Measure::WorstCaseFirm, bar.start(), &grid, None),
                };
                session.out.write_json(PAYOFF_FILE, &record)?;
            }
            GameChoice::Pareto => unreachable!("rejected above"),
        }
    }
    Ok(())
}
