//! The four commands and the run wrapper that writes the run report.

mod simulate;
mod solve;
mod sweep;
mod verify;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DVector;
use pensiongame_core::sensitivity::default_barriers;
use pensiongame_core::{validate_market, Barriers, Preferences, ValidatedMarket};
use serde::Serialize;

pub use simulate::{cmd_simulate, PATHS_FILE, PAYOFF_FILE};
pub use solve::{cmd_solve, SOLUTION_FILE};
pub use sweep::{cmd_sweep, sweep_file_name};
pub use verify::{cmd_verify, run_checks, Check, VERIFICATION_FILE};

use crate::config::{GameChoice, ScenarioConfig};
use crate::error::{CliError, ErrorRecord};
use crate::output::Outputs;

pub const REPORT_FILE: &str = "run_report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Solve,
    Sweep,
    Verify,
    Simulate,
}

/// Validated view of a scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub game: GameChoice,
    pub market: ValidatedMarket,
    pub prefs: Preferences,
    pub config: ScenarioConfig,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self, CliError> {
        config.validate()?;
        let market = validate_market(&config.market)
            .map_err(|e| CliError::ConfigParse(format!("market: {e}")))?;
        Ok(Self {
            game: config.game,
            market,
            prefs: config.preferences,
            config,
        })
    }

    /// Configured barriers, or the sweep defaults when there are none.
    pub fn barriers(&self) -> Barriers {
        self.config.barriers.unwrap_or_else(default_barriers)
    }
}

/// State shared by a command and the run report.
#[derive(Debug)]
pub struct Session {
    pub out: Outputs,
    pub feasibility: BTreeMap<String, bool>,
}

impl Session {
    pub fn new(out_dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        Ok(Self {
            out: Outputs::new(out_dir)?,
            feasibility: BTreeMap::new(),
        })
    }
}

/// Summary of one invocation, written next to its artifacts.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Command,
    pub config: ScenarioConfig,
    /// Every file written by the run, this report included, once each.
    pub outputs: Vec<PathBuf>,
    pub feasibility: BTreeMap<String, bool>,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    pub threads: usize,
    pub wall_time_secs: f64,
}

/// Command-line level options.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

pub(crate) fn to_vec(v: &DVector<f64>) -> Vec<f64> {
    v.iter().copied().collect()
}

/// Runs one command on an already parsed scenario and writes the report.
/// The report is written even when the command fails after parsing.
pub fn execute(
    command: Command,
    config: ScenarioConfig,
    out_dir: &Path,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let scenario = Scenario::new(config)?;
    let mut session = Session::new(out_dir)?;
    let result = match command {
        Command::Solve => cmd_solve(&mut session, &scenario),
        Command::Sweep => cmd_sweep(&mut session, &scenario),
        Command::Verify => cmd_verify(&mut session, &scenario),
        Command::Simulate => cmd_simulate(&mut session, &scenario),
    };
    if let Err(CliError::Infeasible(_)) = &result {
        session
            .feasibility
            .entry(scenario.game.label().into())
            .or_insert(false);
    }
    let report_path = out_dir.join(REPORT_FILE);
    let mut outputs = session.out.written().to_vec();
    if !outputs.contains(&report_path) {
        outputs.push(report_path);
    }
    let report = RunReport {
        command,
        config: scenario.config,
        outputs,
        feasibility: session.feasibility,
        exit_code: result.as_ref().map_or_else(|e| e.exit_code(), |_| 0),
        error: result.as_ref().err().map(CliError::record),
        threads: rayon::current_num_threads(),
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    session.out.write_json(REPORT_FILE, &report)?;
    result.map(|_| report)
}

/// Loads the scenario, applies the overrides and runs `command` on a thread
/// pool of the requested size.
pub fn run(command: Command, opts: &RunOptions) -> Result<RunReport, CliError> {
    let mut config = ScenarioConfig::load(&opts.config)?;
    if let Some(seed) = opts.seed {
        if command == Command::Verify && config.verify.is_none() {
            config.verify = Some(Default::default());
        }
        config.override_seed(seed);
    }
    match opts.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::ConfigParse(format!("cannot build thread pool: {e}")))?;
            pool.install(|| execute(command, config, &opts.out))
        }
        None => execute(command, config, &opts.out),
    }
}
