use pensiongame_core::sensitivity::{sweep, Game, MarketKind};
use pensiongame_core::{validate_market, MarketParams};

use super::{Scenario, Session};
use crate::error::CliError;

/// File name of the table for one game in one market, e.g. `game1_bull.csv`.
pub fn sweep_file_name(game: Game, market: MarketKind) -> String {
    format!("{}_{}.csv", game.label(), market.label())
}

/// Writes one CSV per (game, market) pair. The markets are the two preset
/// parameter sets and the scenario's preferences fill every parameter that
/// is not on an axis.
pub fn cmd_sweep(session: &mut Session, sc: &Scenario) -> Result<(), CliError> {
    let spec = sc
        .config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::ConfigParse("sweep requires a [sweep] block".into()))?
        .spec()?;
    let bull = validate_market(&MarketParams::bull())?;
    let bear = validate_market(&MarketParams::bear())?;
    for table in sweep(&bull, &bear, &sc.prefs, &spec, &sc.barriers()) {
        let name = sweep_file_name(table.game, table.market);
        let feasible = table.cells.iter().filter(|c| c.feasible()).count();
        session
            .feasibility
            .insert(name.trim_end_matches(".csv").to_string(), feasible > 0);
        session
            .out
            .write_csv(&name, table.header(), table.records())?;
    }
    Ok(())
}
