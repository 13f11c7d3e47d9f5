//! Shared fixtures for the benchmarks.

use pensiongame_core::{validate_market, Barriers, MarketParams, Preferences, ValidatedMarket};

pub fn bull() -> ValidatedMarket {
    validate_market(&MarketParams::bull()).expect("preset market is valid")
}

pub fn bear() -> ValidatedMarket {
    validate_market(&MarketParams::bear()).expect("preset market is valid")
}

/// Symmetric preferences used throughout the sweeps.
pub fn base_prefs() -> Preferences {
    Preferences::new(0.02, 0.02, 2.0, 2.0, 1.0, 1.0).expect("valid preferences")
}

/// Preferences with a weakly ambiguity-averse firm, feasible for the barrier game in the bear market.
pub fn barrier_prefs() -> Preferences {
    Preferences::new(0.02, 0.02, 2.0, 2.0, 1.0, 0.1).expect("valid preferences")
}

pub fn barriers() -> Barriers {
    Barriers::new(1.0, 2.0, 1.5).expect("valid barriers")
}
