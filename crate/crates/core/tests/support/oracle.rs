//! Reference values from an independent 40-digit evaluation of the closed forms.
//! Shared by unit, integration and acceptance tests.
#![allow(dead_code, clippy::excessive_precision)]

pub const BULL_THETA: f64 = 1.2523632303684406;
pub const BULL_THETA_SQ: f64 = 1.5684136607788759;
pub const BULL_BENEFIT: f64 = 0.14570113839823965;
pub const BULL_A: f64 = 47.10577029158661;
pub const BULL_B: f64 = 6.8633643566101465;
pub const BULL_INVEST: f64 = 3.8840194466208927;
pub const BULL_H: f64 = 0.41745441012281355;
pub const BULL_AMBFREE_BENEFIT: f64 = 0.21105170759735949;
pub const BULL_L1M0_BENEFIT: f64 = 0.11302585379867975;
pub const BULL_LOGDRIFT_REF: f64 = 0.29996932292922588;
pub const BULL_LOGDRIFT_UNION: f64 = 0.12570113839823967;
pub const BULL_D_LAMBDA: f64 = -0.043567046132746553;
pub const BULL_UNION_DECAY: f64 = 0.058567046132746561;
pub const BULL_FIRM_DECAY: f64 = 0.058567046132746561;
pub const BULL_MOMENT_REF_M1: f64 = 0.80828930753770926;
pub const BULL_G2_OMEGA: f64 = 15.338254435131508;
pub const BULL_G2_ETA: f64 = 16.931393816812787;
pub const BEAR_THETA: f64 = 0.014936519790888723;
pub const BEAR_THETA_SQ: f64 = 0.0002230996234636105;
pub const BEAR_DISC: f64 = 1.338597740781663e-5;
pub const BEAR_OMEGA: f64 = 0.18293426010329934;
pub const BEAR_ETA: f64 = 0.092149177892554817;
pub const BEAR_BENEFIT: f64 = 0.010609780867010998;
pub const BEAR_INVEST: f64 = 0.30489043350549889;
pub const BEAR_HU: f64 = 0.081649658092772603;
pub const BEAR_HF: f64 = 0.0074125709224315423;
pub const BEAR_C: f64 = 1.1412289356304886;
pub const BEAR_WF_15: f64 = 0.50783452510018672;
pub const BEAR_FIRM_SDE_DRIFT: f64 = 4.5469856060343286e-6;
pub const BEAR_VAR_RATE: f64 = 0.0066666666666666667;
pub const BEAR_RHO: f64 = 0.9986359043181897;
pub const BEAR_EXIT_PROB: f64 = 0.50011588083219083;
