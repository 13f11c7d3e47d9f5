use pensiongame_core::game_two::firm_value_g2;
use pensiongame_core::sensitivity::{
    benefit_ratio_gradient, fd_gradient, SensitivityParam, DEFAULT_FD_STEP,
};
use pensiongame_core::stochastics::{
    analytic_payoff_g1, exit_probability_gbm, gbm_moment, hjbi_scan, mc_firm_payoff_g2,
    mc_payoff_g1, sample_paths, Candidate, HjbiReport, PathGrid, Side, DEFAULT_HORIZON_CAP,
};
use pensiongame_core::{
    solve_game_one, solve_game_two, solve_pareto, value_functions_g1, wealth_law_g1, wealth_law_g2,
    GbmLaw, Measure,
};
use serde::Serialize;

use super::{Scenario, Session};
use crate::config::{GameChoice, VerifyConfig};
use crate::error::CliError;

pub const VERIFICATION_FILE: &str = "verification.json";

/// Surplus at which value functions and payoffs are compared.
const START: f64 = 1.0;
const PAYOFF_REL_TOL: f64 = 1e-9;
const FD_REL_TOL: f64 = 1e-6;
const SYMMETRY_REL_TOL: f64 = 1e-8;
const PARETO_COEF_REL_TOL: f64 = 1e-10;
const PARETO_VEC_TOL: f64 = 1e-12;
const MOMENT_SE: f64 = 4.0;
const PAYOFF_SE: f64 = 3.0;

/// One comparison. `tolerance` is the absolute bound on `|achieved − target|`
/// unless the name says otherwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub target: f64,
    pub achieved: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn close(name: impl Into<String>, target: f64, achieved: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            target,
            achieved,
            tolerance,
            pass: (achieved - target).abs() <= tolerance,
        }
    }

    fn flag(
        name: impl Into<String>,
        target: f64,
        achieved: f64,
        tolerance: f64,
        pass: bool,
    ) -> Self {
        Self {
            name: name.into(),
            target,
            achieved,
            tolerance,
            pass,
        }
    }
}

/// A check that could not be evaluated at this scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

/// Everything the suite produced.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub checks: Vec<Check>,
    pub skipped: Vec<Skipped>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hjbi: Option<HjbiReport>,
}

#[derive(Debug, Serialize)]
struct VerificationRecord<'a> {
    game: GameChoice,
    negative_control: bool,
    seed: u64,
    passed: usize,
    failed: usize,
    all_passed: bool,
    #[serde(flatten)]
    body: &'a Verification,
}

/// Runs the checks and writes `verification.json`; any failed check turns
/// into [`CliError::VerificationFailed`] after the file is written.
pub fn cmd_verify(session: &mut Session, sc: &Scenario) -> Result<(), CliError> {
    let cfg = sc.config.verify.clone().unwrap_or_default();
    let v = run_checks(sc, &cfg)?;
    session.feasibility.insert(sc.game.label().into(), true);
    let failed = v.checks.iter().filter(|c| !c.pass).count();
    let record = VerificationRecord {
        game: sc.game,
        negative_control: cfg.negative_control,
        seed: cfg.seed,
        passed: v.checks.len() - failed,
        failed,
        all_passed: failed == 0,
        body: &v,
    };
    session.out.write_json(VERIFICATION_FILE, &record)?;
    if failed > 0 {
        return Err(CliError::VerificationFailed {
            failed,
            total: v.checks.len(),
        });
    }
    Ok(())
}

/// The suite for the scenario's game.
pub fn run_checks(sc: &Scenario, cfg: &VerifyConfig) -> Result<Verification, CliError> {
    let mut out = Verification {
        checks: Vec::new(),
        skipped: Vec::new(),
        hjbi: None,
    };
    let (m, p) = (&sc.market, &sc.prefs);
    match sc.game {
        GameChoice::One => {
            let sol = solve_game_one(m, p)?;
            let (wu, wf) = value_functions_g1(&sol, p, 0.0, START)?;
            for (side, label, target) in [(Side::Union, "union", wu), (Side::Firm, "firm", wf)] {
                let analytic = analytic_payoff_g1(&sol, m, p, side, 0.0, START)?;
                out.checks.push(Check::close(
                    format!("analytic_payoff_{label} (relative {PAYOFF_REL_TOL:e})"),
                    target,
                    analytic,
                    PAYOFF_REL_TOL * target.abs(),
                ));
                // A short horizon keeps the sample variance finite; the
                // remainder is the analytic tail.
                let grid = PathGrid::covering(
                    0.0,
                    cfg.payoff_horizon,
                    cfg.payoff_dt,
                    cfg.payoff_paths,
                    cfg.seed,
                )?;
                let est = mc_payoff_g1(&sol, m, p, side, START, &grid, 1.0)?;
                out.checks.push(Check::close(
                    format!("mc_payoff_{label} ({PAYOFF_SE} std errors)"),
                    target,
                    est.mean,
                    PAYOFF_SE * est.std_err,
                ));
            }
            moment_checks(&mut out, sc, cfg, |measure| {
                wealth_law_g1(&sol, m, p, measure)
            })?;
            gradient_checks(&mut out, sc);
            hjbi_checks(&mut out, Candidate::game_one(&sol, m, p), cfg)?;
        }
        GameChoice::Two => {
            let bar = sc.barriers();
            let sol = solve_game_two(m, p, &bar)?;
            moment_checks(&mut out, sc, cfg, |measure| {
                wealth_law_g2(&sol, m, p, measure)
            })?;
            let grid = PathGrid::covering(
                0.0,
                DEFAULT_HORIZON_CAP,
                cfg.barrier_dt,
                cfg.barrier_paths,
                cfg.seed,
            )?;
            let est = mc_firm_payoff_g2(&sol, m, p, &bar, &grid)?;
            let target = firm_value_g2(&sol, &bar, bar.start())?;
            let tol = (PAYOFF_SE * est.payoff.std_err).max(cfg.barrier_abs_tol);
            out.checks.push(Check::close(
                format!(
                    "mc_firm_barrier_payoff (max of {PAYOFF_SE} std errors and {})",
                    cfg.barrier_abs_tol
                ),
                target,
                est.payoff.mean,
                tol,
            ));
            let law = wealth_law_g2(&sol, m, p, Measure::WorstCaseFirm);
            let pe = exit_probability_gbm(&law, bar.lower(), bar.upper(), bar.start())?;
            out.checks.push(Check::close(
                format!("mc_exit_probability ({PAYOFF_SE} std errors)"),
                pe,
                est.exit_probability.mean,
                PAYOFF_SE * est.exit_probability.std_err,
            ));
            hjbi_checks(&mut out, Candidate::game_two(&sol, m, p, &bar), cfg)?;
        }
        GameChoice::Pareto => pareto_checks(&mut out, sc)?,
    }
    Ok(out)
}

/// Sample moments of `X(1)` from one start against the closed form, for
/// every measure and exponent.
fn moment_checks(
    out: &mut Verification,
    sc: &Scenario,
    cfg: &VerifyConfig,
    law_of: impl Fn(Measure) -> GbmLaw,
) -> Result<(), CliError> {
    let (g, d) = (sc.prefs.gamma(), sc.prefs.delta());
    let mut exps: Vec<f64> = Vec::new();
    for e in [1.0, 1.0 - g, 2.0 - 2.0 * g, 1.0 - d, 2.0 - 2.0 * d] {
        if !exps.contains(&e) {
            exps.push(e);
        }
    }
    let grid = PathGrid::new(0.0, 1.0, 1, cfg.moment_paths, cfg.seed)?;
    for measure in Measure::ALL {
        let law = law_of(measure);
        let paths = sample_paths(&law, START, &grid)?;
        let end: Vec<f64> = (0..paths.n_paths).map(|i| paths.path(i)[1]).collect();
        for &e in &exps {
            let powered: Vec<f64> = end.iter().map(|x| x.powf(e)).collect();
            let est = pensiongame_core::stochastics::McEstimate::from_samples(&powered, cfg.seed);
            let target = gbm_moment(&law, START, e, 1.0)?;
            out.checks.push(Check::close(
                format!(
                    "moment_{}_exp_{e} ({MOMENT_SE} std errors)",
                    measure_name(measure)
                ),
                target,
                est.mean,
                MOMENT_SE * est.std_err,
            ));
        }
    }
    Ok(())
}

fn measure_name(m: Measure) -> &'static str {
    match m {
        Measure::Reference => "reference",
        Measure::WorstCaseUnion => "worst_case_union",
        Measure::WorstCaseFirm => "worst_case_firm",
    }
}

/// Analytic partials of the benefit ratio against Richardson differences,
/// plus the equality of the two firm-side partials.
fn gradient_checks(out: &mut Verification, sc: &Scenario) {
    let (m, p) = (&sc.market, &sc.prefs);
    let g = benefit_ratio_gradient(m, p);
    let sharpe = match g.d_theta {
        Some(d) => (SensitivityParam::Theta, d),
        None => (SensitivityParam::ThetaSq, g.d_theta_sq),
    };
    let cases = [
        (SensitivityParam::Alpha, g.d_alpha),
        (SensitivityParam::R, g.d_r),
        sharpe,
        (SensitivityParam::Mu, g.d_firm_aversion),
        (SensitivityParam::Delta, g.d_firm_aversion),
        (SensitivityParam::Gamma, g.d_gamma),
        (SensitivityParam::Lambda, g.d_lambda),
    ];
    let ratio = solve_game_one(m, p).map_or(0.0, |s| s.benefit_ratio.abs());
    let mut firm = Vec::new();
    for (param, analytic) in cases {
        let name = format!(
            "gradient_{} (relative {FD_REL_TOL:e} plus round-off)",
            param.name()
        );
        match fd_gradient(m, p, param, DEFAULT_FD_STEP) {
            Ok(fd) => {
                let floor = round_off(ratio, param_value(sc, param));
                if matches!(param, SensitivityParam::Mu | SensitivityParam::Delta) {
                    firm.push((fd, floor));
                }
                out.checks.push(Check::close(
                    name,
                    analytic,
                    fd,
                    FD_REL_TOL * analytic.abs() + floor,
                ))
            }
            Err(e) => out.skipped.push(Skipped {
                name,
                reason: e.to_string(),
            }),
        }
    }
    if let [(d_mu, f_mu), (d_delta, f_delta)] = firm[..] {
        out.checks.push(Check::close(
            format!("gradient_mu_delta_symmetry (relative {SYMMETRY_REL_TOL:e} plus round-off)"),
            d_delta,
            d_mu,
            SYMMETRY_REL_TOL * d_delta.abs() + f_mu + f_delta,
        ));
    }
}

/// Round-off bound of a central difference of a function of size `value`
/// with the default relative step at `x`. A relative tolerance alone cannot
/// be met where the derivative vanishes.
fn round_off(value: f64, x: f64) -> f64 {
    let h = if x == 0.0 {
        DEFAULT_FD_STEP
    } else {
        DEFAULT_FD_STEP * x.abs()
    };
    10.0 * f64::EPSILON * value / h
}

fn param_value(sc: &Scenario, param: SensitivityParam) -> f64 {
    let (m, p) = (&sc.market, &sc.prefs);
    match param {
        SensitivityParam::Alpha => p.alpha(),
        SensitivityParam::R => m.r(),
        SensitivityParam::Theta => m.sharpe().theta[0],
        SensitivityParam::ThetaSq => m.theta_sq(),
        SensitivityParam::Mu => p.mu(),
        SensitivityParam::Delta => p.delta(),
        SensitivityParam::FirmAversion => p.mu() + p.delta(),
        SensitivityParam::Gamma => p.gamma(),
        SensitivityParam::Lambda => p.lambda(),
    }
}

/// Generator residual and sign properties over the default grid, at the
/// candidate or at the negative control.
fn hjbi_checks(
    out: &mut Verification,
    cand: Candidate,
    cfg: &VerifyConfig,
) -> Result<(), CliError> {
    let (cand, suffix) = if cfg.negative_control {
        (
            cand.with_union_coef_scaled(cfg.coef_scale),
            "_negative_control",
        )
    } else {
        (cand, "")
    };
    let report = hjbi_scan(&cand, &cfg.hjbi)?;
    let violated = |prop: &str| report.violations.iter().any(|v| v.property == prop);
    let tol = report.tol;
    out.checks.push(Check::flag(
        format!("hjbi_residual{suffix} (max |G|/(1+|W|))"),
        0.0,
        report.max_abs_residual_at_candidate,
        tol,
        !violated("residual"),
    ));
    out.checks.push(Check::flag(
        format!("hjbi_distortion{suffix} (min G/(1+|W|) over distortions, must be >= -tol)"),
        0.0,
        report.min_over_h_slack,
        tol,
        !violated("distortion"),
    ));
    out.checks.push(Check::flag(
        format!("hjbi_control{suffix} (max G/(1+|W|) over controls, must be <= tol)"),
        0.0,
        report.max_over_controls_slack,
        tol,
        !violated("control"),
    ));
    out.hjbi = Some(report);
    Ok(())
}

/// The cooperative solution must coincide with the game-one equilibrium for
/// symmetric players.
fn pareto_checks(out: &mut Verification, sc: &Scenario) -> Result<(), CliError> {
    let (m, p) = (&sc.market, &sc.prefs);
    if p.gamma() != p.delta() || p.lambda() != p.mu() {
        return Err(CliError::ConfigParse(
            "verifying the cooperative solution needs gamma = delta and lambda = mu".into(),
        ));
    }
    let coop = solve_pareto(m, p)?;
    let game = solve_game_one(m, p)?;
    out.checks.push(Check::close(
        format!("pareto_value_coef (relative {PARETO_COEF_REL_TOL:e})"),
        game.union_value_coef,
        coop.value_coef,
        PARETO_COEF_REL_TOL * game.union_value_coef.abs(),
    ));
    out.checks.push(Check::close(
        format!("pareto_benefit_ratio (relative {PARETO_VEC_TOL:e})"),
        game.benefit_ratio,
        coop.benefit_ratio,
        PARETO_VEC_TOL * game.benefit_ratio.abs(),
    ));
    let pairs = [
        ("invest_ratio", &game.invest_ratio, &coop.invest_ratio),
        ("union_distortion", &game.union_distortion, &coop.distortion),
        ("firm_distortion", &game.firm_distortion, &coop.distortion),
    ];
    for (label, a, b) in pairs {
        for (i, (x, y)) in a.iter().zip(b.iter()).enumerate() {
            out.checks.push(Check::close(
                format!("pareto_{label}_{i} (relative {PARETO_VEC_TOL:e})"),
                *x,
                *y,
                PARETO_VEC_TOL * x.abs().max(1.0),
            ));
        }
    }
    Ok(())
}
