use rayon::prelude::*;
use serde::Serialize;

use super::config::{RunConfig, SweepParameter};
use super::output::{header, line_plot, Cell, Outputs, Series};
use super::CliError;
use crate::error::{Error, Result};
use crate::oracle::{
    closed_form_scale, convergence_study, oracle_rates, resolving_grid, ConvergenceRow, Detection,
    DiscreteModel, Evaluation, OracleConfig,
};
use crate::quadrature::{self, coherence_ratio, AxisRule, JIntegrals};
use crate::rates::{
    calibration_rates, center_peak_with_four_photon, franson_rates, least_squares_slope,
    visibility, CalibrationResult, FransonRates, VisibilityResult,
};
use crate::spectral::{FilterSpec, SetupConfig, ValidityFlags};
use crate::terms::{check_fixture, survivor_report, RateKind, SetupKind, SurvivorReport, FIXTURES};

/// Whether every check of a command passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed,
}

fn primary_filters(cfg: &RunConfig) -> Result<(FilterSpec, FilterSpec)> {
    cfg.filters.resolve()
}

fn integrals_for(cfg: &RunConfig, fa: &FilterSpec, fb: &FilterSpec) -> Result<JIntegrals> {
    quadrature::compute_all(&cfg.model, fa, fb, &cfg.quadrature)
}

fn warn_validity(flags: &ValidityFlags) {
    if !flags.time_bins_separated {
        eprintln!(
            "warning: tau*delta_p = {:.3} is not >> 1; time bins overlap and the closed forms do not apply",
            flags.tau_delta_p
        );
    }
    if !flags.detector_slow {
        eprintln!(
            "warning: delta_t*delta_a = {:.3} is not >> 1; the detector window cuts into the photons",
            flags.delta_t_delta_a
        );
    }
}

#[derive(Serialize)]
struct IntegralsReport {
    integrals: JIntegrals,
    coherence_ratio: f64,
}

pub fn integrals(cfg: &RunConfig, out: &mut Outputs) -> std::result::Result<Outcome, CliError> {
    let (fa, fb) = primary_filters(cfg)?;
    let j = integrals_for(cfg, &fa, &fb)?;
    let c = coherence_ratio(&j)?;
    let rows = [
        ("J", j.j, j.err_j, "(rad/ps)^2"),
        ("J_A", j.j_a, j.err_j_a, "(rad/ps)^2"),
        ("J_B", j.j_b, j.err_j_b, "(rad/ps)^2"),
        ("J_AB", j.j_ab, j.err_j_ab, "(rad/ps)^2"),
        ("J_4", j.j4, j.err_j4, "(rad/ps)^4"),
    ];
    println!("{:<6} {:>22} {:>12}  unit", "name", "value", "error");
    for (n, v, e, u) in rows {
        println!("{n:<6} {v:>22.15e} {e:>12.3e}  {u}");
    }
    println!("coherence J_4/(2 J J_AB) = {c:.6}");
    let cells: Vec<Vec<Cell>> = rows
        .iter()
        .map(|&(n, v, e, u)| vec![n.into(), v.into(), e.into(), u.into()])
        .collect();
    out.csv(
        "integrals",
        &header(&["integral", "value", "abs_error", "unit"]),
        &cells,
    )?;
    out.json(
        "integrals",
        &IntegralsReport {
            integrals: j,
            coherence_ratio: c,
        },
    )?;
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct CalibrationReport {
    calibration: CalibrationResult,
    r_center_with_four_photon: f64,
    eta_product: f64,
    validity: ValidityFlags,
}

pub fn calibrate(cfg: &RunConfig, out: &mut Outputs) -> std::result::Result<Outcome, CliError> {
    let (fa, fb) = primary_filters(cfg)?;
    let flags = cfg.setup.validity(&cfg.model);
    warn_validity(&flags);
    let j = integrals_for(cfg, &fa, &fb)?;
    let eta = cfg.setup.eta_product;
    let cal = calibration_rates(cfg.setup.intensity, &j)?.scaled(eta);
    let full_center = eta * center_peak_with_four_photon(cfg.setup.intensity, &j);
    println!("R(0,0)          = {:.6e}  pairs/pulse", cal.r_center);
    println!("R(0,0) with R4  = {full_center:.6e}  pairs/pulse");
    println!("R(tau,0)        = {:.6e}  pairs/pulse", cal.r_side);
    println!("rho             = {:.6e}", cal.rho);
    let rows = vec![
        vec!["r_center".into(), cal.r_center.into(), "pairs/pulse".into()],
        vec![
            "r_center_with_four_photon".into(),
            full_center.into(),
            "pairs/pulse".into(),
        ],
        vec!["r_side".into(), cal.r_side.into(), "pairs/pulse".into()],
        vec!["rho".into(), cal.rho.into(), "1".into()],
    ];
    out.csv(
        "calibration",
        &header(&["quantity", "value", "unit"]),
        &rows,
    )?;
    out.json(
        "calibration",
        &CalibrationReport {
            calibration: cal,
            r_center_with_four_photon: full_center,
            eta_product: eta,
            validity: flags,
        },
    )?;
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct FransonReport {
    alpha_plus_beta: f64,
    rates: FransonRates,
    visibility: VisibilityResult,
    validity: ValidityFlags,
}

const PHASE_SAMPLES: usize = 72;

pub fn franson(cfg: &RunConfig, out: &mut Outputs) -> std::result::Result<Outcome, CliError> {
    let (fa, fb) = primary_filters(cfg)?;
    let flags = cfg.setup.validity(&cfg.model);
    warn_validity(&flags);
    let j = integrals_for(cfg, &fa, &fb)?;
    let s = &cfg.setup;
    let eta = s.eta_product;
    let rates = franson_rates(s.intensity, &j, s.alpha, s.beta)?.scaled(eta);
    let vis = visibility(s.intensity, &j)?;
    println!("alpha+beta = {:.6} rad", s.phase_sum());
    println!(
        "R2(tau,tau) = {:.6e}  R4(tau,tau) = {:.6e}  total = {:.6e}  pairs/pulse",
        rates.r2, rates.r4, rates.total
    );
    println!(
        "V_exact = {:.6}  V_first_order = {:.6}  rho = {:.6e}",
        vis.v_exact, vis.v_first_order, vis.rho
    );
    let mut rows = Vec::with_capacity(PHASE_SAMPLES + 1);
    let mut r2_curve = Vec::new();
    let mut total_curve = Vec::new();
    for k in 0..=PHASE_SAMPLES {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / PHASE_SAMPLES as f64;
        let r = franson_rates(s.intensity, &j, phi, 0.0)?.scaled(eta);
        rows.push(vec![phi.into(), r.r2.into(), r.r4.into(), r.total.into()]);
        r2_curve.push((phi, r.r2));
        total_curve.push((phi, r.total));
    }
    out.csv(
        "franson_fringe",
        &header(&[
            "alpha_plus_beta [rad]",
            "r2 [pairs/pulse]",
            "r4 [pairs/pulse]",
            "total [pairs/pulse]",
        ]),
        &rows,
    )?;
    out.json(
        "franson",
        &FransonReport {
            alpha_plus_beta: s.phase_sum(),
            rates,
            visibility: vis,
            validity: flags,
        },
    )?;
    let svg = line_plot(
        "Intermediate-bin coincidence rate",
        "alpha + beta [rad]",
        "R(tau,tau) [pairs/pulse]",
        &[
            Series {
                label: "total".into(),
                points: total_curve,
                dashed: false,
                markers: false,
            },
            Series {
                label: "two-photon only".into(),
                points: r2_curve,
                dashed: true,
                markers: false,
            },
        ],
        None,
    );
    out.svg("franson_fringe", &svg)?;
    Ok(Outcome::Passed)
}

/// One sweep point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub parameter_value: f64,
    pub intensity: f64,
    pub rho: f64,
    pub two_rho: f64,
    pub v_exact: f64,
    pub v_first_order: f64,
    pub mean_rate: f64,
    pub rate_total: f64,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    parameter: &'static str,
    filter_set: &'a str,
    rows: &'a [SweepRow],
    slope_v_exact: Option<f64>,
    slope_v_first_order: Option<f64>,
}

fn sweep_point(
    cfg: &RunConfig,
    param: SweepParameter,
    value: f64,
    fa: &FilterSpec,
    fb: &FilterSpec,
    base: &JIntegrals,
) -> Result<SweepRow> {
    let mut setup: SetupConfig = cfg.setup;
    let mut phase = setup.phase_sum();
    let j = match param {
        SweepParameter::Intensity => {
            setup.intensity = value;
            *base
        }
        SweepParameter::Tau => {
            setup.tau = value;
            *base
        }
        SweepParameter::AlphaPlusBeta => {
            phase = value;
            *base
        }
        SweepParameter::FilterAWidth => integrals_for(cfg, &fa.with_width(value)?, fb)?,
        SweepParameter::FilterBWidth => integrals_for(cfg, fa, &fb.with_width(value)?)?,
    };
    setup.validate()?;
    let v = visibility(setup.intensity, &j)?;
    let rate = franson_rates(setup.intensity, &j, phase, 0.0)?.scaled(setup.eta_product);
    Ok(SweepRow {
        parameter_value: value,
        intensity: setup.intensity,
        rho: v.rho,
        two_rho: 2.0 * v.rho,
        v_exact: v.v_exact,
        v_first_order: v.v_first_order,
        mean_rate: setup.eta_product * v.mean_rate,
        rate_total: rate.total,
    })
}

/// Range of `2ρ` over which sweep slopes are fitted.
pub const SLOPE_WINDOW: (f64, f64) = (0.02, 0.20);

fn window_slope(rows: &[SweepRow], pick: impl Fn(&SweepRow) -> f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.two_rho >= SLOPE_WINDOW.0 && r.two_rho <= SLOPE_WINDOW.1)
        .map(|r| (r.two_rho, pick(r)))
        .collect();
    (pts.len() >= 2).then(|| least_squares_slope(&pts))
}

pub fn sweep(cfg: &RunConfig, out: &mut Outputs) -> std::result::Result<Outcome, CliError> {
    let sw = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::invalid("sweep", "the configuration has no `sweep` section"))?;
    let param = sw.parameter;
    let sets = cfg.filter_sets()?;
    warn_validity(&cfg.setup.validity(&cfg.model));

    let mut computed = Vec::with_capacity(sets.len());
    for (label, fa, fb) in &sets {
        let base = integrals_for(cfg, fa, fb)?;
        let rows: Vec<SweepRow> = sw
            .values
            .par_iter()
            .map(|&v| sweep_point(cfg, param, v, fa, fb, &base))
            .collect::<Result<_>>()?;
        computed.push((label.clone(), rows));
    }

    let mut cols = vec![
        "intensity [ps^2]".to_string(),
        "rho [1]".into(),
        "two_rho [1]".into(),
        "v_exact [1]".into(),
        "v_first_order [1]".into(),
        "mean_rate [pairs/pulse]".into(),
    ];
    if param != SweepParameter::Intensity {
        cols.push(format!("{} [{}]", param.name(), param.unit()));
    }
    cols.push("rate_total [pairs/pulse]".into());

    let mut series = Vec::new();
    for (label, rows) in &computed {
        let cells: Vec<Vec<Cell>> = rows
            .iter()
            .map(|r| {
                let mut c: Vec<Cell> = vec![
                    r.intensity.into(),
                    r.rho.into(),
                    r.two_rho.into(),
                    r.v_exact.into(),
                    r.v_first_order.into(),
                    r.mean_rate.into(),
                ];
                if param != SweepParameter::Intensity {
                    c.push(r.parameter_value.into());
                }
                c.push(r.rate_total.into());
                c
            })
            .collect();
        let stem = if computed.len() == 1 {
            "sweep".to_string()
        } else {
            format!("sweep_{label}")
        };
        out.csv(&stem, &cols, &cells)?;
        let slope_exact = window_slope(rows, |r| r.v_exact);
        let slope_first = window_slope(rows, |r| r.v_first_order);
        out.json(
            &stem,
            &SweepReport {
                parameter: param.name(),
                filter_set: label,
                rows,
                slope_v_exact: slope_exact,
                slope_v_first_order: slope_first,
            },
        )?;
        println!("filter set {label}: {} points", rows.len());
        println!(
            "  {:>14} {:>12} {:>12} {:>12}",
            param.name(),
            "2rho",
            "V_exact",
            "V_first"
        );
        for r in rows {
            println!(
                "  {:>14.6e} {:>12.6} {:>12.6} {:>12.6}",
                r.parameter_value, r.two_rho, r.v_exact, r.v_first_order
            );
        }
        if let (Some(a), Some(b)) = (slope_exact, slope_first) {
            println!("  slope over 2rho in [0.02, 0.2]: V_exact {a:.4}, V_first_order {b:.4}");
        }
        series.push(Series {
            label: format!("{label} exact"),
            points: rows.iter().map(|r| (r.two_rho, r.v_exact)).collect(),
            dashed: false,
            markers: true,
        });
        series.push(Series {
            label: format!("{label} first order"),
            points: rows.iter().map(|r| (r.two_rho, r.v_first_order)).collect(),
            dashed: true,
            markers: false,
        });
    }
    let svg = line_plot(
        "Visibility against the side-peak ratio",
        "2 rho",
        "visibility",
        &series,
        Some((1.0, -1.0, "slope -1")),
    );
    out.svg("sweep", &svg)?;
    Ok(Outcome::Passed)
}

pub fn terms(
    kind: RateKind,
    setup: SetupKind,
    t_a: i32,
    t_b: i32,
    out: &mut Outputs,
) -> std::result::Result<Outcome, CliError> {
    let report: SurvivorReport = survivor_report(kind, setup, t_a, t_b)?;
    print!("{}", report.to_table());
    let setup_name = match setup {
        SetupKind::Calibration => "calibration",
        SetupKind::Franson => "franson",
    };
    out.json(
        &format!("terms_{}_{}_{}_{}", kind.name(), setup_name, t_a, t_b),
        &report,
    )?;
    match check_fixture(&report, t_a, t_b) {
        None => {
            println!("no reference fixture for this case");
            Ok(Outcome::Passed)
        }
        Some(p) if p.is_empty() => {
            println!("matches reference fixture");
            Ok(Outcome::Passed)
        }
        Some(p) => {
            for m in p {
                println!("FIXTURE MISMATCH: {m}");
            }
            Ok(Outcome::Failed)
        }
    }
}

/// One line of the verification report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Reported but not counted: the regime is outside the closed forms'
    /// validity.
    pub informational: bool,
}

impl Check {
    fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            informational: false,
        }
    }
}

fn rel(x: f64, reference: f64) -> f64 {
    if x == reference {
        0.0
    } else {
        (x - reference).abs() / reference.abs()
    }
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    validity: ValidityFlags,
    checks: &'a [Check],
    convergence: &'a [ConvergenceRow],
}

/// `τ·δ_p` from which the full oscillatory sums must match the closed
/// forms; shorter delays are reported only.
pub const CONVERGED_TAU_DELTA_P: f64 = 50.0;

/// Grid-identity tolerance for sums that must agree up to rounding.
const EXACT: f64 = 1e-12;

pub fn verify(cfg: &RunConfig, out: &mut Outputs) -> std::result::Result<Outcome, CliError> {
    let v = &cfg.verify;
    let model = &cfg.model;
    let (fa, fb) = primary_filters(cfg)?;
    // Refuse oversized grids before doing anything.
    if v.nodes > v.max_grid {
        return Err(Error::GridTooLarge {
            nodes: v.nodes,
            cap: v.max_grid,
            dims: 6,
        }
        .into());
    }
    if v.identity_nodes > v.max_grid_4d {
        return Err(Error::GridTooLarge {
            nodes: v.identity_nodes,
            cap: v.max_grid_4d,
            dims: 4,
        }
        .into());
    }
    let flags = cfg.setup.validity(model);
    warn_validity(&flags);
    let tau = cfg.setup.tau;
    let delta_t = cfg.setup.delta_t;
    let mut checks = Vec::new();

    // Quadrature and oracle on identical trapezoid nodes.
    let half_width =
        cfg.quadrature.range_sigmas * crate::spectral::JointAmplitude::max_marginal_width(model);
    let r2d = AxisRule::trapezoid(v.identity_nodes, -half_width, half_width);
    let quad2 = quadrature::two_dim_on_grid(model, &fa, &fb, &r2d, &r2d);
    let dm2 = DiscreteModel::from_rules(model, &fa, &fb, &r2d, &r2d)?;
    let or2 = dm2.grid_integrals_contracted();
    let dev2 = [or2.j, or2.j_a, or2.j_b, or2.j_ab]
        .iter()
        .zip(&quad2)
        .map(|(a, b)| rel(*a, *b))
        .fold(0.0, f64::max);
    checks.push(Check::new(
        format!("grid_identity_2d_n{}", v.identity_nodes),
        dev2,
        EXACT,
    ));

    let r4d = AxisRule::trapezoid(v.nodes, -half_width, half_width);
    let dm = DiscreteModel::from_rules(model, &fa, &fb, &r4d, &r4d)?;
    let quad_j4 = quadrature::j4_on_grid(model, &fa, &fb, &r4d, &r4d);
    let jgrid = dm.grid_integrals(v.max_grid_4d)?;
    checks.push(Check::new(
        format!("grid_identity_j4_n{}", v.nodes),
        rel(jgrid.j4, quad_j4),
        EXACT,
    ));

    // Stationary terms against the closed forms on the grid's own J.
    let i = v.intensity_times_j / jgrid.j;
    let base = OracleConfig {
        max_grid: v.max_grid,
        max_grid_4d: v.max_grid_4d,
        ..OracleConfig::new(tau, delta_t, i)
    };
    let (alpha, beta) = (cfg.setup.alpha, cfg.setup.beta);
    let st = oracle_rates(
        &dm,
        &base.stationary_only(),
        &Detection::franson(alpha, beta)?,
    )?;
    let closed = franson_rates(i, &jgrid, alpha, beta)?;
    let sf = closed_form_scale(SetupKind::Franson);
    checks.push(Check::new(
        "stationary_franson",
        rel(st.r2 / sf, closed.r2).max(rel(st.r4.total() / sf, closed.r4)),
        EXACT,
    ));
    let sc = closed_form_scale(SetupKind::Calibration);
    let center = oracle_rates(&dm, &base.stationary_only(), &Detection::calibration(0, 0)?)?;
    let side = oracle_rates(&dm, &base.stationary_only(), &Detection::calibration(1, 0)?)?;
    let cal = calibration_rates(i, &jgrid)?;
    checks.push(Check::new(
        "stationary_calibration",
        rel(center.total() / sc, center_peak_with_four_photon(i, &jgrid))
            .max(rel(side.total() / sc, cal.r_side)),
        EXACT,
    ));

    // Literal loops against the contracted chains.
    let det = Detection::franson(alpha, beta)?;
    let a = oracle_rates(&dm, &base, &det)?;
    let b = oracle_rates(
        &dm,
        &OracleConfig {
            evaluation: Evaluation::Contracted,
            ..base
        },
        &det,
    )?;
    let scale = a.total().abs();
    let dev = [
        (a.r2, b.r2),
        (a.r4.r41, b.r4.r41),
        (a.r4.r42_plus_cc, b.r4.r42_plus_cc),
        (a.r4.r43, b.r4.r43),
    ]
    .iter()
    .map(|(x, y)| (x - y).abs() / scale)
    .fold(0.0, f64::max);
    checks.push(Check::new(
        format!("direct_vs_contracted_n{}", v.nodes),
        dev,
        EXACT,
    ));

    // Survivor fixtures.
    let mut mismatches = 0usize;
    for fx in FIXTURES {
        let r = survivor_report(fx.0, fx.1, fx.2, fx.3)?;
        mismatches += check_fixture(&r, fx.2, fx.3).map_or(0, |p| p.len());
    }
    checks.push(Check::new("term_fixtures", mismatches as f64, 0.0));

    // Full oscillatory sums on alias-free grids.
    for &m in &v.tau_multipliers {
        let (n, _) = resolving_grid(model, tau * m, delta_t)?;
        if n > crate::oracle::DEFAULT_MAX_GRID_CONTRACTED {
            return Err(Error::GridTooLarge {
                nodes: n,
                cap: crate::oracle::DEFAULT_MAX_GRID_CONTRACTED,
                dims: 6,
            }
            .into());
        }
    }
    let study_cfg = OracleConfig::new(tau, delta_t, i);
    let rows = convergence_study(model, &fa, &fb, &study_cfg, &v.tau_multipliers)?;
    for r in &rows {
        let mut c = Check::new(format!("convergence_tau_{}", r.tau), r.deviation, 0.05);
        if !r.valid {
            c.informational = true;
            eprintln!(
                "warning: tau = {} (tau*delta_p = {:.3}) is outside the validity regime; deviation {:.3e} reported, not failed",
                r.tau, r.tau_delta_p, r.deviation
            );
        } else if r.tau_delta_p < CONVERGED_TAU_DELTA_P {
            c.informational = true;
        }
        checks.push(c);
    }
    let valid_rows: Vec<&ConvergenceRow> = rows.iter().filter(|r| r.valid).collect();
    let mut increase: f64 = 0.0;
    for w in valid_rows.windows(2) {
        if w[1].tau > w[0].tau {
            increase = increase.max(w[1].deviation - w[0].deviation);
        }
    }
    // Increases below the rounding floor are noise.
    checks.push(Check::new("convergence_trend", increase, 1e-9));

    if flags.all_valid() && tau > delta_t {
        let dmr = DiscreteModel::resolving(model, &fa, &fb, tau, delta_t)?;
        let jr = dmr.grid_integrals_contracted();
        let ir = v.intensity_times_j / jr.j;
        let c = OracleConfig::new(tau, delta_t, ir).contracted();
        let side = oracle_rates(&dmr, &c, &Detection::calibration(1, 0)?)?.total();
        let center = oracle_rates(&dmr, &c, &Detection::calibration(0, 0)?)?.total();
        let rho = ir * jr.j_a * jr.j_b / jr.j_ab;
        checks.push(Check::new(
            "calibration_ratio",
            rel(side / center, rho),
            0.02,
        ));
    } else {
        eprintln!("warning: calibration ratio check skipped outside the validity regime");
    }

    println!(
        "{:<28} {:>12} {:>10}  result",
        "check", "measured", "tolerance"
    );
    for c in &checks {
        let result = match (c.passed, c.informational) {
            (true, _) => "PASS",
            (false, true) => "INFO",
            (false, false) => "FAIL",
        };
        println!(
            "{:<28} {:>12.3e} {:>10.1e}  {result}",
            c.name, c.measured, c.tolerance
        );
    }
    let rows_csv: Vec<Vec<Cell>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone().into(),
                c.measured.into(),
                c.tolerance.into(),
                c.passed.into(),
                c.informational.into(),
            ]
        })
        .collect();
    out.csv(
        "verify",
        &header(&[
            "check",
            "measured [relative]",
            "tolerance [relative]",
            "passed",
            "informational",
        ]),
        &rows_csv,
    )?;
    out.json(
        "verify",
        &VerifyReport {
            validity: flags,
            checks: &checks,
            convergence: &rows,
        },
    )?;
    let failed = checks.iter().any(|c| !c.passed && !c.informational);
    Ok(if failed {
        Outcome::Failed
    } else {
        Outcome::Passed
    })
}
