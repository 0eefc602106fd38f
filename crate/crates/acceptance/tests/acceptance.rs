//! Acceptance criteria, one test each. Every test writes a single
//! `PASS`/`FAIL` line with the measured value, the pinned tolerance and the
//! runtime, then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use fourphoton::oracle::{
    convergence_study, oracle_rates, Detection, DiscreteModel, Evaluation, OracleConfig,
};
use fourphoton::quadrature::{self, AxisRule};
use fourphoton::rates::{self, least_squares_slope, PoissonModelParams};
use fourphoton::terms::{
    check_fixture, reconstruct_rate, survivor_report, KernelClass, RateKind, SetupKind, FIXTURES,
    FRANSON_EXPANSION_FACTOR,
};
use fourphoton::{FilterSpec, JIntegrals, QuadratureConfig, SpectralModel};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn report(
    id: u32,
    title: &str,
    passed: bool,
    detail: &str,
    elapsed: Duration,
    budget: Duration,
) -> bool {
    let ok = passed && elapsed <= budget;
    let line = format!(
        "\n{} criterion {id}: {title}: {detail}; runtime {:.2} s (budget {:.0} s)\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    // Written to the raw handle so the line shows even when the harness
    // captures test output.
    let _ = std::io::stderr().write_all(line.as_bytes());
    ok
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn narrow_pump() -> (SpectralModel, FilterSpec, FilterSpec) {
    (
        SpectralModel::gaussian(0.1, 1.0, 1.0).unwrap(),
        FilterSpec::gaussian(0.8, 0.0).unwrap(),
        FilterSpec::gaussian(1.2, 0.0).unwrap(),
    )
}

fn oracle_model() -> (SpectralModel, FilterSpec, FilterSpec) {
    (
        SpectralModel::gaussian(1.0, 2.0, 2.0).unwrap(),
        FilterSpec::gaussian(3.0, 0.0).unwrap(),
        FilterSpec::gaussian(4.0, 0.0).unwrap(),
    )
}

const ORACLE_DELTA_T: f64 = 8.0;

#[test]
fn criterion_01_slope_law() {
    let start = Instant::now();
    let (m, fa, fb) = narrow_pump();
    let j = quadrature::compute_all(&m, &fa, &fb, &QuadratureConfig::with_nodes(512)).unwrap();
    let rho_per_i = j.j_a * j.j_b / j.j_ab;
    let points: Vec<(f64, f64)> = (0..10)
        .map(|k| {
            let two_rho = 0.02 + 0.02 * k as f64;
            let v = rates::visibility(two_rho / (2.0 * rho_per_i), &j).unwrap();
            (2.0 * v.rho, v.v_exact)
        })
        .collect();
    let slope = least_squares_slope(&points);
    let first: Vec<(f64, f64)> = points.iter().map(|&(x, _)| (x, 1.0 - x)).collect();
    let detail = format!(
        "slope of v_exact vs 2rho = {slope:.4} (target -1.00 +/- 0.05; v_first_order slope {:.4})",
        least_squares_slope(&first)
    );
    let ok = report(
        1,
        "slope law",
        (slope + 1.0).abs() <= 0.05,
        &detail,
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_02_j4_independence() {
    let start = Instant::now();
    let m = SpectralModel::gaussian(0.5, 1.0, 1.0).unwrap();
    let fa = FilterSpec::gaussian(0.8, 0.0).unwrap();
    let fb = FilterSpec::gaussian(1.2, 0.0).unwrap();
    let j = quadrature::compute_all(&m, &fa, &fb, &QuadratureConfig::with_nodes(128)).unwrap();
    let variants = [j.with_j4(0.0), j, j.with_j4(2.0 * j.j * j.j_ab)];
    let spread = |i: f64| {
        let v: Vec<_> = variants
            .iter()
            .map(|x| rates::visibility(i, x).unwrap())
            .collect();
        let first = v
            .iter()
            .map(|r| (r.v_first_order - v[0].v_first_order).abs())
            .fold(0.0, f64::max);
        let exact = v
            .iter()
            .flat_map(|a| v.iter().map(move |b| (a.v_exact - b.v_exact).abs()))
            .fold(0.0, f64::max);
        (first, exact)
    };
    let denominator = j.j_ab * j.j_ab / (2.0 * j.j_a * j.j_b);
    let i = 0.01 / j.j;
    let (first, gap) = spread(i);
    let (_, gap_half) = spread(i / 2.0);
    let bound = 2.0 * i * i * j.j * j.j_ab / denominator;
    let shrink = gap / gap_half;
    let ok_bound = first == 0.0 && gap <= bound;
    let ok_shrink = (shrink - 4.0).abs() <= 0.05 * 4.0;
    let detail = format!(
        "v_first_order change {first:e} (exactly 0), v_exact change {gap:.3e} <= {bound:.3e}, halving I shrinks it x{shrink:.3} (target 4)"
    );
    let ok = report(
        2,
        "J4 independence",
        ok_bound && ok_shrink,
        &detail,
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_03_survivor_fixtures() {
    let start = Instant::now();
    let mut problems = Vec::new();
    for fx in FIXTURES {
        let r = survivor_report(fx.0, fx.1, fx.2, fx.3).unwrap();
        if let Some(p) = check_fixture(&r, fx.2, fx.3) {
            problems.extend(p);
        }
    }
    let r2 = survivor_report(RateKind::R2, SetupKind::Franson, 1, 1).unwrap();
    if (r2.trig_coefficient.c0, r2.trig_coefficient.c1) != (2.0, 2.0) {
        problems.push(format!("R2 trig {}", r2.trig_coefficient));
    }
    let j = JIntegrals::from_values(1.7, 1.1, 1.3, 0.9, 2.2);
    let r43 = survivor_report(RateKind::R43, SetupKind::Franson, 1, 1).unwrap();
    if r43
        .survivors
        .iter()
        .any(|s| s.kernel.value(&j) != Some(j.j_a * j.j_b))
    {
        problems.push("R43 kernel is not J_A J_B".into());
    }
    let r42 = survivor_report(RateKind::R42, SetupKind::Franson, 1, 1).unwrap();
    if r42
        .survivors
        .iter()
        .any(|s| s.kernel != KernelClass::Exchange)
    {
        problems.push("R42 kernel is not the exchange integral".into());
    }
    let r41 = survivor_report(RateKind::R41, SetupKind::Franson, 1, 1).unwrap();
    for phase in [0.0, 0.7, 2.0] {
        let i = 0.03;
        let lhs = reconstruct_rate(&r41, &j, i, phase).unwrap();
        let rhs = 2.0 * i * j.j * reconstruct_rate(&r2, &j, i, phase).unwrap();
        if rel(lhs, rhs) > 1e-14 {
            problems.push(format!("R41 identity at phase {phase}: {lhs} vs {rhs}"));
        }
    }
    let detail = if problems.is_empty() {
        format!("{} fixtures exact, R41 = 2 I J R2", FIXTURES.len())
    } else {
        problems.join("; ")
    };
    let ok = report(
        3,
        "survivor fixtures",
        problems.is_empty(),
        &detail,
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_04_closed_form_reconstruction() {
    let start = Instant::now();
    let reports: Vec<_> = RateKind::ALL
        .iter()
        .map(|&k| survivor_report(k, SetupKind::Franson, 1, 1).unwrap())
        .collect();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let j: f64 = rng.random_range(0.5..3.0);
        let j_a = j * rng.random_range(0.1..1.0);
        let j_b = j * rng.random_range(0.1..1.0);
        let j_ab = j_a.min(j_b) * rng.random_range(0.1..1.0);
        let j4 = 2.0 * j * j_ab * rng.random_range(0.0..1.0);
        let jj = JIntegrals::from_values(j, j_a, j_b, j_ab, j4);
        let i: f64 = rng.random_range(0.0..1.0);
        let alpha: f64 = rng.random_range(0.0..2.0 * PI);
        let beta: f64 = rng.random_range(0.0..2.0 * PI);
        let sum: f64 = reports
            .iter()
            .map(|r| reconstruct_rate(r, &jj, i, alpha + beta).unwrap())
            .sum();
        let f = rates::franson_rates(i, &jj, alpha, beta).unwrap();
        worst = worst.max(rel(sum / FRANSON_EXPANSION_FACTOR, f.total));
    }
    let detail = format!("worst relative deviation {worst:.2e} over 100 draws (tolerance 1e-12)");
    let ok = report(
        4,
        "closed-form reconstruction",
        worst <= 1e-12,
        &detail,
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_05_oracle_equivalence() {
    let start = Instant::now();
    let (m, fa, fb) = oracle_model();
    let h = 9.0;
    let r48 = AxisRule::trapezoid(48, -h, h);
    let quad = quadrature::two_dim_on_grid(&m, &fa, &fb, &r48, &r48);
    let grid = DiscreteModel::from_rules(&m, &fa, &fb, &r48, &r48)
        .unwrap()
        .grid_integrals(48)
        .unwrap();
    let dev2 = [grid.j, grid.j_a, grid.j_b, grid.j_ab]
        .iter()
        .zip(&quad)
        .map(|(a, b)| rel(*a, *b))
        .fold(0.0, f64::max);
    let r12 = AxisRule::trapezoid(12, -h, h);
    let quad_j4 = quadrature::j4_on_grid(&m, &fa, &fb, &r12, &r12);
    let grid_j4 = DiscreteModel::from_rules(&m, &fa, &fb, &r12, &r12)
        .unwrap()
        .grid_integrals(48)
        .unwrap()
        .j4;
    let dev4 = rel(grid_j4, quad_j4);
    let detail =
        format!("2-D at 48 nodes {dev2:.2e}, 4-D at 12 nodes {dev4:.2e} (tolerance 1e-12)");
    let ok = report(
        5,
        "oracle equivalence",
        dev2 <= 1e-12 && dev4 <= 1e-12,
        &detail,
        start.elapsed(),
        Duration::from_secs(60),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_06_stationary_phase_convergence() {
    let start = Instant::now();
    let (m, fa, fb) = oracle_model();
    let tau = 50.0;

    // Literal six-index sums at 12 nodes per axis anchor the contraction.
    let dm12 = DiscreteModel::uniform(&m, &fa, &fb, 12, 9.0).unwrap();
    let cfg12 = OracleConfig::new(tau, ORACLE_DELTA_T, 0.01);
    let det = Detection::franson(0.0, 0.0).unwrap();
    let direct = oracle_rates(&dm12, &cfg12, &det).unwrap();
    let contracted = oracle_rates(
        &dm12,
        &OracleConfig {
            evaluation: Evaluation::Contracted,
            ..cfg12
        },
        &det,
    )
    .unwrap();
    let anchor = rel(contracted.total(), direct.total())
        .max(rel(contracted.r4.r42_plus_cc, direct.r4.r42_plus_cc))
        .max(rel(contracted.r4.r43, direct.r4.r43));

    let j = quadrature::compute_all(&m, &fa, &fb, &QuadratureConfig::with_nodes(128)).unwrap();
    let cfg = OracleConfig::new(tau, ORACLE_DELTA_T, 1e-3 / j.j);
    let rows = convergence_study(&m, &fa, &fb, &cfg, &[0.2, 0.4, 1.0]).unwrap();
    let last = rows.last().unwrap();
    // Deviations at rounding level are noise, not growth.
    let noise = 1e-12;
    let decreasing = rows
        .windows(2)
        .all(|w| w[1].deviation <= w[0].deviation.max(noise));
    let devs: Vec<String> = rows
        .iter()
        .map(|r| format!("tau*dp={}: {:.2e}", r.tau_delta_p, r.deviation))
        .collect();
    let detail = format!(
        "{}; 12-node direct vs contracted {anchor:.1e}; target <= 5% at tau*dp = 50 and decreasing",
        devs.join(", ")
    );
    let ok = report(
        6,
        "stationary-phase convergence",
        last.deviation <= 0.05 && decreasing && anchor <= 1e-12,
        &detail,
        start.elapsed(),
        Duration::from_secs(300),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_07_calibration_law() {
    let start = Instant::now();
    let (m, fa, fb) = oracle_model();
    let tau = 50.0;
    let dm = DiscreteModel::resolving(&m, &fa, &fb, tau, ORACLE_DELTA_T).unwrap();
    let j = dm.grid_integrals_contracted();
    let ratio = |i: f64| {
        let cfg = OracleConfig::new(tau, ORACLE_DELTA_T, i).contracted();
        let side = oracle_rates(&dm, &cfg, &Detection::calibration(1, 0).unwrap())
            .unwrap()
            .total();
        let center = oracle_rates(&dm, &cfg, &Detection::calibration(0, 0).unwrap())
            .unwrap()
            .total();
        side / center
    };
    let i = 1e-3 / j.j;
    let rho = i * j.j_a * j.j_b / j.j_ab;
    let r1 = ratio(i);
    let r2 = ratio(2.0 * i);
    let dev = rel(r1, rho);
    let doubling = r2 / r1;
    let detail = format!(
        "side/center {r1:.5e} vs rho {rho:.5e} ({:.2}%, tolerance 2%); doubling I scales it x{doubling:.4} (2 within 1%)",
        100.0 * dev
    );
    let ok = report(
        7,
        "calibration law",
        dev <= 0.02 && rel(doubling, 2.0) <= 0.01,
        &detail,
        start.elapsed(),
        Duration::from_secs(300),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_08_filter_approximation() {
    let start = Instant::now();
    let delta_a_filter = 1.0;
    let m = SpectralModel::gaussian(0.01 * delta_a_filter, 2.0, 2.0).unwrap();
    let fa = FilterSpec::rectangular(delta_a_filter, 0.0).unwrap();
    let fb = FilterSpec::rectangular(1.1 * delta_a_filter, 0.0).unwrap();
    let cfg = QuadratureConfig {
        range_sigmas: 5.0,
        ..QuadratureConfig::with_nodes(2048)
    };
    let j = quadrature::compute_two_dim(&m, &fa, &fb, &cfg).unwrap();
    let ratio = j.values[3] / j.values[1];
    let detail = format!(
        "|j_ab/j_a - 1| = {:.2e} (tolerance 0.01)",
        (ratio - 1.0).abs()
    );
    let ok = report(
        8,
        "filter approximation",
        (ratio - 1.0).abs() <= 0.01,
        &detail,
        start.elapsed(),
        Duration::from_secs(60),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_09_separable_coherence() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let filters = [
        (FilterSpec::none(), FilterSpec::none()),
        (
            FilterSpec::gaussian(0.7, 0.0).unwrap(),
            FilterSpec::gaussian(1.9, 0.3).unwrap(),
        ),
        (
            FilterSpec::rectangular(1.2, 0.0).unwrap(),
            FilterSpec::gaussian(0.5, 0.0).unwrap(),
        ),
    ];
    for (da, db) in [(1.0, 1.0), (0.5, 2.0)] {
        let m = SpectralModel::separable(da, db).unwrap();
        for (fa, fb) in &filters {
            for fast in [true, false] {
                let cfg = QuadratureConfig {
                    separable_fast_path: fast,
                    ..QuadratureConfig::with_nodes(128)
                };
                let j = quadrature::compute_all(&m, fa, fb, &cfg).unwrap();
                let target = 2.0 * j.j * j.j_ab;
                let d = rel(j.j4, target);
                let tol = 1e-6_f64.max(j.err_j4 / j.j4);
                worst = worst.max(d);
                if d > tol {
                    failures.push(format!("({da},{db}) fast={fast}: {d:.2e} > {tol:.2e}"));
                }
            }
        }
    }
    let detail = format!(
        "worst |j4/(2 j j_ab) - 1| = {worst:.2e} (tolerance max(1e-6, quadrature error)) {}",
        failures.join("; ")
    );
    let ok = report(
        9,
        "separable coherence identity",
        failures.is_empty(),
        &detail,
        start.elapsed(),
        Duration::from_secs(60),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_10_note_in_proof() {
    let start = Instant::now();
    let worst = (0..=30)
        .map(|k| {
            rates::note_in_proof_check(0.01 * k as f64)
                .unwrap()
                .deviation
        })
        .fold(0.0, f64::max);
    let at_08 = rates::note_in_proof_check(0.8).unwrap();
    let detail = format!(
        "max |(1 - 2tanh^2/cosh^4) - (1 - 2t^2)| over t <= 0.3 = {worst:.4} (tolerance 0.02); at t = 0.8 the curves differ by {:.3} (reported)",
        at_08.deviation
    );
    let ok = report(
        10,
        "note-in-proof cross-check",
        worst <= 0.02,
        &detail,
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok, "{detail}");
}

#[test]
fn criterion_11_poisson_consistency() {
    let start = Instant::now();
    let m = SpectralModel::gaussian(0.5, 1.0, 1.0).unwrap();
    let none = FilterSpec::none();
    let j = quadrature::compute_all(&m, &none, &none, &QuadratureConfig::with_nodes(128)).unwrap();
    let mut worst: f64 = 0.0;
    let mut worst_exact: f64 = 0.0;
    for ij in [1e-3, 2e-3, 5e-3] {
        let i = ij / j.j;
        // p2c counts pairs per window of both time bins: 2 I J.
        let p = PoissonModelParams::new(2.0 * i * j.j, 1.0, j.j_b / j.j).unwrap();
        let v = rates::visibility(i, &j).unwrap();
        let d_poisson = 1.0 - rates::poisson_visibility_first_order(&p);
        let d_multi = 1.0 - v.v_first_order;
        worst = worst.max(rel(d_poisson, d_multi));
        worst_exact = worst_exact.max(rel(1.0 - rates::poisson_visibility(&p), 1.0 - v.v_exact));
    }
    let detail = format!(
        "first-order deficits agree to {:.2e} relative (tolerance 10%); exact-form deficits differ by {:.2}% (reported)",
        worst,
        100.0 * worst_exact
    );
    let ok = report(
        11,
        "Poisson-model consistency",
        worst <= 0.10,
        &detail,
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok, "{detail}");
}
