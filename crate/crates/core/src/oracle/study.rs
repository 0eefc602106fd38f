use serde::Serialize;

use super::{closed_form_scale, oracle_rates, Detection, DiscreteModel, Evaluation, OracleConfig};
use crate::error::{Error, Result};
use crate::rates::{calibration_rates, franson_rates, fringe_visibility};
use crate::spectral::{FilterSpec, SetupConfig, SpectralModel};
use crate::terms::SetupKind;

/// One delay of a [`convergence_study`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub tau_delta_p: f64,
    pub nodes: usize,
    /// Whether the closed forms are expected to hold at this delay.
    pub valid: bool,
    /// Relative deviations of the scaled oracle from the closed forms:
    /// Franson `R2` and `R4` at `α+β = 0`, calibration side peak.
    pub dev_r2: f64,
    pub dev_r4: f64,
    pub dev_side: f64,
    pub deviation: f64,
}

fn rel(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

/// Full-oscillatory oracle against the stationary closed forms for delays
/// `cfg.tau × m`, `m ∈ tau_multipliers`.
///
/// Each delay gets its own alias-free uniform grid
/// ([`DiscreteModel::resolving`]) and contracted sums. The closed forms use
/// that grid's own `J` values, so what remains is the oscillatory residue
/// and the finite detector window.
pub fn convergence_study(
    model: &SpectralModel,
    fa: &FilterSpec,
    fb: &FilterSpec,
    cfg: &OracleConfig,
    tau_multipliers: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(tau_multipliers.len());
    for &m in tau_multipliers {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::invalid(
                "tau_multipliers",
                format!("must be finite and > 0, got {m}"),
            ));
        }
        let tau = cfg.tau * m;
        let (n, _) = super::resolving_grid(model, tau, cfg.delta_t)?;
        if n > cfg.max_grid_contracted {
            return Err(Error::GridTooLarge {
                nodes: n,
                cap: cfg.max_grid_contracted,
                dims: 6,
            });
        }
        let dm = DiscreteModel::resolving(model, fa, fb, tau, cfg.delta_t)?;
        let run = OracleConfig {
            tau,
            include_oscillatory: true,
            evaluation: Evaluation::Contracted,
            ..*cfg
        };
        let j = dm.grid_integrals_contracted();
        let i = cfg.intensity;

        let fr = oracle_rates(&dm, &run, &Detection::franson(0.0, 0.0)?)?;
        let closed = franson_rates(i, &j, 0.0, 0.0)?;
        let s = closed_form_scale(SetupKind::Franson);
        let dev_r2 = rel(fr.r2 / s, closed.r2);
        let dev_r4 = rel(fr.r4.total() / s, closed.r4);

        let side = oracle_rates(&dm, &run, &Detection::calibration(1, 0)?)?;
        let cal = calibration_rates(i, &j)?;
        let dev_side = rel(
            side.total() / closed_form_scale(SetupKind::Calibration),
            cal.r_side,
        );

        let setup = SetupConfig {
            intensity: i,
            tau,
            alpha: 0.0,
            beta: 0.0,
            delta_t: cfg.delta_t,
            eta_product: 1.0,
        };
        rows.push(ConvergenceRow {
            tau,
            tau_delta_p: tau * model.delta_p,
            nodes: dm.axis_len(),
            valid: setup.validity(model).all_valid() && tau > cfg.delta_t,
            dev_r2,
            dev_r4,
            dev_side,
            deviation: dev_r2.max(dev_r4).max(dev_side),
        });
    }
    Ok(rows)
}

/// Fringe visibility of the oracle's total intermediate-bin rate, scanned
/// over `n_phases` equally spaced values of `α+β`.
pub fn oracle_visibility(dm: &DiscreteModel, cfg: &OracleConfig, n_phases: usize) -> Result<f64> {
    if n_phases < 2 {
        return Err(Error::invalid("n_phases", "need at least two phases"));
    }
    let mut totals = Vec::with_capacity(n_phases);
    for k in 0..n_phases {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / n_phases as f64;
        totals.push(oracle_rates(dm, cfg, &Detection::franson(phi, 0.0)?)?.total());
    }
    Ok(fringe_visibility(&totals))
}
