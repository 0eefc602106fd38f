//! Stationary-term sums: keep only the branch products whose exponent
//! vanishes, then take the window kernels to `π δ(ω − ω')`.

use num_complex::Complex64;

use super::{Detection, DiscreteModel, OracleConfig};
use crate::error::Result;
use crate::terms::{enumerate_terms, g_factors, RateKind, SetupKind, Var};

/// Stationary part of one rate in literal normalization. `R42` is returned
/// with its complex conjugate added.
pub(crate) fn rate(
    dm: &DiscreteModel,
    cfg: &OracleConfig,
    det: &Detection,
    kind: RateKind,
) -> Result<f64> {
    let terms = enumerate_terms(kind, det.setup, det.t_a, det.t_b)?;
    let phase: Complex64 = terms
        .iter()
        .filter(|t| t.is_stationary())
        .map(|t| {
            let theta = t.alpha_units as f64 * det.alpha + t.beta_units as f64 * det.beta;
            Complex64::from_polar(t.sign as f64, theta)
        })
        .sum();
    if phase == Complex64::new(0.0, 0.0) {
        return Ok(0.0);
    }
    let kernel = merged_kernel(dm, kind);
    let interferometers = match det.setup {
        SetupKind::Calibration => 1.0,
        SetupKind::Franson => 1.0 / 16.0,
    };
    let prefactor =
        std::f64::consts::PI.powi(2) * interferometers * cfg.intensity.powi(kind.intensity_power());
    let value = prefactor * phase * kernel;
    Ok(match kind {
        RateKind::R42 => 2.0 * value.re,
        _ => value.re,
    })
}

fn merge(v: Var) -> Var {
    match v {
        Var::APrime => Var::A,
        Var::BPrime => Var::B,
        other => other,
    }
}

/// `Σ F_A(a) F_B(b) Π g(...)` over the variables left after `ω' = ω`.
fn merged_kernel(dm: &DiscreteModel, kind: RateKind) -> Complex64 {
    let factors: Vec<(bool, Var, Var)> = g_factors(kind)
        .into_iter()
        .map(|f| (f.conj, merge(f.a_arg), merge(f.b_arg)))
        .collect();
    let four = kind != RateKind::R2;
    let (na, nb) = (dm.len_a(), dm.len_b());
    let (nat, nbt) = if four { (na, nb) } else { (1, 1) };
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..na {
        for b in 0..nb {
            let outer = dm.weights_a[a] * dm.weights_b[b] * dm.fa_vec[a] * dm.fb_vec[b];
            for at in 0..nat {
                for bt in 0..nbt {
                    let idx = |v: Var| match v {
                        Var::A => a,
                        Var::B => b,
                        Var::ATilde => at,
                        Var::BTilde => bt,
                        _ => unreachable!("primed variables are merged"),
                    };
                    let mut p = Complex64::new(outer, 0.0);
                    if four {
                        p *= dm.weights_a[at] * dm.weights_b[bt];
                    }
                    for &(conj, x, y) in &factors {
                        let z = dm.g_matrix[[idx(x), idx(y)]];
                        p *= if conj { z.conj() } else { z };
                    }
                    acc += p;
                }
            }
        }
    }
    acc
}
