//! Calibration peaks, Franson coincidence rates and fringe visibility.
//!
//! Rates are in "intensity × J" units; the detection-efficiency product only
//! rescales rates (see [`CalibrationResult::scaled`]) and never enters a
//! visibility.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::JIntegrals;

fn check_intensity(intensity: f64) -> Result<()> {
    if intensity.is_finite() && intensity >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "intensity",
            format!("must be finite and >= 0, got {intensity}"),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationResult {
    /// Central peak `R(0,0)` to first order in the intensity.
    pub r_center: f64,
    /// One side peak `R(τ,0)`.
    pub r_side: f64,
    /// Side/center ratio in the long-pulse-train limit.
    pub rho: f64,
}

impl CalibrationResult {
    pub fn scaled(&self, eta_product: f64) -> Self {
        CalibrationResult {
            r_center: eta_product * self.r_center,
            r_side: eta_product * self.r_side,
            rho: self.rho,
        }
    }
}

/// `R(0,0) = I J_AB`, `R(τ,0) = I² J_A J_B`, `ρ = I J_A J_B / J_AB`.
///
/// The `O(I²)` part of the central peak is not included; it is available
/// separately from [`center_peak_with_four_photon`].
pub fn calibration_rates(intensity: f64, j: &JIntegrals) -> Result<CalibrationResult> {
    check_intensity(intensity)?;
    if intensity == 0.0 {
        return Ok(CalibrationResult {
            r_center: 0.0,
            r_side: 0.0,
            rho: 0.0,
        });
    }
    if j.j_ab.is_nan() || j.j_ab <= 0.0 {
        return Err(Error::DegenerateModel(
            "J_AB = 0: no pair passes both filters".into(),
        ));
    }
    Ok(CalibrationResult {
        r_center: intensity * j.j_ab,
        r_side: intensity * intensity * j.j_a * j.j_b,
        rho: intensity * j.j_a * j.j_b / j.j_ab,
    })
}

/// Central peak including its four-photon part,
/// `I J_AB + I² (2 J J_AB + J_4 + J_A J_B)`, as assembled from the
/// stationary terms of the expansion at `T_A = T_B = 0`.
pub fn center_peak_with_four_photon(intensity: f64, j: &JIntegrals) -> f64 {
    intensity * j.j_ab + intensity * intensity * (2.0 * j.j * j.j_ab + j.j4 + j.j_a * j.j_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FransonRates {
    pub r2: f64,
    pub r4: f64,
    pub total: f64,
}

impl FransonRates {
    pub fn scaled(&self, eta_product: f64) -> Self {
        FransonRates {
            r2: eta_product * self.r2,
            r4: eta_product * self.r4,
            total: eta_product * self.total,
        }
    }
}

/// Coincidence rates in the intermediate time bin `T_A = T_B = τ`.
pub fn franson_rates(
    intensity: f64,
    j: &JIntegrals,
    alpha: f64,
    beta: f64,
) -> Result<FransonRates> {
    check_intensity(intensity)?;
    Ok(franson_rates_at(intensity, j, alpha + beta))
}

fn franson_rates_at(intensity: f64, j: &JIntegrals, phase_sum: f64) -> FransonRates {
    let fringe = 1.0 + phase_sum.cos();
    let r2 = intensity * j.j_ab * fringe;
    let r4 = intensity * intensity * ((2.0 * j.j_ab * j.j + j.j4) * fringe + 2.0 * j.j_a * j.j_b);
    FransonRates {
        r2,
        r4,
        total: r2 + r4,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VisibilityResult {
    pub v_exact: f64,
    pub v_first_order: f64,
    pub rho: f64,
    /// `R̄ = I J_AB`, the first-order mean rate.
    pub mean_rate: f64,
    #[serde(skip)]
    intensity: f64,
    #[serde(skip)]
    integrals: JIntegrals,
}

impl VisibilityResult {
    /// Total intermediate-bin rate `R(τ,τ)` at analyzer phase sum `α+β`.
    pub fn rate_at(&self, phase_sum: f64) -> f64 {
        franson_rates_at(self.intensity, &self.integrals, phase_sum).total
    }

    /// `(α+β, R(τ,τ))` on `n` equally spaced phases in `[0, 2π)`.
    pub fn phase_table(&self, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                (phi, self.rate_at(phi))
            })
            .collect()
    }
}

/// Fringe visibility from the Franson rates.
///
/// Writing the total rate as `A + B cos(α+β)`, `v_exact = B / A`, i.e.
/// `(1 + I(2J + J_4/J_AB)) / (1 + I(2J + J_4/J_AB) + 2ρ)`; to first order
/// this is `1 − 2ρ` and `J_4` drops out.
pub fn visibility(intensity: f64, j: &JIntegrals) -> Result<VisibilityResult> {
    check_intensity(intensity)?;
    if j.j_ab.is_nan() || j.j_ab <= 0.0 {
        return Err(Error::DegenerateModel("J_AB = 0: no coincidences".into()));
    }
    let rho = intensity * j.j_a * j.j_b / j.j_ab;
    let coherent = 1.0 + intensity * (2.0 * j.j + j.j4 / j.j_ab);
    Ok(VisibilityResult {
        v_exact: coherent / (coherent + 2.0 * rho),
        v_first_order: 1.0 - 2.0 * rho,
        rho,
        mean_rate: intensity * j.j_ab,
        intensity,
        integrals: *j,
    })
}

/// `(max − min) / (max + min)` of a sampled fringe.
pub fn fringe_visibility(rates: &[f64]) -> f64 {
    let max = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = rates.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min) / (max + min)
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Parameters of the two-independent-pairs picture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonModelParams {
    /// Pair-creation probability per detection window.
    pub p2c: f64,
    /// `Δ_A / Δ_a`.
    pub ratio_a: f64,
    /// `Δ_B / Δ_b`.
    pub ratio_b: f64,
}

impl PoissonModelParams {
    pub fn new(p2c: f64, ratio_a: f64, ratio_b: f64) -> Result<Self> {
        if !(p2c.is_finite() && p2c >= 0.0) {
            return Err(Error::invalid("p2c", "must be finite and >= 0"));
        }
        for (name, r) in [("ratio_a", ratio_a), ("ratio_b", ratio_b)] {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::invalid(name, format!("must lie in (0, 1], got {r}")));
            }
        }
        Ok(PoissonModelParams {
            p2c,
            ratio_a,
            ratio_b,
        })
    }

    /// Four-photon probability of two independent pairs, `P_2c² / 2`.
    pub fn p4c(&self) -> f64 {
        0.5 * self.p2c * self.p2c
    }
}

pub fn poisson_visibility(p: &PoissonModelParams) -> f64 {
    1.0 / (1.0 + p.p2c / (1.0 + p.p2c) * p.ratio_b)
}

pub fn poisson_visibility_first_order(p: &PoissonModelParams) -> f64 {
    1.0 - p.p2c * p.ratio_b
}

/// `(R_2, R_4)` of the independent-pairs picture.
pub fn poisson_rates(p: &PoissonModelParams, alpha: f64, beta: f64) -> (f64, f64) {
    let half_fringe = 0.5 * (1.0 + (alpha + beta).cos());
    let r2 = p.p2c * p.ratio_a * half_fringe;
    let r4 = p.p4c() * (2.0 * p.ratio_a * half_fringe + 2.0 * p.ratio_a * p.ratio_b * 0.5);
    (r2, r4)
}

/// Small-pump comparison with the single-mode squeezing parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoteInProofCheck {
    /// Pair probability per qubit, `2 tanh²t / cosh⁴t`.
    pub p_pair: f64,
    /// First-order Poisson visibility with `Δ_B/Δ_b = 1`.
    pub v_predicted: f64,
    /// `1 − 2t²`.
    pub v_small_parameter: f64,
    pub deviation: f64,
}

pub fn note_in_proof_check(t: f64) -> Result<NoteInProofCheck> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid("tau_param", "must be finite and >= 0"));
    }
    let p_pair = 2.0 * t.tanh().powi(2) / t.cosh().powi(4);
    let v_predicted = poisson_visibility_first_order(&PoissonModelParams::new(p_pair, 1.0, 1.0)?);
    let v_small_parameter = 1.0 - 2.0 * t * t;
    Ok(NoteInProofCheck {
        p_pair,
        v_predicted,
        v_small_parameter,
        deviation: (v_predicted - v_small_parameter).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn sample_j() -> JIntegrals {
        JIntegrals::from_values(3.0, 1.2, 2.1, 1.1, 4.5)
    }

    #[test]
    fn calibration_zero_intensity() {
        let c = calibration_rates(0.0, &sample_j()).unwrap();
        assert_eq!((c.r_center, c.r_side, c.rho), (0.0, 0.0, 0.0));
    }

    #[test]
    fn calibration_no_filter_rho_is_ij() {
        let j = JIntegrals::from_values(2.5, 2.5, 2.5, 2.5, 1.0);
        let c = calibration_rates(0.01, &j).unwrap();
        assert_relative_eq!(c.rho, 0.01 * 2.5, max_relative = 1e-15);
        assert_relative_eq!(c.rho, c.r_side / c.r_center, max_relative = 1e-15);
        let s = c.scaled(0.01);
        assert_eq!(s.rho, c.rho);
    }

    #[test]
    fn calibration_degenerate() {
        let j = JIntegrals::from_values(1.0, 0.0, 1.0, 0.0, 0.0);
        assert!(matches!(
            calibration_rates(0.1, &j),
            Err(Error::DegenerateModel(_))
        ));
        assert!(calibration_rates(-1.0, &sample_j()).is_err());
    }

    #[test]
    fn franson_extremes() {
        let j = sample_j();
        let i = 0.003;
        let null = franson_rates(i, &j, PI, 0.0).unwrap();
        assert_relative_eq!(
            null.total,
            i * i * 2.0 * j.j_a * j.j_b,
            max_relative = 1e-12
        );
        let peak = franson_rates(i, &j, 0.0, 0.0).unwrap();
        assert_relative_eq!(peak.r2, 2.0 * i * j.j_ab, max_relative = 1e-15);
    }

    #[test]
    fn visibility_zero_intensity_and_j4_independence() {
        let j = sample_j();
        let v = visibility(0.0, &j).unwrap();
        assert_eq!((v.v_exact, v.v_first_order), (1.0, 1.0));
        let i = 0.01;
        let base = visibility(i, &j).unwrap();
        for j4 in [0.0, 2.0 * j.j * j.j_ab] {
            let other = visibility(i, &j.with_j4(j4)).unwrap();
            assert_eq!(other.v_first_order, base.v_first_order);
            assert!((other.v_exact - base.v_exact).abs() < 10.0 * i * i * j.j * j.j);
        }
    }

    #[test]
    fn poisson_examples() {
        let p = PoissonModelParams::new(0.0, 0.5, 0.5).unwrap();
        assert_eq!(poisson_visibility(&p), 1.0);
        let p = PoissonModelParams::new(0.05, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            poisson_visibility(&p),
            1.0 / (1.0 + 0.05 / 1.05),
            max_relative = 1e-15
        );
        assert!((poisson_visibility(&p) - 0.9545).abs() < 1e-4);
        let narrow = PoissonModelParams::new(0.05, 1.0, 0.5).unwrap();
        assert!(poisson_visibility(&narrow) > poisson_visibility(&p));
        assert!(PoissonModelParams::new(0.1, 0.0, 1.0).is_err());
        assert!(PoissonModelParams::new(0.1, 1.0, 1.5).is_err());
    }

    #[test]
    fn poisson_rate_values() {
        let p = PoissonModelParams::new(0.1, 1.0, 1.0).unwrap();
        let (r2, r4) = poisson_rates(&p, 0.0, 0.0);
        assert_relative_eq!(r2, 0.1, max_relative = 1e-15);
        assert_relative_eq!(r4, 0.015, max_relative = 1e-14);
        let q = PoissonModelParams::new(0.2, 0.4, 0.7).unwrap();
        let (r2, r4) = poisson_rates(&q, PI, 0.0);
        assert!(r2.abs() < 1e-17);
        assert_relative_eq!(r4, q.p4c() * 0.4 * 0.7, max_relative = 1e-14);
    }

    #[test]
    fn poisson_rates_second_path() {
        // Expanded by hand: R2+R4 = ra/2 [(p + p²)(1+c) + p² rb].
        for &(p, ra, rb, phi) in &[
            (0.1, 1.0, 1.0, 0.0),
            (0.07, 0.3, 0.8, 1.1),
            (0.2, 0.5, 0.25, 2.9),
        ] {
            let params = PoissonModelParams::new(p, ra, rb).unwrap();
            let (r2, r4) = poisson_rates(&params, phi, 0.0);
            let c = phi.cos();
            let total = 0.5 * ra * ((p + p * p) * (1.0 + c) + p * p * rb);
            assert_relative_eq!(r2 + r4, total, max_relative = 1e-14);
        }
    }

    #[test]
    fn note_in_proof_origin_and_series() {
        let z = note_in_proof_check(0.0).unwrap();
        assert_eq!((z.p_pair, z.v_predicted), (0.0, 1.0));
        // Taylor series of 2 tanh²t / cosh⁴t through t¹².
        let coeffs = [
            (2, 2.0),
            (4, -16.0 / 3.0),
            (6, 364.0 / 45.0),
            (8, -2896.0 / 315.0),
            (10, 123574.0 / 14175.0),
            (12, -487136.0 / 66825.0),
        ];
        let t: f64 = 0.5;
        let series: f64 = coeffs.iter().map(|&(k, c)| c * t.powi(k)).sum();
        let direct = note_in_proof_check(t).unwrap().p_pair;
        assert!((direct - series).abs() / direct < 0.05);
        assert!(note_in_proof_check(-0.1).is_err());
    }

    proptest! {
        #[test]
        fn phase_sweep_visibility_matches_v_exact(
            j in 0.5f64..5.0, fa in 0.1f64..1.0, fb in 0.1f64..1.0, coh in 0.0f64..1.0, i in 0.0001f64..0.05
        ) {
            let ja = fa * j;
            let jb = fb * j;
            let jab = 0.9 * ja.min(jb);
            let js = JIntegrals::from_values(j, ja, jb, jab, coh * 2.0 * j * jab);
            let v = visibility(i, &js).unwrap();
            let max = v.rate_at(0.0);
            let min = v.rate_at(PI);
            let extracted = (max - min) / (max + min);
            prop_assert!((extracted - v.v_exact).abs() <= 1e-12);
            for (_, r) in v.phase_table(16) {
                prop_assert!(r >= 0.0);
            }
        }

        #[test]
        fn first_order_visibility_depends_only_on_rho(rho in 0.001f64..0.1, f in 0.1f64..1.0) {
            // weak pump without filters vs stronger pump with narrow filters at equal rho
            let open = JIntegrals::from_values(2.0, 2.0, 2.0, 2.0, 1.0);
            let narrow = JIntegrals::from_values(2.0, 2.0 * f, 2.0 * f, 1.9 * f, 0.5);
            let i_open = rho / (open.j_a * open.j_b / open.j_ab);
            let i_narrow = rho / (narrow.j_a * narrow.j_b / narrow.j_ab);
            let a = visibility(i_open, &open).unwrap();
            let b = visibility(i_narrow, &narrow).unwrap();
            prop_assert!((a.v_first_order - b.v_first_order).abs() < 1e-14);
        }
    }
}
