//! The five spectral integrals `J`, `J_A`, `J_B`, `J_AB` and `J_4`.
//!
//! All integrals are tensor-product sums over a truncated box of
//! `±range_sigmas · max(Δ_a, Δ_b)` on both axes. The four-frequency
//! exchange integral is evaluated as the same tensor sum, contracted as a
//! chain of matrix products (`O(n³)` instead of `O(n⁴)`).
//!
//! Error estimates come from refinement: every integral is computed with
//! `n` and `2n` nodes per axis, the finer value is returned and the
//! difference is the error estimate.

mod rules;

pub use rules::{gauss_legendre, AxisRule, Rule, PANEL_ORDER};

use ndarray::Array1;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{real_diag, CMat};
use crate::spectral::{FilterSpec, JointAmplitude};

/// Relative disagreement between `n` and `2n` nodes that triggers
/// [`Error::NonConvergence`].
pub const CONVERGENCE_TOLERANCE: f64 = 0.01;

fn default_fast_path() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub nodes_per_axis: usize,
    pub range_sigmas: f64,
    pub rule: Rule,
    /// Use products of 1-D integrals when the model is separable.
    #[serde(default = "default_fast_path")]
    pub separable_fast_path: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes_per_axis: 64,
            range_sigmas: 8.0,
            rule: Rule::GaussLegendre,
            separable_fast_path: true,
        }
    }
}

impl QuadratureConfig {
    pub fn with_nodes(nodes_per_axis: usize) -> Self {
        QuadratureConfig {
            nodes_per_axis,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < 8 {
            return Err(Error::invalid("nodes_per_axis", "must be >= 8"));
        }
        if !(self.range_sigmas.is_finite() && self.range_sigmas >= 5.0) {
            return Err(Error::invalid("range_sigmas", "must be >= 5"));
        }
        Ok(())
    }

    fn refined(&self) -> Self {
        QuadratureConfig {
            nodes_per_axis: 2 * self.nodes_per_axis,
            ..*self
        }
    }
}

/// Integration grid actually used, reported alongside the integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub nodes_a: usize,
    pub nodes_b: usize,
    pub half_width: f64,
    pub rule: Rule,
    pub separable_fast_path: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JIntegrals {
    pub j: f64,
    pub j_a: f64,
    pub j_b: f64,
    pub j_ab: f64,
    pub j4: f64,
    pub err_j: f64,
    pub err_j_a: f64,
    pub err_j_b: f64,
    pub err_j_ab: f64,
    pub err_j4: f64,
    pub grid_meta: Option<GridMeta>,
}

impl JIntegrals {
    /// Exact values with zero error, for algebraic use and tests.
    pub fn from_values(j: f64, j_a: f64, j_b: f64, j_ab: f64, j4: f64) -> Self {
        JIntegrals {
            j,
            j_a,
            j_b,
            j_ab,
            j4,
            err_j: 0.0,
            err_j_a: 0.0,
            err_j_b: 0.0,
            err_j_ab: 0.0,
            err_j4: 0.0,
            grid_meta: None,
        }
    }

    pub fn with_j4(&self, j4: f64) -> Self {
        JIntegrals { j4, ..*self }
    }
}

/// The four two-dimensional integrals with their refinement errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDim {
    pub values: [f64; 4],
    pub errors: [f64; 4],
    pub meta: GridMeta,
}

const TWO_DIM_NAMES: [&str; 4] = ["J", "J_A", "J_B", "J_AB"];

/// The axis rules for a configuration: `(a-axis, b-axis, half_width)`.
pub fn axis_rules<M: JointAmplitude + ?Sized>(
    model: &M,
    fa: &FilterSpec,
    fb: &FilterSpec,
    cfg: &QuadratureConfig,
) -> (AxisRule, AxisRule, f64) {
    let h = cfg.range_sigmas * model.max_marginal_width();
    let ra = AxisRule::build(cfg.rule, cfg.nodes_per_axis, -h, h, &fa.breakpoints());
    let rb = AxisRule::build(cfg.rule, cfg.nodes_per_axis, -h, h, &fb.breakpoints());
    (ra, rb, h)
}

/// `[J, J_A, J_B, J_AB]` as tensor sums on the given axes.
pub fn two_dim_on_grid<M: JointAmplitude + ?Sized>(
    model: &M,
    fa: &FilterSpec,
    fb: &FilterSpec,
    ra: &AxisRule,
    rb: &AxisRule,
) -> [f64; 4] {
    let fbv: Vec<f64> = rb.nodes.iter().map(|&y| fb.eval_filter(y)).collect();
    let rows: Vec<[f64; 4]> = ra
        .nodes
        .par_iter()
        .zip(ra.weights.par_iter())
        .map(|(&x, &wx)| {
            let fax = fa.eval_filter(x);
            let mut acc = [0.0; 4];
            for ((&y, &wy), &fby) in rb.nodes.iter().zip(&rb.weights).zip(&fbv) {
                let p = wy * model.amplitude(x, y).norm_sqr();
                acc[0] += p;
                acc[2] += fby * p;
            }
            [
                wx * acc[0],
                wx * fax * acc[0],
                wx * acc[2],
                wx * fax * acc[2],
            ]
        })
        .collect();
    let mut total = [0.0; 4];
    for r in rows {
        for k in 0..4 {
            total[k] += r[k];
        }
    }
    total
}

/// `J_4` as a tensor sum on the given axes (the unprimed and primed
/// variables share an axis).
pub fn j4_on_grid<M: JointAmplitude + ?Sized>(
    model: &M,
    fa: &FilterSpec,
    fb: &FilterSpec,
    ra: &AxisRule,
    rb: &AxisRule,
) -> f64 {
    let g = sample_matrix(model, ra, rb);
    let wa = real_diag(&Array1::from(ra.weights.clone()));
    let wb = real_diag(&Array1::from(rb.weights.clone()));
    // M = G · W_b · Gᴴ · W_a · G
    let m = g
        .scale_columns(&wb)
        .matmul(&g.conj_transpose())
        .scale_columns(&wa)
        .matmul(&g);
    let da: Vec<Complex64> = ra
        .nodes
        .iter()
        .zip(&ra.weights)
        .map(|(&x, &w)| Complex64::new(w * fa.eval_filter(x), 0.0))
        .collect();
    let db: Vec<Complex64> = rb
        .nodes
        .iter()
        .zip(&rb.weights)
        .map(|(&y, &w)| Complex64::new(w * fb.eval_filter(y), 0.0))
        .collect();
    let a = conj_matrix(&g).scale_rows(&da).scale_columns(&db);
    2.0 * a.bilinear_sum(&m).re
}

fn sample_matrix<M: JointAmplitude + ?Sized>(model: &M, ra: &AxisRule, rb: &AxisRule) -> CMat {
    let rows: Vec<Vec<Complex64>> = ra
        .nodes
        .par_iter()
        .map(|&x| rb.nodes.iter().map(|&y| model.amplitude(x, y)).collect())
        .collect();
    CMat::from_fn(ra.len(), rb.len(), |i, j| rows[i][j])
}

fn conj_matrix(m: &CMat) -> CMat {
    CMat::from_fn(m.rows(), m.conj_transpose().rows(), |i, j| {
        m.get(i, j).conj()
    })
}

/// 1-D factor sums for a separable model:
/// `(∫|u|², ∫F_A|u|², ∫|v|², ∫F_B|v|²)`.
fn separable_factors<M: JointAmplitude + ?Sized>(
    model: &M,
    fa: &FilterSpec,
    fb: &FilterSpec,
    ra: &AxisRule,
    rb: &AxisRule,
) -> Result<[f64; 4]> {
    let g00 = model.amplitude(0.0, 0.0);
    if g00.norm() == 0.0 {
        return Err(Error::DegenerateModel(
            "separable model vanishes at the origin".into(),
        ));
    }
    let u = |x: f64| model.amplitude(x, 0.0);
    let v = |y: f64| model.amplitude(0.0, y) / g00;
    Ok([
        ra.integrate(|x| u(x).norm_sqr()),
        ra.integrate(|x| fa.eval_filter(x) * u(x).norm_sqr()),
        rb.integrate(|y| v(y).norm_sqr()),
        rb.integrate(|y| fb.eval_filter(y) * v(y).norm_sqr()),
    ])
}

fn use_fast_path<M: JointAmplitude + ?Sized>(model: &M, cfg: &QuadratureConfig) -> bool {
    cfg.separable_fast_path && model.is_separable()
}

fn two_dim_single<M: JointAmplitude + ?Sized>(
    model: &M,
    fa: &FilterSpec,
    fb: &FilterSpec,
    cfg: &QuadratureConfig,
) -> Result<([f64; 4], GridMeta)> {
    let (ra, rb, h) = axis_rules(model, fa, fb, cfg);
    let fast = use_fast_path(model, cfg);
    let values = if fast {
        let [u, ua, v, vb] = separable_factors(model, fa, fb, &ra, &rb)?;
        [u * v, ua * v, u * vb, ua * vb]
    } else {
        two_dim_on_grid(model, fa, fb, &ra, &rb)
    };
    let meta = GridMeta {
        nodes_a: ra.len(),
        nodes_b: rb.len(),
        half_width: h,
        rule: cfg.rule,
        separable_fast_path: fast,
    };
    Ok((values, meta))
}

fn j4_single<M: JointAmplitude + ?Sized>(
    model: &M,
    fa: &FilterSpec,
    fb: &FilterSpec,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (ra, rb, _) = axis_rules(model, fa, fb, cfg);
    if use_fast_path(model, cfg) {
        let [u, ua, v, vb] = separable_factors(model, fa, fb, &ra, &rb)?;
        Ok(2.0 * ua * vb * u * v)
    } else {
        Ok(j4_on_grid(model, fa, fb, &ra, &rb))
    }
}

fn check_convergence(name: &'static str, coarse: f64, fine: f64, scale: f64) -> Result<f64> {
    let err = (fine - coarse).abs();
    let denom = fine.abs().max(scale);
    if denom > 0.0 && err > CONVERGENCE_TOLERANCE * denom {
        return Err(Error::NonConvergence {
            integral: name,
            relative: err / denom,
            tolerance: CONVERGENCE_TOLERANCE,
        });
    }
    Ok(err)
}

/// `J`, `J_A`, `J_B`, `J_AB` with refinement errors.
pub fn compute_two_dim<M: JointAmplitude + ?Sized>(
    model: &M,
    fa: &FilterSpec,
    fb: &FilterSpec,
    cfg: &QuadratureConfig,
) -> Result<TwoDim> {
    cfg.validate()?;
    fa.validate()?;
    fb.validate()?;
    let (coarse, _) = two_dim_single(model, fa, fb, cfg)?;
    let (fine, meta) = two_dim_single(model, fa, fb, &cfg.refined())?;
    // Integrals far below J are compared in absolute terms against J.
    let floor = 1e-10 * fine[0].abs();
    let mut errors = [0.0; 4];
    for k in 0..4 {
        errors[k] = check_convergence(TWO_DIM_NAMES[k], coarse[k], fine[k], floor)?;
    }
    Ok(TwoDim {
        values: fine,
        errors,
        meta,
    })
}

/// `J_4` and its refinement error.
pub fn compute_j4<M: JointAmplitude + ?Sized>(
    model: &M,
    fa: &FilterSpec,
    fb: &FilterSpec,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    cfg.validate()?;
    fa.validate()?;
    fb.validate()?;
    let coarse = j4_single(model, fa, fb, cfg)?;
    let fine = j4_single(model, fa, fb, &cfg.refined())?;
    let err = check_convergence("J_4", coarse, fine, 0.0)?;
    Ok((fine, err))
}

/// All five integrals.
pub fn compute_all<M: JointAmplitude + ?Sized>(
    model: &M,
    fa: &FilterSpec,
    fb: &FilterSpec,
    cfg: &QuadratureConfig,
) -> Result<JIntegrals> {
    let two = compute_two_dim(model, fa, fb, cfg)?;
    let (j4, err_j4) = compute_j4(model, fa, fb, cfg)?;
    let [j, j_a, j_b, j_ab] = two.values;
    let [err_j, err_j_a, err_j_b, err_j_ab] = two.errors;
    Ok(JIntegrals {
        j,
        j_a,
        j_b,
        j_ab,
        j4,
        err_j,
        err_j_a,
        err_j_b,
        err_j_ab,
        err_j4,
        grid_meta: Some(two.meta),
    })
}

/// Normalized four-photon coherence `J_4 / (2 J J_AB)`.
///
/// Values outside `[0, 1]` by no more than the propagated error are clamped;
/// larger excursions are returned unchanged.
pub fn coherence_ratio(j: &JIntegrals) -> Result<f64> {
    let denom = 2.0 * j.j * j.j_ab;
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::DegenerateModel(format!(
            "coherence ratio needs J > 0 and J_AB > 0 (J = {}, J_AB = {})",
            j.j, j.j_ab
        )));
    }
    let r = j.j4 / denom;
    let rel_err = j.err_j4 / denom + r * (j.err_j / j.j + j.err_j_ab / j.j_ab);
    let tol = rel_err + 4.0 * f64::EPSILON;
    if r < 0.0 && r >= -tol {
        Ok(0.0)
    } else if r > 1.0 && r <= 1.0 + tol {
        Ok(1.0)
    } else {
        Ok(r)
    }
}
