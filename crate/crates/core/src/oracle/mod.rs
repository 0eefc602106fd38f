//! Brute-force evaluation of the raw coincidence-rate integrands on a
//! discrete frequency grid.
//!
//! The integrands keep every oscillating factor and the finite detector
//! window: each pair of conjugate frequencies carries
//! `ΔT·sinc((ω − ω')ΔT)`, the Fourier kernel of a `±ΔT` integration window.
//! Sums are either evaluated literally with nested loops
//! ([`Evaluation::Direct`], capped by [`OracleConfig::max_grid`]) or
//! contracted into matrix chains ([`Evaluation::Contracted`]), which is exact
//! algebra on the same finite sum and scales to grids that resolve long
//! delays.
//!
//! Normalization is literal: the `1/2` of every interferometer factor is kept
//! and `ΔT → ∞` turns each window kernel into `π δ(ω − ω')`. Comparisons with
//! the closed forms of [`crate::rates`] go through [`closed_form_scale`].

mod contract;
mod direct;
mod stationary;
mod study;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{AxisRule, JIntegrals};
use crate::spectral::{FilterSpec, JointAmplitude, SpectralModel};
use crate::terms::{RateKind, SetupKind};

pub use study::{convergence_study, oracle_visibility, ConvergenceRow};

/// Default cap on nodes per axis for literal six-index sums.
pub const DEFAULT_MAX_GRID: usize = 12;
/// Default cap on nodes per axis for literal four-index sums.
pub const DEFAULT_MAX_GRID_4D: usize = 48;
/// Default cap on nodes per axis for contracted sums.
pub const DEFAULT_MAX_GRID_CONTRACTED: usize = 1024;

/// Ratio between a literal oracle rate in the `ΔT → ∞` limit and the
/// corresponding closed form of [`crate::rates`].
///
/// Each window kernel integrates to `π`. Franson rates also carry the
/// `1/2⁴` of the interferometer factors, times the factor two between the
/// raw expansion and the physical rates.
pub fn closed_form_scale(setup: SetupKind) -> f64 {
    let pi2 = std::f64::consts::PI.powi(2);
    match setup {
        SetupKind::Calibration => pi2,
        SetupKind::Franson => pi2 / 8.0,
    }
}

/// The joint amplitude, filters and quadrature weights sampled on a grid.
#[derive(Debug, Clone)]
pub struct DiscreteModel {
    pub nodes_a: Vec<f64>,
    pub weights_a: Vec<f64>,
    pub nodes_b: Vec<f64>,
    pub weights_b: Vec<f64>,
    /// `g(ω_a[i], ω_b[j])`.
    pub g_matrix: Array2<Complex64>,
    /// Filter intensity transmissions on the a- and b-axis nodes.
    pub fa_vec: Vec<f64>,
    pub fb_vec: Vec<f64>,
}

impl DiscreteModel {
    /// Sample on the given axis rules, e.g. those of a quadrature run, so
    /// that grid sums can be compared node for node.
    pub fn from_rules<M: JointAmplitude + ?Sized>(
        model: &M,
        fa: &FilterSpec,
        fb: &FilterSpec,
        ra: &AxisRule,
        rb: &AxisRule,
    ) -> Result<Self> {
        let g_matrix = Array2::from_shape_fn((ra.len(), rb.len()), |(i, j)| {
            model.amplitude(ra.nodes[i], rb.nodes[j])
        });
        let dm = DiscreteModel {
            nodes_a: ra.nodes.clone(),
            weights_a: ra.weights.clone(),
            nodes_b: rb.nodes.clone(),
            weights_b: rb.weights.clone(),
            g_matrix,
            fa_vec: ra.nodes.iter().map(|&x| fa.eval_filter(x)).collect(),
            fb_vec: rb.nodes.iter().map(|&y| fb.eval_filter(y)).collect(),
        };
        dm.validate()?;
        Ok(dm)
    }

    /// `n` equally spaced nodes on `[-half_width, half_width]` per axis with
    /// trapezoid weights.
    pub fn uniform<M: JointAmplitude + ?Sized>(
        model: &M,
        fa: &FilterSpec,
        fb: &FilterSpec,
        n: usize,
        half_width: f64,
    ) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(
                "nodes",
                format!("need at least 3 nodes, got {n}"),
            ));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid("half_width", "must be finite and > 0"));
        }
        let r = AxisRule::trapezoid(n, -half_width, half_width);
        Self::from_rules(model, fa, fb, &r, &r)
    }

    /// A uniform grid fine enough that the delays of a `τ`/`ΔT` setup do not
    /// alias: a uniform grid of spacing `h` is periodic in time with period
    /// `2π/h`, which must exceed every delay that appears in an integrand.
    pub fn resolving(
        model: &SpectralModel,
        fa: &FilterSpec,
        fb: &FilterSpec,
        tau: f64,
        delta_t: f64,
    ) -> Result<Self> {
        let (n, half_width) = resolving_grid(model, tau, delta_t)?;
        Self::uniform(model, fa, fb, n, half_width)
    }

    pub fn len_a(&self) -> usize {
        self.nodes_a.len()
    }

    pub fn len_b(&self) -> usize {
        self.nodes_b.len()
    }

    /// Largest axis length.
    pub fn axis_len(&self) -> usize {
        self.len_a().max(self.len_b())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, nodes, weights, filt) in [
            ("nodes_a", &self.nodes_a, &self.weights_a, &self.fa_vec),
            ("nodes_b", &self.nodes_b, &self.weights_b, &self.fb_vec),
        ] {
            let n = nodes.len();
            if n == 0 || weights.len() != n || filt.len() != n {
                return Err(Error::invalid(
                    name,
                    "nodes, weights and filter must be nonempty and equally long",
                ));
            }
            let scale = nodes.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
            for i in 0..n {
                if (nodes[i] + nodes[n - 1 - i]).abs() > 1e-12 * scale {
                    return Err(Error::invalid(name, "grid must be symmetric about zero"));
                }
            }
            if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(Error::invalid(name, "weights must be finite and positive"));
            }
            if filt.iter().any(|f| !(0.0..=1.0).contains(f)) {
                return Err(Error::invalid(name, "filter transmission outside [0, 1]"));
            }
        }
        if self.g_matrix.dim() != (self.len_a(), self.len_b()) {
            return Err(Error::invalid("g_matrix", "shape does not match the axes"));
        }
        if self
            .g_matrix
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::invalid("g_matrix", "must be finite everywhere"));
        }
        Ok(())
    }

    /// `J`, `J_A`, `J_B`, `J_AB` and `J_4` as literal loops over the grid.
    /// The `J_4` loop is four-dimensional and limited by `cap_4d`.
    pub fn grid_integrals(&self, cap_4d: usize) -> Result<JIntegrals> {
        check_cap(self.axis_len(), cap_4d, 4)?;
        let [j, j_a, j_b, j_ab] = direct::two_dim_sums(self);
        let j4 = direct::j4_sum(self);
        Ok(JIntegrals::from_values(j, j_a, j_b, j_ab, j4))
    }

    /// The same values with `J_4` regrouped into matrix products; no cap.
    pub fn grid_integrals_contracted(&self) -> JIntegrals {
        let [j, j_a, j_b, j_ab] = direct::two_dim_sums(self);
        JIntegrals::from_values(j, j_a, j_b, j_ab, contract::j4(self))
    }
}

/// `(nodes, half_width)` for [`DiscreteModel::resolving`].
pub fn resolving_grid(model: &SpectralModel, tau: f64, delta_t: f64) -> Result<(usize, f64)> {
    for (name, v) in [("tau", tau), ("delta_t", delta_t)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(name, "must be finite and > 0"));
        }
    }
    let half_width = 5.0 * model.max_marginal_width();
    let narrowest = model.delta_a.min(model.delta_b).min(model.delta_p);
    let period = 2.0 * tau + 2.0 * delta_t + 12.0 / narrowest;
    let h = 2.0 * std::f64::consts::PI / period;
    let n = (2.0 * half_width / h).ceil() as usize + 1;
    Ok((n | 1, half_width))
}

/// How the finite sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluation {
    /// Nested loops over every index.
    Direct,
    /// The same sums regrouped into matrix products.
    Contracted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    /// Delay between time bins (ps).
    pub tau: f64,
    /// Detector window half-width (ps).
    pub delta_t: f64,
    /// Pairs per pulse scale `I`.
    pub intensity: f64,
    /// Keep every term. When off, only the stationary terms are summed, in
    /// the `ΔT → ∞` limit.
    #[serde(default = "yes")]
    pub include_oscillatory: bool,
    #[serde(default = "direct")]
    pub evaluation: Evaluation,
    #[serde(default = "default_max_grid")]
    pub max_grid: usize,
    #[serde(default = "default_max_grid_4d")]
    pub max_grid_4d: usize,
    #[serde(default = "default_max_grid_contracted")]
    pub max_grid_contracted: usize,
}

fn yes() -> bool {
    true
}
fn direct() -> Evaluation {
    Evaluation::Direct
}
fn default_max_grid() -> usize {
    DEFAULT_MAX_GRID
}
fn default_max_grid_4d() -> usize {
    DEFAULT_MAX_GRID_4D
}
fn default_max_grid_contracted() -> usize {
    DEFAULT_MAX_GRID_CONTRACTED
}

impl OracleConfig {
    pub fn new(tau: f64, delta_t: f64, intensity: f64) -> Self {
        OracleConfig {
            tau,
            delta_t,
            intensity,
            include_oscillatory: true,
            evaluation: Evaluation::Direct,
            max_grid: DEFAULT_MAX_GRID,
            max_grid_4d: DEFAULT_MAX_GRID_4D,
            max_grid_contracted: DEFAULT_MAX_GRID_CONTRACTED,
        }
    }

    pub fn contracted(mut self) -> Self {
        self.evaluation = Evaluation::Contracted;
        self
    }

    pub fn stationary_only(mut self) -> Self {
        self.include_oscillatory = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("tau", self.tau), ("delta_t", self.delta_t)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, "must be finite and > 0"));
            }
        }
        if !(self.intensity.is_finite() && self.intensity >= 0.0) {
            return Err(Error::invalid("intensity", "must be finite and >= 0"));
        }
        Ok(())
    }

    /// Reject a grid before any work is done.
    pub fn check_grid(&self, dm: &DiscreteModel, dims: usize) -> Result<()> {
        let n = dm.axis_len();
        if !self.include_oscillatory {
            // Stationary sums have at most four free indices.
            return check_cap(n, self.max_grid_4d, dims.min(4));
        }
        match self.evaluation {
            Evaluation::Direct if dims >= 6 => check_cap(n, self.max_grid, dims),
            Evaluation::Direct => check_cap(n, self.max_grid_4d, dims),
            Evaluation::Contracted => check_cap(n, self.max_grid_contracted, dims),
        }
    }
}

fn check_cap(nodes: usize, cap: usize, dims: usize) -> Result<()> {
    if nodes > cap {
        Err(Error::GridTooLarge { nodes, cap, dims })
    } else {
        Ok(())
    }
}

/// Detection bins and analyzer phases of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub setup: SetupKind,
    /// Detection times in units of `τ`.
    pub t_a: i32,
    pub t_b: i32,
    pub alpha: f64,
    pub beta: f64,
}

impl Detection {
    pub fn new(setup: SetupKind, t_a: i32, t_b: i32, alpha: f64, beta: f64) -> Result<Self> {
        for t in [t_a, t_b] {
            if !(0..=2).contains(&t) {
                return Err(Error::InvalidTimeBin(t));
            }
        }
        Ok(Detection {
            setup,
            t_a,
            t_b,
            alpha,
            beta,
        })
    }

    /// Calibration setup at `(T_A, T_B)`.
    pub fn calibration(t_a: i32, t_b: i32) -> Result<Self> {
        Self::new(SetupKind::Calibration, t_a, t_b, 0.0, 0.0)
    }

    /// Franson setup in the intermediate bin `(τ, τ)`.
    pub fn franson(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(SetupKind::Franson, 1, 1, alpha, beta)
    }
}

/// The four-photon rate split into its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct R4Components {
    pub r41: f64,
    /// `R41` from `2 I J R2` with the grid's own `J`.
    pub r41_identity: f64,
    pub r42_plus_cc: f64,
    pub r43: f64,
}

impl R4Components {
    pub fn total(&self) -> f64 {
        self.r41 + self.r42_plus_cc + self.r43
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRates {
    pub r2: f64,
    pub r4: R4Components,
}

impl OracleRates {
    pub fn total(&self) -> f64 {
        self.r2 + self.r4.total()
    }
}

/// Per-node factors and pair matrices shared by both evaluation paths.
pub(crate) struct Tables {
    /// `G(x, y) = g(x, y) (1 + e^{i(x+y)τ})`.
    pub g: Array2<Complex64>,
    /// Unprimed a-node factor `w f_A E(ω, α) e^{-iω T_A}`; the primed one is
    /// its conjugate.
    pub na: Vec<Complex64>,
    pub nb: Vec<Complex64>,
    pub wa: Vec<Complex64>,
    pub wb: Vec<Complex64>,
    /// `ΔT sinc((ω − ω')ΔT)`.
    pub sa: Array2<Complex64>,
    pub sb: Array2<Complex64>,
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

fn evolution(setup: SetupKind, omega: f64, tau: f64, theta: f64) -> Complex64 {
    match setup {
        SetupKind::Calibration => Complex64::new(1.0, 0.0),
        SetupKind::Franson => {
            (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, omega * tau + theta)) * 0.5
        }
    }
}

impl Tables {
    pub fn build(dm: &DiscreteModel, cfg: &OracleConfig, det: &Detection) -> Self {
        let tau = cfg.tau;
        let g = Array2::from_shape_fn(dm.g_matrix.dim(), |(i, j)| {
            let phase = (dm.nodes_a[i] + dm.nodes_b[j]) * tau;
            dm.g_matrix[[i, j]] * (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, phase))
        });
        let node = |nodes: &[f64], w: &[f64], f: &[f64], t: i32, theta: f64| -> Vec<Complex64> {
            nodes
                .iter()
                .zip(w)
                .zip(f)
                .map(|((&x, &w), &f)| {
                    w * f.sqrt()
                        * evolution(det.setup, x, tau, theta)
                        * Complex64::from_polar(1.0, -x * t as f64 * tau)
                })
                .collect()
        };
        let window = |nodes: &[f64]| {
            let n = nodes.len();
            Array2::from_shape_fn((n, n), |(i, j)| {
                Complex64::new(cfg.delta_t * sinc((nodes[i] - nodes[j]) * cfg.delta_t), 0.0)
            })
        };
        let real = |w: &[f64]| w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Tables {
            g,
            na: node(&dm.nodes_a, &dm.weights_a, &dm.fa_vec, det.t_a, det.alpha),
            nb: node(&dm.nodes_b, &dm.weights_b, &dm.fb_vec, det.t_b, det.beta),
            wa: real(&dm.weights_a),
            wb: real(&dm.weights_b),
            sa: window(&dm.nodes_a),
            sb: window(&dm.nodes_b),
        }
    }

    /// Upper bound on `|R2| / I`: every node factor and window kernel is
    /// bounded by `w` and `ΔT`, so `|R2| ≤ I ΔT² (Σ w_x w_y |G|)²`.
    pub fn r2_bound(&self, delta_t: f64) -> f64 {
        let mut acc = 0.0;
        for ((i, j), z) in self.g.indexed_iter() {
            acc += self.wa[i].re * self.wb[j].re * z.norm();
        }
        (delta_t * acc).powi(2)
    }

    /// `Σ w_x w_y |G(x, y)|²`, the norm of the undetected pair.
    pub fn pair_norm(&self) -> f64 {
        let mut acc = 0.0;
        for ((i, j), z) in self.g.indexed_iter() {
            acc += self.wa[i].re * self.wb[j].re * z.norm_sqr();
        }
        acc
    }
}

fn check_positive(name: &'static str, v: f64, magnitude: f64) -> Result<()> {
    if v < -1e-10 * magnitude.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateModel(format!(
            "oracle {name} = {v:e} is negative"
        )));
    }
    Ok(())
}

/// Two-photon rate `R2(T_A, T_B)` in literal normalization.
pub fn oracle_r2(dm: &DiscreteModel, cfg: &OracleConfig, det: &Detection) -> Result<f64> {
    cfg.validate()?;
    cfg.check_grid(dm, 4)?;
    if !cfg.include_oscillatory {
        return stationary::rate(dm, cfg, det, RateKind::R2);
    }
    let t = Tables::build(dm, cfg, det);
    let r2 = match cfg.evaluation {
        Evaluation::Direct => direct::r2(&t),
        Evaluation::Contracted => contract::r2(&t),
    } * cfg.intensity;
    check_positive("R2", r2, cfg.intensity * t.r2_bound(cfg.delta_t))?;
    Ok(r2)
}

/// Four-photon parts `R41`, `R42 + c.c.`, `R43` in literal normalization.
pub fn oracle_r4(dm: &DiscreteModel, cfg: &OracleConfig, det: &Detection) -> Result<R4Components> {
    Ok(oracle_rates(dm, cfg, det)?.r4)
}

/// Both orders at once, sharing the tables.
pub fn oracle_rates(
    dm: &DiscreteModel,
    cfg: &OracleConfig,
    det: &Detection,
) -> Result<OracleRates> {
    cfg.validate()?;
    cfg.check_grid(dm, 6)?;
    let i = cfg.intensity;
    if !cfg.include_oscillatory {
        let r2 = stationary::rate(dm, cfg, det, RateKind::R2)?;
        let j = direct::two_dim_sums(dm)[0];
        return Ok(OracleRates {
            r2,
            r4: R4Components {
                r41: stationary::rate(dm, cfg, det, RateKind::R41)?,
                r41_identity: 2.0 * i * j * r2,
                r42_plus_cc: stationary::rate(dm, cfg, det, RateKind::R42)?,
                r43: stationary::rate(dm, cfg, det, RateKind::R43)?,
            },
        });
    }
    let t = Tables::build(dm, cfg, det);
    let (r2, r42, r43) = match cfg.evaluation {
        Evaluation::Direct => (direct::r2(&t), direct::r42(&t), direct::r43(&t)),
        Evaluation::Contracted => (contract::r2(&t), contract::r42(&t), contract::r43(&t)),
    };
    let r2 = i * r2;
    let j = direct::two_dim_sums(dm)[0];
    let rates = OracleRates {
        r2,
        r4: R4Components {
            r41: i * r2 * t.pair_norm(),
            r41_identity: 2.0 * i * j * r2,
            r42_plus_cc: i * i * 2.0 * r42.re,
            r43: i * i * r43.re,
        },
    };
    let scale = rates.total().abs().max(i * t.r2_bound(cfg.delta_t));
    check_positive("R2", rates.r2, scale)?;
    check_positive("R41", rates.r4.r41, scale)?;
    check_positive("R43", rates.r4.r43, scale)?;
    check_positive("R4", rates.r4.total(), scale)?;
    Ok(rates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralModel;

    fn small() -> (SpectralModel, DiscreteModel) {
        let m = SpectralModel::gaussian(1.0, 2.0, 2.5).unwrap();
        let fa = FilterSpec::gaussian(3.0, 0.0).unwrap();
        let fb = FilterSpec::gaussian(4.0, 0.0).unwrap();
        let dm = DiscreteModel::uniform(&m, &fa, &fb, 9, 8.0).unwrap();
        (m, dm)
    }

    #[test]
    fn direct_and_contracted_agree() {
        let (_, dm) = small();
        for det in [
            Detection::franson(0.3, 0.9).unwrap(),
            Detection::calibration(1, 0).unwrap(),
            Detection::calibration(0, 0).unwrap(),
        ] {
            let cfg = OracleConfig::new(1.7, 2.0, 0.05);
            let a = oracle_rates(&dm, &cfg, &det).unwrap();
            let b = oracle_rates(&dm, &cfg.contracted(), &det).unwrap();
            for (x, y) in [
                (a.r2, b.r2),
                (a.r4.r41, b.r4.r41),
                (a.r4.r42_plus_cc, b.r4.r42_plus_cc),
                (a.r4.r43, b.r4.r43),
            ] {
                assert!((x - y).abs() <= 1e-12 * a.total().abs(), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn grid_caps() {
        let m = SpectralModel::gaussian(1.0, 2.0, 2.0).unwrap();
        let f = FilterSpec::none();
        let dm = DiscreteModel::uniform(&m, &f, &f, 13, 8.0).unwrap();
        let cfg = OracleConfig::new(10.0, 2.0, 0.1);
        let det = Detection::franson(0.0, 0.0).unwrap();
        assert_eq!(
            oracle_rates(&dm, &cfg, &det).unwrap_err(),
            Error::GridTooLarge {
                nodes: 13,
                cap: 12,
                dims: 6
            }
        );
        assert!(oracle_r2(&dm, &cfg, &det).is_ok());
        assert!(oracle_rates(&dm, &cfg.contracted(), &det).is_ok());
    }

    #[test]
    fn rejects_asymmetric_grid() {
        let m = SpectralModel::gaussian(1.0, 2.0, 2.0).unwrap();
        let f = FilterSpec::none();
        let r = AxisRule::trapezoid(8, -4.0, 5.0);
        assert!(DiscreteModel::from_rules(&m, &f, &f, &r, &r).is_err());
    }

    #[test]
    fn invalid_bins() {
        assert_eq!(
            Detection::calibration(3, 0).unwrap_err(),
            Error::InvalidTimeBin(3)
        );
    }
}
