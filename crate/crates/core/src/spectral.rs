//! Joint spectral amplitude, pump envelope, and filter profiles.
//!
//! Frequencies are angular detunings (rad/ps) from the central signal and
//! idler frequencies; times are in ps. Every width below is the standard
//! deviation of a Gaussian *amplitude*, so `exp(-ω²/(2Δ²))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Threshold used for the "much greater than one" validity flags.
pub const WELL_SEPARATED: f64 = 10.0;

/// Anything that can be sampled as a two-photon joint amplitude `g(ω_a, ω_b)`.
///
/// Built-in families are real and nonnegative, but the integrators only rely
/// on this trait, so complex user models work as well.
pub trait JointAmplitude: Sync {
    fn amplitude(&self, omega_a: f64, omega_b: f64) -> Complex64;

    /// Largest marginal width, used to size integration boxes.
    fn max_marginal_width(&self) -> f64;

    /// `true` when `g(x, y) = u(x) v(y)` exactly.
    fn is_separable(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelShape {
    /// Gaussian phase matching times the pump envelope at `ω_a + ω_b`.
    Gaussian,
    /// Broad-pump limit: the pump factor is dropped and `g = u(ω_a) v(ω_b)`.
    SeparableGaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralModel {
    pub delta_p: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub shape: ModelShape,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

fn gaussian(x: f64, sigma: f64) -> f64 {
    (-x * x / (2.0 * sigma * sigma)).exp()
}

impl SpectralModel {
    pub fn new(delta_p: f64, delta_a: f64, delta_b: f64, shape: ModelShape) -> Result<Self> {
        let m = SpectralModel {
            delta_p,
            delta_a,
            delta_b,
            shape,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn gaussian(delta_p: f64, delta_a: f64, delta_b: f64) -> Result<Self> {
        Self::new(delta_p, delta_a, delta_b, ModelShape::Gaussian)
    }

    pub fn separable(delta_a: f64, delta_b: f64) -> Result<Self> {
        // delta_p is carried but unused by the separable family.
        Self::new(1.0, delta_a, delta_b, ModelShape::SeparableGaussian)
    }

    pub fn validate(&self) -> Result<()> {
        positive("delta_p", self.delta_p)?;
        positive("delta_a", self.delta_a)?;
        positive("delta_b", self.delta_b)
    }

    /// Pump envelope `p̃(ω)`, normalized to 1 at zero detuning.
    pub fn eval_pump(&self, omega: f64) -> f64 {
        gaussian(omega, self.delta_p)
    }

    pub fn eval_phase_matching(&self, omega_a: f64, omega_b: f64) -> f64 {
        gaussian(omega_a, self.delta_a) * gaussian(omega_b, self.delta_b)
    }

    /// Joint amplitude `g(ω_a, ω_b) = Φ(ω_a, ω_b) p̃(ω_a + ω_b)`.
    pub fn eval_g(&self, omega_a: f64, omega_b: f64) -> f64 {
        let phi = self.eval_phase_matching(omega_a, omega_b);
        match self.shape {
            ModelShape::Gaussian => phi * self.eval_pump(omega_a + omega_b),
            ModelShape::SeparableGaussian => phi,
        }
    }
}

impl JointAmplitude for SpectralModel {
    fn amplitude(&self, omega_a: f64, omega_b: f64) -> Complex64 {
        Complex64::new(self.eval_g(omega_a, omega_b), 0.0)
    }

    fn max_marginal_width(&self) -> f64 {
        self.delta_a.max(self.delta_b)
    }

    fn is_separable(&self) -> bool {
        self.shape == ModelShape::SeparableGaussian
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterShape {
    None,
    Rectangular,
    Gaussian,
}

/// Spectral filter in one detection arm. `width` is the full width at half
/// maximum of the intensity transmission (the full pass band for
/// rectangular filters).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSpec {
    pub shape: FilterShape,
    #[serde(default)]
    pub width: f64,
    #[serde(default)]
    pub center_offset: f64,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self::none()
    }
}

impl FilterSpec {
    pub fn none() -> Self {
        FilterSpec {
            shape: FilterShape::None,
            width: 0.0,
            center_offset: 0.0,
        }
    }

    pub fn rectangular(width: f64, center_offset: f64) -> Result<Self> {
        let f = FilterSpec {
            shape: FilterShape::Rectangular,
            width,
            center_offset,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn gaussian(fwhm: f64, center_offset: f64) -> Result<Self> {
        let f = FilterSpec {
            shape: FilterShape::Gaussian,
            width: fwhm,
            center_offset,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center_offset.is_finite() {
            return Err(Error::invalid("center_offset", "must be finite"));
        }
        match self.shape {
            FilterShape::None => Ok(()),
            _ => positive("width", self.width),
        }
    }

    /// Intensity transmission `F(ω) ∈ [0, 1]`.
    pub fn eval_filter(&self, omega: f64) -> f64 {
        let x = omega - self.center_offset;
        match self.shape {
            FilterShape::None => 1.0,
            FilterShape::Rectangular => {
                if x.abs() <= 0.5 * self.width {
                    1.0
                } else {
                    0.0
                }
            }
            FilterShape::Gaussian => {
                let w = self.width;
                (-4.0 * std::f64::consts::LN_2 * x * x / (w * w)).exp()
            }
        }
    }

    /// Amplitude transmission `f(ω) = √F(ω)`.
    pub fn eval_amplitude(&self, omega: f64) -> f64 {
        self.eval_filter(omega).sqrt()
    }

    /// Points where the transmission is discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.shape {
            FilterShape::Rectangular => vec![
                self.center_offset - 0.5 * self.width,
                self.center_offset + 0.5 * self.width,
            ],
            _ => Vec::new(),
        }
    }

    /// Same filter with a different width; `None` filters stay `None`.
    pub fn with_width(&self, width: f64) -> Result<Self> {
        let f = FilterSpec { width, ..*self };
        f.validate()?;
        Ok(f)
    }
}

fn default_eta() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupConfig {
    pub intensity: f64,
    pub tau: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    pub delta_t: f64,
    #[serde(default = "default_eta")]
    pub eta_product: f64,
}

/// Whether the closed-form rates can be trusted for a given setup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityFlags {
    /// `τ·Δ_p`; time bins are well separated when this is large.
    pub tau_delta_p: f64,
    /// `ΔT·Δ_a`; the detector integrates the whole photon when this is large.
    pub delta_t_delta_a: f64,
    pub time_bins_separated: bool,
    pub detector_slow: bool,
}

impl ValidityFlags {
    pub fn all_valid(&self) -> bool {
        self.time_bins_separated && self.detector_slow
    }
}

impl SetupConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.intensity.is_finite() && self.intensity >= 0.0) {
            return Err(Error::invalid("intensity", "must be finite and >= 0"));
        }
        positive("tau", self.tau)?;
        positive("delta_t", self.delta_t)?;
        if !(self.eta_product.is_finite() && self.eta_product >= 0.0) {
            return Err(Error::invalid("eta_product", "must be finite and >= 0"));
        }
        if !(self.alpha.is_finite() && self.beta.is_finite()) {
            return Err(Error::invalid("alpha/beta", "must be finite"));
        }
        Ok(())
    }

    pub fn phase_sum(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn validity(&self, model: &SpectralModel) -> ValidityFlags {
        let tau_delta_p = self.tau * model.delta_p;
        let delta_t_delta_a = self.delta_t * model.delta_a.min(model.delta_b);
        ValidityFlags {
            tau_delta_p,
            delta_t_delta_a,
            time_bins_separated: tau_delta_p >= WELL_SEPARATED,
            detector_slow: delta_t_delta_a >= WELL_SEPARATED,
        }
    }
}
