//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{Evaluation, DEFAULT_MAX_GRID, DEFAULT_MAX_GRID_4D};
use crate::quadrature::QuadratureConfig;
use crate::spectral::{FilterShape, FilterSpec, SetupConfig, SpectralModel};

/// Speed of light in nm/ps.
pub const SPEED_OF_LIGHT_NM_PER_PS: f64 = 299_792.458;
/// Telecom O-band center wavelength (nm).
pub const O_BAND_NM: f64 = 1310.0;
/// Telecom C-band center wavelength (nm).
pub const C_BAND_NM: f64 = 1550.0;

/// Angular-frequency width (rad/ps) of a wavelength width `width_nm`
/// around `wavelength_nm`: `Δω = 2π c Δλ / λ²`.
pub fn nm_to_rad_per_ps(width_nm: f64, wavelength_nm: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT_NM_PER_PS * width_nm
        / (wavelength_nm * wavelength_nm)
}

/// A filter given either in rad/ps (`width`) or in nm (`width_nm` with
/// `wavelength_nm`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterInput {
    pub shape: FilterShape,
    #[serde(default)]
    pub width: Option<f64>,
    #[serde(default)]
    pub width_nm: Option<f64>,
    #[serde(default)]
    pub wavelength_nm: Option<f64>,
    #[serde(default)]
    pub center_offset: f64,
}

impl FilterInput {
    pub fn resolve(&self) -> Result<FilterSpec> {
        let width = match (self.width, self.width_nm) {
            (Some(_), Some(_)) => {
                return Err(Error::invalid(
                    "filters",
                    "give either `width` or `width_nm`, not both",
                ))
            }
            (Some(w), None) => w,
            (None, Some(nm)) => {
                let lambda = self
                    .wavelength_nm
                    .ok_or_else(|| Error::invalid("wavelength_nm", "required with `width_nm`"))?;
                if !(lambda.is_finite() && lambda > 0.0) {
                    return Err(Error::invalid("wavelength_nm", "must be finite and > 0"));
                }
                nm_to_rad_per_ps(nm, lambda)
            }
            (None, None) => 0.0,
        };
        let f = FilterSpec {
            shape: self.shape,
            width,
            center_offset: self.center_offset,
        };
        f.validate()?;
        Ok(f)
    }
}

impl From<FilterSpec> for FilterInput {
    fn from(f: FilterSpec) -> Self {
        FilterInput {
            shape: f.shape,
            width: (f.shape != FilterShape::None).then_some(f.width),
            width_nm: None,
            wavelength_nm: None,
            center_offset: f.center_offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterPair {
    #[serde(default)]
    pub label: Option<String>,
    pub a: FilterInput,
    pub b: FilterInput,
}

impl FilterPair {
    pub fn resolve(&self) -> Result<(FilterSpec, FilterSpec)> {
        Ok((self.a.resolve()?, self.b.resolve()?))
    }
}

/// Parameters a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Intensity,
    Tau,
    AlphaPlusBeta,
    FilterAWidth,
    FilterBWidth,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Intensity => "intensity",
            SweepParameter::Tau => "tau",
            SweepParameter::AlphaPlusBeta => "alpha_plus_beta",
            SweepParameter::FilterAWidth => "filter_a_width",
            SweepParameter::FilterBWidth => "filter_b_width",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            SweepParameter::Intensity => "ps^2",
            SweepParameter::Tau => "ps",
            SweepParameter::AlphaPlusBeta => "rad",
            SweepParameter::FilterAWidth | SweepParameter::FilterBWidth => "rad/ps",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub directory: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: None,
            formats: default_formats(),
        }
    }
}

fn default_oracle_nodes() -> usize {
    DEFAULT_MAX_GRID
}
fn default_identity_nodes() -> usize {
    DEFAULT_MAX_GRID_4D
}
fn default_multipliers() -> Vec<f64> {
    vec![0.2, 0.4, 1.0]
}
fn default_oracle_intensity() -> f64 {
    1e-3
}

/// Settings of the `verify` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Nodes per axis of the literal six-index sums.
    #[serde(default = "default_oracle_nodes")]
    pub nodes: usize,
    /// Nodes per axis of the two- and four-index grid-identity checks.
    #[serde(default = "default_identity_nodes")]
    pub identity_nodes: usize,
    #[serde(default = "default_max_grid")]
    pub max_grid: usize,
    #[serde(default = "default_max_grid_4d")]
    pub max_grid_4d: usize,
    /// Delays of the convergence study, as multiples of `setup.tau`.
    #[serde(default = "default_multipliers")]
    pub tau_multipliers: Vec<f64>,
    /// `I·J` used by the oracle rate checks.
    #[serde(default = "default_oracle_intensity")]
    pub intensity_times_j: f64,
    #[serde(default = "default_evaluation")]
    pub evaluation: Evaluation,
}

fn default_max_grid() -> usize {
    DEFAULT_MAX_GRID
}
fn default_max_grid_4d() -> usize {
    DEFAULT_MAX_GRID_4D
}
fn default_evaluation() -> Evaluation {
    Evaluation::Direct
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            nodes: default_oracle_nodes(),
            identity_nodes: default_identity_nodes(),
            max_grid: DEFAULT_MAX_GRID,
            max_grid_4d: DEFAULT_MAX_GRID_4D,
            tau_multipliers: default_multipliers(),
            intensity_times_j: default_oracle_intensity(),
            evaluation: Evaluation::Direct,
        }
    }
}

fn default_filters() -> FilterPair {
    FilterPair {
        label: None,
        a: FilterSpec::none().into(),
        b: FilterSpec::none().into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: SpectralModel,
    #[serde(default = "default_filters")]
    pub filters: FilterPair,
    /// Further filter configurations compared against `filters` by `sweep`.
    #[serde(default)]
    pub compare_filters: Vec<FilterPair>,
    pub setup: SetupConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

/// Configuration problems, reported with the path of the offending field.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: field `{field}`: {message}")]
    Parse {
        path: PathBuf,
        field: String,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl RunConfig {
    pub fn from_json(text: &str, path: &Path) -> std::result::Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            ConfigError::Parse {
                path: path.to_path_buf(),
                field,
                message: e.into_inner().to_string(),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> std::result::Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.filters.resolve()?;
        for f in &self.compare_filters {
            f.resolve()?;
        }
        self.setup.validate()?;
        self.quadrature.validate()?;
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(Error::invalid("sweep.values", "empty sweep list"));
            }
            if s.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("sweep.values", "values must be finite"));
            }
        }
        let v = &self.verify;
        if v.nodes < 3 || v.identity_nodes < 3 {
            return Err(Error::invalid(
                "verify.nodes",
                "need at least 3 nodes per axis",
            ));
        }
        if v.tau_multipliers
            .iter()
            .any(|m| !(m.is_finite() && *m > 0.0))
        {
            return Err(Error::invalid(
                "verify.tau_multipliers",
                "must be finite and > 0",
            ));
        }
        if !(v.intensity_times_j.is_finite() && v.intensity_times_j > 0.0) {
            return Err(Error::invalid(
                "verify.intensity_times_j",
                "must be finite and > 0",
            ));
        }
        Ok(())
    }

    /// Every filter configuration with a label, `filters` first.
    pub fn filter_sets(&self) -> Result<Vec<(String, FilterSpec, FilterSpec)>> {
        let mut out = Vec::new();
        for (k, p) in std::iter::once(&self.filters)
            .chain(&self.compare_filters)
            .enumerate()
        {
            let (a, b) = p.resolve()?;
            let label = p.label.clone().unwrap_or_else(|| format!("set{k}"));
            out.push((sanitize(&label), a, b));
        }
        Ok(out)
    }
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
