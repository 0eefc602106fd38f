//! Multimode model of time-bin entangled photon pairs from pulsed
//! down-conversion: spectral overlap integrals, calibration and Franson
//! coincidence rates including the four-photon background, the resulting
//! fringe visibility, an exact term-by-term expansion of the rate
//! integrals, and a brute-force grid oracle for all of it.
//!
//! ```
//! use fourphoton::{quadrature, rates, FilterSpec, QuadratureConfig, SpectralModel};
//!
//! let model = SpectralModel::gaussian(0.1, 1.0, 1.0).unwrap();
//! let none = FilterSpec::none();
//! let j = quadrature::compute_all(&model, &none, &none, &QuadratureConfig::with_nodes(512))
//!     .unwrap();
//! let v = rates::visibility(0.01, &j).unwrap();
//! assert!(v.v_exact < 1.0 && v.v_first_order < 1.0);
//! ```

pub mod cli;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod rates;
pub mod spectral;
pub mod terms;

mod linalg;

pub use error::{Error, Result};
pub use quadrature::{JIntegrals, QuadratureConfig};
pub use spectral::{FilterSpec, SetupConfig, SpectralModel};
