//! Filters specified in nanometres at telecom wavelengths, converted to
//! angular-frequency widths.
//!
//! `cargo run --example wavelength_filters`

use fourphoton::cli::config::{nm_to_rad_per_ps, C_BAND_NM, O_BAND_NM};

fn main() {
    println!("{:>8} {:>10} {:>14}", "band", "FWHM [nm]", "FWHM [rad/ps]");
    for (band, lambda) in [("O", O_BAND_NM), ("C", C_BAND_NM)] {
        for nm in [0.8, 5.0, 40.0] {
            println!("{band:>8} {nm:>10} {:>14.4}", nm_to_rad_per_ps(nm, lambda));
        }
    }
}
