//! Calibration histogram without interferometers: central peak, side peak
//! and their ratio, which is the pair probability per pulse.
//!
//! `cargo run --example calibration`

use fourphoton::quadrature;
use fourphoton::rates::{calibration_rates, center_peak_with_four_photon};
use fourphoton::{FilterSpec, QuadratureConfig, SpectralModel};

fn main() -> fourphoton::Result<()> {
    let model = SpectralModel::gaussian(0.1, 1.0, 1.0)?;
    let fa = FilterSpec::rectangular(0.6, 0.0)?;
    let fb = FilterSpec::none();
    let j = quadrature::compute_all(&model, &fa, &fb, &QuadratureConfig::with_nodes(512))?;
    println!(
        "{:>10} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "I [ps^2]", "R(0,0)", "R(0,0)+R4", "R(tau,0)", "rho", "rho/(I J_B)"
    );
    for i in [0.01, 0.05, 0.1, 0.5, 1.0] {
        let c = calibration_rates(i, &j)?;
        println!(
            "{i:>10.3} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>10.5}",
            c.r_center,
            center_peak_with_four_photon(i, &j),
            c.r_side,
            c.rho,
            c.rho / (i * j.j_b)
        );
    }
    Ok(())
}
