//! Franson fringe at the intermediate time bin and its visibility, with the
//! four-photon floor at the dark fringe.
//!
//! `cargo run --example franson_visibility`

use std::f64::consts::PI;

use fourphoton::quadrature;
use fourphoton::rates::{franson_rates, visibility};
use fourphoton::{FilterSpec, QuadratureConfig, SpectralModel};

fn main() -> fourphoton::Result<()> {
    let model = SpectralModel::gaussian(0.1, 1.0, 1.0)?;
    let fa = FilterSpec::gaussian(0.8, 0.0)?;
    let fb = FilterSpec::gaussian(1.2, 0.0)?;
    let j = quadrature::compute_all(&model, &fa, &fb, &QuadratureConfig::with_nodes(512))?;
    let i = 0.2;
    println!("{:>8} {:>12} {:>12} {:>12}", "phase", "R2", "R4", "total");
    for k in 0..=8 {
        let phase = PI * k as f64 / 4.0;
        let r = franson_rates(i, &j, phase, 0.0)?;
        println!(
            "{phase:>8.4} {:>12.5e} {:>12.5e} {:>12.5e}",
            r.r2, r.r4, r.total
        );
    }
    let dark = franson_rates(i, &j, PI, 0.0)?;
    println!(
        "dark-fringe floor 2 I^2 J_A J_B = {:.5e}",
        2.0 * i * i * j.j_a * j.j_b
    );
    println!("dark-fringe total                = {:.5e}", dark.total);
    let v = visibility(i, &j)?;
    println!(
        "V exact {:.5}, 1 - 2 rho {:.5}, rho {:.4e}",
        v.v_exact, v.v_first_order, v.rho
    );
    Ok(())
}
