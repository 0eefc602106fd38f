//! The five overlap integrals for a narrow pump with and without filters.
//!
//! `cargo run --example spectral_integrals`

use fourphoton::quadrature::{self, coherence_ratio};
use fourphoton::{FilterSpec, QuadratureConfig, SpectralModel};

fn main() -> fourphoton::Result<()> {
    let model = SpectralModel::gaussian(0.1, 1.0, 1.0)?;
    let cfg = QuadratureConfig::with_nodes(512);
    let cases = [
        ("no filters", FilterSpec::none(), FilterSpec::none()),
        (
            "gaussian 0.8 / 1.2",
            FilterSpec::gaussian(0.8, 0.0)?,
            FilterSpec::gaussian(1.2, 0.0)?,
        ),
        (
            "rectangular 0.5 / 1.0",
            FilterSpec::rectangular(0.5, 0.0)?,
            FilterSpec::rectangular(1.0, 0.0)?,
        ),
    ];
    println!(
        "{:<24} {:>10} {:>10} {:>10} {:>10} {:>10} {:>9}",
        "filters", "J", "J_A", "J_B", "J_AB", "J_4", "J4/2JJab"
    );
    for (name, fa, fb) in cases {
        let j = quadrature::compute_all(&model, &fa, &fb, &cfg)?;
        println!(
            "{name:<24} {:>10.4e} {:>10.4e} {:>10.4e} {:>10.4e} {:>10.4e} {:>9.4}",
            j.j,
            j.j_a,
            j.j_b,
            j.j_ab,
            j.j4,
            coherence_ratio(&j)?
        );
    }
    Ok(())
}
