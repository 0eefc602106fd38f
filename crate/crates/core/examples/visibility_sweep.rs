//! Visibility against `2ρ` for two filter configurations. Pumping harder
//! with narrow filters and pumping weakly without filters land on the same
//! first-order line when they give the same `ρ`.
//!
//! `cargo run --example visibility_sweep`

use fourphoton::quadrature;
use fourphoton::rates::{least_squares_slope, visibility};
use fourphoton::{FilterSpec, QuadratureConfig, SpectralModel};

fn main() -> fourphoton::Result<()> {
    let model = SpectralModel::gaussian(0.1, 1.0, 1.0)?;
    let cfg = QuadratureConfig::with_nodes(512);
    let sets = [
        (
            "narrow filters",
            FilterSpec::gaussian(0.5, 0.0)?,
            FilterSpec::gaussian(0.8, 0.0)?,
        ),
        ("no filters", FilterSpec::none(), FilterSpec::none()),
    ];
    for (name, fa, fb) in sets {
        let j = quadrature::compute_all(&model, &fa, &fb, &cfg)?;
        let rho_per_i = j.j_a * j.j_b / j.j_ab;
        println!(
            "{name}: rho / I = {rho_per_i:.4e} ps^-2, J4/(2 J J_AB) = {:.3}",
            j.j4 / (2.0 * j.j * j.j_ab)
        );
        println!(
            "  {:>10} {:>8} {:>9} {:>9}",
            "I [ps^2]", "2rho", "V_exact", "1-2rho"
        );
        let mut exact = Vec::new();
        for k in 1..=10 {
            let two_rho = 0.02 * k as f64;
            let i = two_rho / (2.0 * rho_per_i);
            let v = visibility(i, &j)?;
            exact.push((two_rho, v.v_exact));
            println!(
                "  {i:>10.4e} {two_rho:>8.3} {:>9.5} {:>9.5}",
                v.v_exact, v.v_first_order
            );
        }
        println!(
            "  slope of V_exact against 2rho: {:.4}",
            least_squares_slope(&exact)
        );
    }
    Ok(())
}
