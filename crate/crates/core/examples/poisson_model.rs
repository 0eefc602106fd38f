//! Two independent pairs with Poisson statistics: fringe, visibility and
//! the effect of a filter on the second photon.
//!
//! `cargo run --example poisson_model`

use std::f64::consts::PI;

use fourphoton::rates::{
    fringe_visibility, poisson_rates, poisson_visibility, poisson_visibility_first_order,
    PoissonModelParams,
};

fn main() -> fourphoton::Result<()> {
    println!(
        "{:>6} {:>8} {:>9} {:>9} {:>9}",
        "p2c", "ratio_b", "V", "1-p2c*r", "fringe V"
    );
    for p2c in [0.01, 0.05, 0.1] {
        for ratio_b in [1.0, 0.5, 0.2] {
            let p = PoissonModelParams::new(p2c, 1.0, ratio_b)?;
            let totals: Vec<f64> = (0..360)
                .map(|k| {
                    let (r2, r4) = poisson_rates(&p, 2.0 * PI * k as f64 / 360.0, 0.0);
                    r2 + r4
                })
                .collect();
            println!(
                "{p2c:>6} {ratio_b:>8} {:>9.5} {:>9.5} {:>9.5}",
                poisson_visibility(&p),
                poisson_visibility_first_order(&p),
                fringe_visibility(&totals)
            );
        }
    }
    Ok(())
}
