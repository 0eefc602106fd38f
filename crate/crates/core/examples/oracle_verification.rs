//! Brute-force check of the closed forms: the raw rate integrands summed on
//! a frequency grid with every oscillating term kept, for growing delays.
//!
//! `cargo run --release --example oracle_verification`

use fourphoton::oracle::{
    convergence_study, oracle_rates, oracle_visibility, Detection, DiscreteModel, OracleConfig,
};
use fourphoton::rates::visibility;
use fourphoton::{FilterSpec, SpectralModel};

fn main() -> fourphoton::Result<()> {
    let model = SpectralModel::gaussian(1.0, 2.0, 2.0)?;
    let fa = FilterSpec::gaussian(3.0, 0.0)?;
    let fb = FilterSpec::gaussian(4.0, 0.0)?;
    let delta_t = 8.0;

    // Literal six-index sums on a small grid against their matrix contraction.
    let small = DiscreteModel::uniform(&model, &fa, &fb, 12, 9.0)?;
    let cfg = OracleConfig::new(50.0, delta_t, 0.01);
    let det = Detection::franson(0.3, 0.4)?;
    let direct = oracle_rates(&small, &cfg, &det)?;
    let contracted = oracle_rates(&small, &cfg.contracted(), &det)?;
    println!(
        "12 nodes/axis: direct {:.15e}, contracted {:.15e}",
        direct.total(),
        contracted.total()
    );

    let j = DiscreteModel::resolving(&model, &fa, &fb, 50.0, delta_t)?.grid_integrals_contracted();
    let study = convergence_study(
        &model,
        &fa,
        &fb,
        &OracleConfig::new(50.0, delta_t, 1e-3 / j.j),
        &[0.04, 0.2, 0.4, 1.0],
    )?;
    println!(
        "{:>8} {:>8} {:>6} {:>6} {:>11}",
        "tau", "tau*dp", "nodes", "valid", "deviation"
    );
    for r in &study {
        println!(
            "{:>8} {:>8} {:>6} {:>6} {:>11.3e}",
            r.tau, r.tau_delta_p, r.nodes, r.valid, r.deviation
        );
    }

    let dm = DiscreteModel::resolving(&model, &fa, &fb, 50.0, delta_t)?;
    for ij in [0.01, 0.05] {
        let i = ij / j.j;
        let v = oracle_visibility(&dm, &OracleConfig::new(50.0, delta_t, i).contracted(), 8)?;
        let closed = visibility(i, &j)?;
        println!(
            "I J = {ij}: oracle V {v:.6}, exact {:.6}, 1 - 2 rho {:.6}",
            closed.v_exact, closed.v_first_order
        );
    }
    Ok(())
}
