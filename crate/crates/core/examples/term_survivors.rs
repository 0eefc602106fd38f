//! Stationary-phase term selection: which terms of each rate integral
//! survive at the intermediate time bin and in the calibration histogram.
//!
//! `cargo run --example term_survivors`

use fourphoton::terms::{
    reconstruct_rate, survivor_report, RateKind, SetupKind, FRANSON_EXPANSION_FACTOR,
};
use fourphoton::JIntegrals;

fn main() -> fourphoton::Result<()> {
    for kind in RateKind::ALL {
        print!(
            "{}",
            survivor_report(kind, SetupKind::Franson, 1, 1)?.to_table()
        );
        println!();
    }
    for (kind, ta, tb) in [
        (RateKind::R2, 0, 0),
        (RateKind::R2, 1, 0),
        (RateKind::R43, 1, 0),
    ] {
        let r = survivor_report(kind, SetupKind::Calibration, ta, tb)?;
        println!(
            "calibration ({ta},{tb}) {}: {} / {} survive {:?}",
            kind.name(),
            r.survivors.len(),
            r.total_terms,
            r.labels()
        );
    }

    let j = JIntegrals::from_values(2.0, 1.2, 1.5, 1.0, 1.6);
    let (i, phase) = (0.05, 0.9);
    let sum: f64 = RateKind::ALL
        .iter()
        .map(|&k| {
            reconstruct_rate(
                &survivor_report(k, SetupKind::Franson, 1, 1).unwrap(),
                &j,
                i,
                phase,
            )
            .unwrap()
        })
        .sum();
    let closed = fourphoton::rates::franson_rates(i, &j, phase, 0.0)?;
    println!(
        "survivors summed: {:.12e}, closed form: {:.12e}",
        sum / FRANSON_EXPANSION_FACTOR,
        closed.total
    );
    Ok(())
}
