//! Single-mode squeezing comparison: pair probability `2 tanh²t / cosh⁴t`
//! against its small-parameter form `2t²`.
//!
//! `cargo run --example note_in_proof`

use fourphoton::rates::note_in_proof_check;

fn main() -> fourphoton::Result<()> {
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>10}",
        "t", "p_pair", "V", "1-2t^2", "deviation"
    );
    for k in 0..=10 {
        let t = 0.1 * k as f64;
        let c = note_in_proof_check(t)?;
        println!(
            "{t:>5.2} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            c.p_pair, c.v_predicted, c.v_small_parameter, c.deviation
        );
    }
    Ok(())
}
