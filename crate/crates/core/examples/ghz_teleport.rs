//! Teleports a GHZ state from the orchestrator to its clients, once per
//! Bell-measurement outcome pattern.
//!
//! ```text
//! cargo run --example ghz_teleport
//! ```

use qtransduce::quantumsim::{make_ghz, teleport, teleport_with_outcomes, BellOutcome, EprResource};

fn main() -> qtransduce::Result<()> {
    let n = 3;
    let ghz = make_ghz(n)?;
    let resources = vec![EprResource::Ideal; n];
    let mut worst: f64 = 0.0;
    for pattern in 0..4usize.pow(n as u32) {
        let outcomes: Vec<BellOutcome> = (0..n).map(|i| BellOutcome::all()[(pattern >> (2 * i)) & 3]).collect();
        let out = teleport_with_outcomes(&ghz, &resources, &outcomes)?;
        worst = worst.max(1.0 - out.fidelity(&ghz)?);
    }
    println!("GHZ({n}) over {} outcome patterns: worst infidelity {worst:.2e}", 4usize.pow(n as u32));

    let sampled = teleport(&ghz, &resources, 7)?;
    println!("sampled run: fidelity {:.12}", sampled.fidelity(&ghz)?);

    let mut lost = resources.clone();
    lost[1] = EprResource::Erased;
    println!("with an erased pair: {}", teleport(&ghz, &lost, 7).unwrap_err());
    Ok(())
}
