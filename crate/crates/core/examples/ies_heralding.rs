//! Exact mid-point heralding: every detection pattern, the state it leaves
//! behind, and what each detector type accepts.
//!
//! ```text
//! cargo run --example ies_heralding
//! ```

use qtransduce::quantumsim::ies_swap_oracle;
use qtransduce::strategies::{DetectorKind, DetectorModel};

fn main() -> qtransduce::Result<()> {
    let eta = 0.5;
    for det in [
        DetectorModel::photon_counter(),
        DetectorModel::ideal_spd(),
        DetectorModel::new(DetectorKind::SinglePhotonDetector, 0.25)?,
    ] {
        let out = ies_swap_oracle(eta, eta, &det, 1)?;
        println!("{} at eta_d = {}", det.kind, det.efficiency);
        for b in &out.branches {
            println!(
                "  pattern {:?} {:?}: p = {:.4}, accepted w.p. {:.4}, microwave entropy {:.4} bit",
                b.pattern,
                b.class,
                b.probability,
                b.accept_probability,
                b.microwave_state.entanglement_entropy()
            );
        }
        println!(
            "  heralds {:.4}, genuine {:.4}, false {:.4}\n",
            out.accept_probability,
            out.genuine_accept_probability,
            out.false_herald_probability()
        );
    }
    Ok(())
}
