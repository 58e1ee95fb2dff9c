//! Two photons on a balanced beam splitter never leave through different
//! ports. Also shows the transducer output state as a beam splitter.
//!
//! ```text
//! cargo run --example hong_ou_mandel
//! ```

use num_complex::Complex64;
use qtransduce::quantumsim::{beam_splitter, transducer_output_state, FockTwoMode, ModeLabel};

fn main() -> qtransduce::Result<()> {
    let labels = (ModeLabel::Optical, ModeLabel::Optical);
    let input = FockTwoMode::from_terms(2, labels, &[((1, 1), Complex64::new(1.0, 0.0))])?;
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let out = beam_splitter(&input, t)?;
        println!(
            "T = {t:<5} P(1,1) = {:.6}  P(2,0) = {:.6}  P(0,2) = {:.6}",
            out.probability(1, 1),
            out.probability(2, 0),
            out.probability(0, 2)
        );
    }

    println!();
    for eta in [0.1, 0.5, 0.9] {
        let s = transducer_output_state(eta)?;
        println!(
            "eta = {eta}: |0_M 1_O> weight {:.3}, |1_M 0_O> weight {:.3}, entanglement {:.6} bit",
            s.probability(0, 1),
            s.probability(1, 0),
            s.entanglement_entropy()
        );
    }
    Ok(())
}
