//! Cooperativities needed by each strategy, and the capacity bounds around
//! them.
//!
//! ```text
//! cargo run --example thresholds
//! ```

use qtransduce::channel::FiberLink;
use qtransduce::cli::dmd_state_threshold;
use qtransduce::strategies::{capacity_bound, ebit_prob, LinkConfig, StrategyKind};
use qtransduce::transducer::{DIRECT_LINK_COOPERATIVITY, EPR_COOPERATIVITY};

fn main() -> qtransduce::Result<()> {
    println!("balanced transducer     C_th = {EPR_COOPERATIVITY:.15}");
    println!("direct distribution     C    = {DIRECT_LINK_COOPERATIVITY:.15}");
    for n in 1..=6 {
        println!("{n} clients, p_state = 1/2 at C = {:.12}", dmd_state_threshold(n, 1.0, 1.0)?);
    }

    println!("\n{:>12} {:>14} {:>14}", "C", "DMD bound", "TMD bound");
    for c in [0.25, DIRECT_LINK_COOPERATIVITY, 0.3, 0.5, 1.0] {
        let link = LinkConfig::ideal(c, FiberLink::local())?;
        println!(
            "{c:>12.6} {:>14.8} {:>14.8}",
            capacity_bound(StrategyKind::Dmd, &link),
            capacity_bound(StrategyKind::VanillaTmd, &link)
        );
        assert_eq!(ebit_prob(StrategyKind::Dmd, &link), ebit_prob(StrategyKind::VanillaTmd, &link));
    }
    Ok(())
}
