//! Per-link ebit probability of the four strategies over cooperativity and
//! link length.
//!
//! ```text
//! cargo run --example strategy_comparison
//! ```

use qtransduce::channel::FiberLink;
use qtransduce::strategies::{ebit_prob, LinkConfig, StrategyKind};

fn main() -> qtransduce::Result<()> {
    for l in [0.0, 22.0, 50.0] {
        println!("l = {l} km");
        print!("{:>10}", "C");
        for kind in StrategyKind::ALL {
            print!(" {:>12}", kind.name());
        }
        println!();
        for c in [1e-3, 1e-2, 0.1, 0.171_572_875_253_81, 0.5, 1.0, 3.0] {
            let link = LinkConfig::ideal(c, FiberLink::telecom(l)?)?;
            print!("{c:>10.4}");
            for kind in StrategyKind::ALL {
                print!(" {:>12.6e}", ebit_prob(kind, &link));
            }
            println!();
        }
        println!();
    }
    Ok(())
}
