//! Monte Carlo run of a star network loaded from a config file, with the
//! comparison against the closed forms.
//!
//! ```text
//! cargo run --release --example monte_carlo_star -- [config] [trials]
//! ```

use qtransduce::montecarlo::{distribute_ghz, empirical_vs_analytic, parse_config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/star3_ies.conf").into());
    let trials: u64 = args.next().map(|t| t.parse()).transpose()?.unwrap_or(100_000);

    let cfg = parse_config(&std::fs::read_to_string(&path)?)?;
    let cmp = empirical_vs_analytic(&cfg, trials)?;
    print!("{}", cmp.to_text());

    for seed in 0..5 {
        match distribute_ghz(&cfg, seed) {
            Ok(f) => println!("seed {seed}: GHZ delivered, fidelity {f:.12}"),
            Err(e) => println!("seed {seed}: {e}"),
        }
    }
    Ok(())
}
