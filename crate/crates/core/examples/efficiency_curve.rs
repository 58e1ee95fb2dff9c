//! Conversion efficiency against cooperativity, from the physical rates and
//! from the reduced `(C, zeta_o, zeta_m)` form.
//!
//! ```text
//! cargo run --example efficiency_curve
//! ```

use qtransduce::transducer::{
    cooperativity_for_efficiency, efficiency, efficiency_physical, reduce, Branch, PhysicalParams, ReducedParams,
};

fn main() -> qtransduce::Result<()> {
    println!("{:>10} {:>12} {:>12} {:>12}", "C", "eta(1,1)", "eta(.9,.8)", "physical");
    for k in -10..=4 {
        let c = 10f64.powf(k as f64 / 4.0);
        let ideal = efficiency(&ReducedParams::ideal(c)?);
        let lossy = efficiency(&ReducedParams::new(c, 0.9, 0.8)?);
        // gamma_o = 2, gamma_m = 3 with the same extraction ratios, pump set for C
        let phys = PhysicalParams::new(1.8, 2.4, 2.0, 3.0, 1.0, c * 1.5)?;
        assert!((reduce(&phys)?.cooperativity - c).abs() < 1e-12 * c.max(1.0));
        println!("{c:>10.4e} {ideal:>12.8} {lossy:>12.8} {:>12.8}", efficiency_physical(&phys)?);
    }

    println!();
    for target in [0.1, 0.5, 0.9] {
        let lo = cooperativity_for_efficiency(target, 1.0, 1.0, Branch::Lower)?;
        let hi = cooperativity_for_efficiency(target, 1.0, 1.0, Branch::Upper)?;
        println!("eta = {target}: C = {lo:.12} or {hi:.12}");
    }
    Ok(())
}
