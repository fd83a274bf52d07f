//! How much more efficient the relay may be before the warden notices, and the rate
//! that buys, for a few covertness levels.
//!
//! Run with `cargo run --example covert_budget`.

use covert_relay::covert_rate::{max_effective_covert_rate, optimize_harvest_fraction};
use covert_relay::{Scheme, SchemeConfig, SystemParams};

fn main() -> Result<(), covert_relay::Error> {
    for epsilon in [0.02, 0.05, 0.1, 0.2, 0.3] {
        let params = SystemParams {
            epsilon,
            ..SystemParams::default()
        };
        print!("epsilon = {epsilon:.2}:");
        for variant in Scheme::ALL {
            let fraction = optimize_harvest_fraction(&params, variant)?;
            let scheme = SchemeConfig::new(variant, fraction)?;
            let best = max_effective_covert_rate(&params, &scheme)?;
            print!(
                "  {variant}: eta1* = {:.4} ({}) psi* = {:.5}",
                best.eta1_star, best.binding, best.psi_star
            );
        }
        println!();
    }
    Ok(())
}
