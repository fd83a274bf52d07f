//! Average and effective covert rate as the relay's efficiency grows.
//!
//! Run with `cargo run --example covert_rate`.

use covert_relay::covert_rate::effective_covert_rate;
use covert_relay::{SchemeConfig, SystemParams};

fn main() -> Result<(), covert_relay::Error> {
    let params = SystemParams::default();
    let schemes = [SchemeConfig::ts(0.3)?, SchemeConfig::ps(0.9)?];

    println!("eta1    {:>12} {:>12}", "psi ts", "psi ps");
    for i in 0..=8 {
        let eta1 = params.eta0 + (params.eta_u - params.eta0) * i as f64 / 8.0;
        let mut line = format!("{eta1:.3}");
        for s in &schemes {
            let r = effective_covert_rate(&params, s, eta1)?;
            line.push_str(&format!(" {:>12.6}", r.psi));
            if !r.is_converged() {
                line.push('*');
            }
        }
        println!("{line}");
    }
    Ok(())
}
