//! Warden's detection error against its threshold, and the minimum over thresholds.
//!
//! Run with `cargo run --example detection_error`.

use covert_relay::detection::{detection_error, min_detection_error, optimal_threshold};
use covert_relay::{SchemeConfig, SystemParams};

fn main() -> Result<(), covert_relay::Error> {
    let params = SystemParams::default();
    let eta1 = 0.7;

    for scheme in [SchemeConfig::ts(0.5)?, SchemeConfig::ps(0.5)?] {
        let tau_star = optimal_threshold(&params, &scheme, eta1)?;
        println!("{}: tau* = {tau_star:.4e} W", scheme.variant());
        for mult in [0.5, 0.8, 1.0, 1.25, 2.0] {
            let tau = params.sigma2_a + mult * (tau_star - params.sigma2_a);
            let p = detection_error(&params, &scheme, eta1, tau);
            println!(
                "  tau = {:.4e}  alpha = {:.4}  beta = {:.4}  xi = {:.6}",
                p.tau, p.alpha, p.beta, p.xi
            );
        }
    }

    // the minimum depends only on eta0 / eta1, not on the scheme or the fraction
    println!("xi* = {:.6}", min_detection_error(params.eta0 / eta1)?);
    Ok(())
}
