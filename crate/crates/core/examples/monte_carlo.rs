//! Closed forms next to their Monte Carlo estimates.
//!
//! Run with `cargo run --release --example monte_carlo`.

use covert_relay::covert_rate::average_covert_rate;
use covert_relay::detection::{detection_error, optimal_threshold};
use covert_relay::montecarlo::{simulate_covert_rate, simulate_detection};
use covert_relay::rng::DEFAULT_SEED;
use covert_relay::{SchemeConfig, SystemParams};

fn main() -> Result<(), covert_relay::Error> {
    let params = SystemParams::default();
    let scheme = SchemeConfig::ts(0.5)?;
    let eta1 = 0.7;
    let blocks = 1_000_000;

    let tau = optimal_threshold(&params, &scheme, eta1)?;
    let exact = detection_error(&params, &scheme, eta1, tau);
    let sim = simulate_detection(&params, &scheme, eta1, tau, blocks, DEFAULT_SEED);
    let d = sim.detection.expect("detection estimate");
    println!("alpha {:.5} vs {:.5} +- {:.5}", exact.alpha, d.alpha.value, d.alpha.ci_halfwidth);
    println!("beta  {:.5} vs {:.5} +- {:.5}", exact.beta, d.beta.value, d.beta.ci_halfwidth);
    println!("xi    {:.5} vs {:.5} +- {:.5}", exact.xi, d.xi.value, d.xi.ci_halfwidth);

    let (c, quad_error) = average_covert_rate(&params, &scheme, eta1)?;
    let r = simulate_covert_rate(&params, &scheme, eta1, blocks, DEFAULT_SEED)?
        .rate
        .expect("rate estimate");
    println!("C     {c:.6} (quadrature error {quad_error:.1e}) vs {:.6} +- {:.6}", r.value, r.ci_halfwidth);
    Ok(())
}
