//! Per-block power split at the relay and the resulting SNRs.
//!
//! Run with `cargo run --example power_allocation`.

use covert_relay::relaying::RelayLink;
use covert_relay::{ChannelDraw, SchemeConfig, SystemParams};

fn main() -> Result<(), covert_relay::Error> {
    let params = SystemParams::default();
    let eta1 = 0.7;
    let draws = [ChannelDraw::new(0.2, 1.0), ChannelDraw::new(1.0, 1.0), ChannelDraw::new(3.0, 0.5)];

    for scheme in [SchemeConfig::ts(0.4)?, SchemeConfig::ps(0.7)?] {
        let link = RelayLink::new(&params, &scheme);
        println!("{} (fraction {})", scheme.variant(), scheme.fraction());
        for d in &draws {
            let a = link.allocate(eta1, d)?;
            println!(
                "  |h_ar|^2 = {:.1}  |h_rb|^2 = {:.1}  Pr0 = {:.3e}  Pr1 = {:.3e}  Prc = {:.3e}",
                d.g_ar, d.g_rb, a.pr0, a.pr1, a.prc
            );
            // the destination sees the same SNR for the forwarded signal either way
            println!(
                "    snr H0 = {:.4}  sinr H1 = {:.4}  covert snr = {:.4}",
                link.snr_h0(d),
                link.sinr_h1_unchecked(eta1, d),
                link.covert_snr_unchecked(eta1, d)
            );
        }
    }
    Ok(())
}
