//! Power allocation and end-to-end SNR algebra for one channel realization.
//!
//! Under `H₀` the relay spends all harvested power forwarding the source. Under `H₁` it
//! harvests with efficiency `η₁ > η₀` and splits the total into a forwarding part `P_r¹`
//! and a covert part `P_r^c`, choosing `P_r¹` so that the destination sees the same SINR
//! for the source's signal as it would under `H₀`.

use crate::error::{Error, Result};
use crate::params::{ChannelDraw, Scheme, SchemeConfig, SystemParams};

/// Composite gains shared by every expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    /// `P_a L_ar |h_ar|²`, W.
    pub a: f64,
    /// `L_rb |h_rb|²`.
    pub b: f64,
}

/// Relay transmit powers and forwarding gain for one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    /// Forwarding power under `H₀`, W.
    pub pr0: f64,
    /// Forwarding power under `H₁`, W.
    pub pr1: f64,
    /// Covert power under `H₁`, W.
    pub prc: f64,
    /// Squared amplification gain `G²`.
    pub gain2: f64,
}

/// Per-(params, scheme) constants, hoisted out of the per-draw formulas.
///
/// Quadrature and Monte Carlo loops evaluate millions of realizations against the same
/// configuration; the free functions below are thin wrappers over this type.
#[derive(Debug, Clone, Copy)]
pub struct RelayLink {
    scheme: SchemeConfig,
    eta0: f64,
    eta_u: f64,
    pa_l_ar: f64,
    l_rb: f64,
    harvest: f64,
    share: f64,
    sigma2_r: f64,
    sigma2_b: f64,
}

impl RelayLink {
    pub fn new(params: &SystemParams, scheme: &SchemeConfig) -> Self {
        RelayLink {
            scheme: *scheme,
            eta0: params.eta0,
            eta_u: params.eta_u,
            pa_l_ar: params.pa * params.l_ar(),
            l_rb: params.l_rb(),
            harvest: scheme.harvest_factor(),
            share: scheme.information_share(),
            sigma2_r: params.sigma2_r(scheme),
            sigma2_b: params.sigma2_b(),
        }
    }

    pub fn scheme(&self) -> &SchemeConfig {
        &self.scheme
    }

    pub fn sigma2_r(&self) -> f64 {
        self.sigma2_r
    }

    pub fn sigma2_b(&self) -> f64 {
        self.sigma2_b
    }

    pub fn gains(&self, draw: &ChannelDraw) -> LinkGains {
        LinkGains {
            a: self.pa_l_ar * draw.g_ar,
            b: self.l_rb * draw.g_rb,
        }
    }

    pub fn harvested_power(&self, eta: f64, g_ar: f64) -> f64 {
        eta * self.harvest * self.pa_l_ar * g_ar
    }

    pub fn gain2(&self, g_ar: f64) -> f64 {
        1.0 / (self.share * self.pa_l_ar * g_ar + self.sigma2_r)
    }

    pub fn check_eta1(&self, eta1: f64) -> Result<()> {
        // relative slack so that η₁* = η₀/φ_ε computed by bisection is accepted at the cap
        let slack = 1e-12 * self.eta_u;
        if !(eta1 >= self.eta0 && eta1 <= self.eta_u + slack) {
            return Err(Error::domain(
                "eta1",
                format!("{eta1} outside [eta0, eta_u] = [{}, {}]", self.eta0, self.eta_u),
            ));
        }
        Ok(())
    }

    /// Allocation without the range check on `η₁`.
    pub fn allocate_unchecked(&self, eta1: f64, draw: &ChannelDraw) -> PowerAllocation {
        let LinkGains { a, b } = self.gains(draw);
        let pr0 = self.eta0 * self.harvest * a;
        let total = eta1 * self.harvest * a;
        let prc = (eta1 - self.eta0) * self.harvest * a * self.sigma2_b / (pr0 * b + self.sigma2_b);
        PowerAllocation {
            pr0,
            pr1: total - prc,
            prc,
            gain2: self.gain2(draw.g_ar),
        }
    }

    pub fn allocate(&self, eta1: f64, draw: &ChannelDraw) -> Result<PowerAllocation> {
        self.check_eta1(eta1)?;
        Ok(self.allocate_unchecked(eta1, draw))
    }

    /// `γ_b⁰`, the destination SNR of the source signal under `H₀`.
    pub fn snr_h0(&self, draw: &ChannelDraw) -> f64 {
        let LinkGains { a, b } = self.gains(draw);
        let pr0 = self.eta0 * self.harvest * a;
        let g2 = self.gain2(draw.g_ar);
        let fwd = pr0 * b * g2;
        fwd * self.share * a / (fwd * self.sigma2_r + self.sigma2_b)
    }

    pub fn sinr_h1_unchecked(&self, eta1: f64, draw: &ChannelDraw) -> f64 {
        let p = self.allocate_unchecked(eta1, draw);
        let LinkGains { a, b } = self.gains(draw);
        let fwd = p.pr1 * b * p.gain2;
        fwd * self.share * a / (fwd * self.sigma2_r + p.prc * b + self.sigma2_b)
    }

    /// `γ_c` evaluated from the allocated powers.
    pub fn covert_snr_unchecked(&self, eta1: f64, draw: &ChannelDraw) -> f64 {
        let p = self.allocate_unchecked(eta1, draw);
        let b = self.l_rb * draw.g_rb;
        p.prc * b / (p.pr1 * b * p.gain2 * self.sigma2_r + self.sigma2_b)
    }

    /// `γ_c` through the `Q`-form rewrite, an algebraically independent route.
    pub fn covert_snr_q_form(&self, eta1: f64, draw: &ChannelDraw) -> f64 {
        let LinkGains { a, b } = self.gains(draw);
        let s2b = self.sigma2_b;
        let s2r = self.sigma2_r;
        let phi = self.scheme.fraction();
        match self.scheme.variant() {
            Scheme::TimeSwitching => {
                let q1 = 2.0 * self.eta0 * phi * a * b;
                let q2 = 2.0 * eta1 * phi * a * b;
                let c = 1.0 - phi;
                (q2 - q1) * s2b / (q1 * (q2 + c * s2b) * s2r / (c * (a + s2r)) + (q1 + c * s2b) * s2b)
            }
            Scheme::PowerSplitting => {
                let q3 = self.eta0 * phi * a * b;
                let q4 = eta1 * phi * a * b;
                (q4 - q3) * s2b / (q3 * (q4 + s2b) * s2r / ((1.0 - phi) * a + s2r) + (q3 + s2b) * s2b)
            }
        }
    }
}

/// Total relay transmit power when harvesting with efficiency `eta`.
pub fn harvested_power_total(params: &SystemParams, scheme: &SchemeConfig, eta: f64, g_ar: f64) -> f64 {
    RelayLink::new(params, scheme).harvested_power(eta, g_ar)
}

/// `G²`, chosen so the forwarded signal has unit power.
pub fn amplification_gain2(params: &SystemParams, scheme: &SchemeConfig, g_ar: f64) -> f64 {
    RelayLink::new(params, scheme).gain2(g_ar)
}

pub fn allocate_powers(
    params: &SystemParams,
    scheme: &SchemeConfig,
    eta1: f64,
    draw: &ChannelDraw,
) -> Result<PowerAllocation> {
    RelayLink::new(params, scheme).allocate(eta1, draw)
}

pub fn snr_h0(params: &SystemParams, scheme: &SchemeConfig, draw: &ChannelDraw) -> f64 {
    RelayLink::new(params, scheme).snr_h0(draw)
}

pub fn sinr_h1(params: &SystemParams, scheme: &SchemeConfig, eta1: f64, draw: &ChannelDraw) -> Result<f64> {
    let link = RelayLink::new(params, scheme);
    link.check_eta1(eta1)?;
    Ok(link.sinr_h1_unchecked(eta1, draw))
}

pub fn covert_snr(params: &SystemParams, scheme: &SchemeConfig, eta1: f64, draw: &ChannelDraw) -> Result<f64> {
    let link = RelayLink::new(params, scheme);
    link.check_eta1(eta1)?;
    Ok(link.covert_snr_unchecked(eta1, draw))
}
