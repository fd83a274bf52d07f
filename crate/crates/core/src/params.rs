//! System constants, unit conversions, path loss and Rayleigh channel draws.
//!
//! Every quantity is stored in SI units (watts, hertz, meters, seconds). Parameter
//! files use engineering units and are converted on load, see
//! [`crate::experiments::config`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};

/// Speed of light used by the free-space constant, m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(p_dbm: f64) -> f64 {
    10f64.powf((p_dbm - 30.0) / 10.0)
}

/// Converts a power in watts to dBm.
pub fn watts_to_dbm(p_w: f64) -> f64 {
    10.0 * p_w.log10() + 30.0
}

/// Large-scale gain `ν d^{-m}` with `ν = (c / 4π f_c)²`.
pub fn path_loss(d: f64, m: f64, fc: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain("distance", format!("{d} m must be positive")));
    }
    if !(fc > 0.0 && fc.is_finite()) {
        return Err(Error::domain("carrier frequency", format!("{fc} Hz must be positive")));
    }
    let nu = (SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * fc)).powi(2);
    Ok(nu * d.powf(-m))
}

/// Energy-harvesting receiver architecture at the relay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Harvest for a fraction `φ` of the block, then split the rest between the two hops.
    TimeSwitching,
    /// Split a fraction `ρ` of the received power into the harvester during the first half-block.
    PowerSplitting,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::TimeSwitching, Scheme::PowerSplitting];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::TimeSwitching => "ts",
            Scheme::PowerSplitting => "ps",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ts" => Ok(Scheme::TimeSwitching),
            "ps" => Ok(Scheme::PowerSplitting),
            other => Err(Error::domain("scheme", format!("`{other}` (expected ts or ps)"))),
        }
    }
}

/// A scheme together with its harvesting fraction (`φ` for TS, `ρ` for PS).
///
/// The fraction is the same under both hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    variant: Scheme,
    fraction: f64,
}

impl SchemeConfig {
    pub fn new(variant: Scheme, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::domain(
                "harvesting fraction",
                format!("{fraction} must lie in (0, 1)"),
            ));
        }
        Ok(SchemeConfig { variant, fraction })
    }

    pub fn ts(phi: f64) -> Result<Self> {
        Self::new(Scheme::TimeSwitching, phi)
    }

    pub fn ps(rho: f64) -> Result<Self> {
        Self::new(Scheme::PowerSplitting, rho)
    }

    pub fn variant(&self) -> Scheme {
        self.variant
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    /// Ratio of relay transmit power to `η · P_a L_ar |h_ar|²`:
    /// `2φ/(1−φ)` for TS and `ρ` for PS.
    pub fn harvest_factor(&self) -> f64 {
        match self.variant {
            Scheme::TimeSwitching => 2.0 * self.fraction / (1.0 - self.fraction),
            Scheme::PowerSplitting => self.fraction,
        }
    }

    /// Share of the source power reaching the information receiver: 1 for TS, `1−ρ` for PS.
    pub fn information_share(&self) -> f64 {
        match self.variant {
            Scheme::TimeSwitching => 1.0,
            Scheme::PowerSplitting => 1.0 - self.fraction,
        }
    }

    /// Fraction of the block spent on the relay→destination hop.
    pub fn rate_prefactor(&self) -> f64 {
        match self.variant {
            Scheme::TimeSwitching => (1.0 - self.fraction) / 2.0,
            Scheme::PowerSplitting => 0.5,
        }
    }
}

/// Noise power at the relay's information receiver.
pub fn relay_noise_power(scheme: &SchemeConfig, sigma2_ra: f64, sigma2_rc: f64) -> f64 {
    match scheme.variant() {
        Scheme::TimeSwitching => sigma2_ra + sigma2_rc,
        Scheme::PowerSplitting => (1.0 - scheme.fraction()) * sigma2_ra + sigma2_rc,
    }
}

/// Physical constants of one network configuration, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Source transmit power, W.
    pub pa: f64,
    /// Carrier frequency, Hz.
    pub fc: f64,
    /// Path-loss exponent.
    pub m: f64,
    /// Source→relay distance, m.
    pub d_ar: f64,
    /// Relay→destination distance, m.
    pub d_rb: f64,
    /// Mean of `|h_ar|²`.
    pub lambda_ar: f64,
    /// Mean of `|h_rb|²`.
    pub lambda_rb: f64,
    /// Relay antenna noise variance, W.
    pub sigma2_ra: f64,
    /// Relay conversion noise variance, W.
    pub sigma2_rc: f64,
    /// Destination antenna noise variance, W.
    pub sigma2_ba: f64,
    /// Destination conversion noise variance, W.
    pub sigma2_bc: f64,
    /// Noise variance at the source (warden) receiver, W.
    pub sigma2_a: f64,
    /// Publicly known baseline conversion efficiency.
    pub eta0: f64,
    /// Upper bound on the achievable conversion efficiency.
    pub eta_u: f64,
    /// Covertness budget: the warden's error must stay at or above `1 − ε`.
    pub epsilon: f64,
    /// Block duration, s. Every expression is normalized by it.
    pub t_block: f64,
}

impl Default for SystemParams {
    /// The reference network: 20 dBm source, 900 MHz, `m = 2`, 10 m hops, unit-mean
    /// fading, −80 dBm on every noise source, `η₀ = 0.4`, `η_u = 0.8`, `ε = 0.1`.
    fn default() -> Self {
        let noise = dbm_to_watts(-80.0);
        SystemParams {
            pa: dbm_to_watts(20.0),
            fc: 900e6,
            m: 2.0,
            d_ar: 10.0,
            d_rb: 10.0,
            lambda_ar: 1.0,
            lambda_rb: 1.0,
            sigma2_ra: noise,
            sigma2_rc: noise,
            sigma2_ba: noise,
            sigma2_bc: noise,
            sigma2_a: noise,
            eta0: 0.4,
            eta_u: 0.8,
            epsilon: 0.1,
            t_block: 1.0,
        }
    }
}

impl SystemParams {
    /// Checks every field invariant.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("Pa", self.pa),
            ("fc", self.fc),
            ("d_ar", self.d_ar),
            ("d_rb", self.d_rb),
            ("lambda_ar", self.lambda_ar),
            ("lambda_rb", self.lambda_rb),
            ("sigma2_ra", self.sigma2_ra),
            ("sigma2_rc", self.sigma2_rc),
            ("sigma2_ba", self.sigma2_ba),
            ("sigma2_bc", self.sigma2_bc),
            ("sigma2_a", self.sigma2_a),
            ("T_block", self.t_block),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain("system parameter", format!("{name} = {v} must be positive")));
            }
        }
        if !(self.m >= 0.0 && self.m.is_finite()) {
            return Err(Error::domain("system parameter", format!("m = {} must be non-negative", self.m)));
        }
        if !(self.eta0 > 0.0 && self.eta0 <= self.eta_u && self.eta_u < 1.0) {
            return Err(Error::domain(
                "system parameter",
                format!("need 0 < eta0 ({}) <= eta_u ({}) < 1", self.eta0, self.eta_u),
            ));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::domain("system parameter", format!("epsilon = {} must lie in [0, 1]", self.epsilon)));
        }
        Ok(())
    }

    pub fn l_ar(&self) -> f64 {
        path_loss(self.d_ar, self.m, self.fc).expect("validated distance and frequency")
    }

    pub fn l_rb(&self) -> f64 {
        path_loss(self.d_rb, self.m, self.fc).expect("validated distance and frequency")
    }

    /// Total noise at the destination, `σ²_ba + σ²_bc`.
    pub fn sigma2_b(&self) -> f64 {
        self.sigma2_ba + self.sigma2_bc
    }

    /// Relay noise for the given scheme.
    pub fn sigma2_r(&self, scheme: &SchemeConfig) -> f64 {
        relay_noise_power(scheme, self.sigma2_ra, self.sigma2_rc)
    }
}

/// Small-scale power gains of one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    /// `|h_ar|²`, also `|h_ra|²` by reciprocity.
    pub g_ar: f64,
    /// `|h_rb|²`.
    pub g_rb: f64,
}

impl ChannelDraw {
    pub fn new(g_ar: f64, g_rb: f64) -> Self {
        ChannelDraw { g_ar, g_rb }
    }

    /// Draws both hops independently from their Rayleigh fading laws.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, params: &SystemParams) -> Self {
        ChannelDraw {
            g_ar: sample_gain(rng, params.lambda_ar),
            g_rb: sample_gain(rng, params.lambda_rb),
        }
    }
}

/// Power gain `|h|²` of a Rayleigh channel: exponential with the given mean.
pub fn sample_gain<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    let e: f64 = rng.sample(Exp1);
    mean * e
}
