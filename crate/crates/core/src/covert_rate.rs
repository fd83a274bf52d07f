//! Fading-averaged covert rate and the covert-rate maximization.
//!
//! `C = E[log₂(1 + γ_c)]` over independent exponential `|h_ar|²` and `|h_rb|²` is computed
//! by tensor Gauss–Laguerre quadrature (64 nodes per axis, refined with 128 for the error
//! estimate). The effective rate scales `C` by the share of the block used on the
//! relay→destination hop. Because `γ_c` (and so `Ψ`) increases with `η₁`, the best
//! efficiency is the largest one the covertness constraint and the hardware cap allow.

use std::fmt;

use crate::detection::solve_phi_epsilon;
use crate::error::{Error, Result};
use crate::params::{ChannelDraw, Scheme, SchemeConfig, SystemParams};
use crate::quadrature::{expect_exponential_2d, expect_exponential_2d_fast};
use crate::relaying::RelayLink;
use crate::search::golden_section_max;

/// Relative difference between the 64- and 128-node rules above which a rate is flagged.
pub const QUAD_TOLERANCE: f64 = 1e-6;

const FRACTION_SCAN: usize = 99;
const FRACTION_TOL: f64 = 1e-4;

/// Average and effective covert rate, in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub c_avg: f64,
    pub psi: f64,
    /// Relative difference between the two quadrature orders.
    pub quad_error: f64,
}

impl RateResult {
    /// `false` when the quadrature did not settle to [`QUAD_TOLERANCE`].
    pub fn is_converged(&self) -> bool {
        self.quad_error <= QUAD_TOLERANCE
    }
}

/// The constraint that fixes `η₁*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Binding {
    /// `ξ* ≥ 1 − ε` is active: `η₁* = η₀/φ_ε`.
    Covertness,
    /// The harvester cap is active: `η₁* = η_u`.
    HarvesterCap,
}

impl Binding {
    pub fn label(self) -> &'static str {
        match self {
            Binding::Covertness => "covertness",
            Binding::HarvesterCap => "harvester-cap",
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The minimum efficiency achieving the maximum effective covert rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eta1Optimum {
    pub eta1_star: f64,
    pub binding: Binding,
    /// `φ_ε`, when `ε < 1`.
    pub phi_epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationOutcome {
    pub eta1_star: f64,
    pub psi_star: f64,
    pub binding: Binding,
    pub phi_epsilon: Option<f64>,
    pub rate: RateResult,
}

/// `E[log₂(1 + γ_c)]` with its quadrature error estimate.
pub fn average_covert_rate(params: &SystemParams, scheme: &SchemeConfig, eta1: f64) -> Result<(f64, f64)> {
    let link = RelayLink::new(params, scheme);
    link.check_eta1(eta1)?;
    if eta1 == params.eta0 {
        return Ok((0.0, 0.0));
    }
    let est = expect_exponential_2d(params.lambda_ar, params.lambda_rb, |x, y| {
        link.covert_snr_unchecked(eta1, &ChannelDraw::new(x, y)).ln_1p() / std::f64::consts::LN_2
    });
    Ok((est.value, est.rel_error))
}

pub fn effective_covert_rate(params: &SystemParams, scheme: &SchemeConfig, eta1: f64) -> Result<RateResult> {
    let (c_avg, quad_error) = average_covert_rate(params, scheme, eta1)?;
    Ok(RateResult {
        c_avg,
        psi: scheme.rate_prefactor() * c_avg,
        quad_error,
    })
}

/// Largest `ε` for which the covertness constraint, rather than `η_u`, limits `η₁`:
/// `(η₀/η_u)^{√η_u / (2(√η_u − √η₀))} (√(η_u/η₀) − 1)`.
pub fn covertness_threshold(eta0: f64, eta_u: f64) -> f64 {
    if eta0 == eta_u {
        return 0.0;
    }
    let (s0, su) = (eta0.sqrt(), eta_u.sqrt());
    (eta0 / eta_u).powf(su / (2.0 * (su - s0))) * (su / s0 - 1.0)
}

/// `η₁*`, identical for both schemes.
pub fn optimal_eta1(params: &SystemParams) -> Result<Eta1Optimum> {
    params.validate()?;
    let phi_epsilon = if params.epsilon < 1.0 {
        Some(solve_phi_epsilon(params.epsilon)?)
    } else {
        None
    };
    if params.eta0 == params.eta_u || params.epsilon > covertness_threshold(params.eta0, params.eta_u) {
        return Ok(Eta1Optimum {
            eta1_star: params.eta_u,
            binding: Binding::HarvesterCap,
            phi_epsilon,
        });
    }
    let phi = phi_epsilon.expect("epsilon below the threshold is below 1");
    Ok(Eta1Optimum {
        eta1_star: (params.eta0 / phi).min(params.eta_u),
        binding: Binding::Covertness,
        phi_epsilon,
    })
}

/// `Ψ*` at `η₁*`. No search over `η₁` is needed since `Ψ` is increasing in it.
pub fn max_effective_covert_rate(params: &SystemParams, scheme: &SchemeConfig) -> Result<OptimizationOutcome> {
    let opt = optimal_eta1(params)?;
    let rate = effective_covert_rate(params, scheme, opt.eta1_star)?;
    Ok(OptimizationOutcome {
        eta1_star: opt.eta1_star,
        psi_star: rate.psi,
        binding: opt.binding,
        phi_epsilon: opt.phi_epsilon,
        rate,
    })
}

/// Effective rate of the source's own signal under `H₀`: the objective used to pick the
/// harvesting fraction.
pub fn h0_rate_objective(params: &SystemParams, scheme: &SchemeConfig) -> f64 {
    let link = RelayLink::new(params, scheme);
    let c = expect_exponential_2d_fast(params.lambda_ar, params.lambda_rb, |x, y| {
        link.snr_h0(&ChannelDraw::new(x, y)).ln_1p() / std::f64::consts::LN_2
    });
    scheme.rate_prefactor() * c
}

/// Fraction (`φ` or `ρ`) maximizing [`h0_rate_objective`].
///
/// A 99-point scan over `0.01 … 0.99` brackets the best cell, then golden-section search
/// refines it to `1e-4`.
pub fn optimize_harvest_fraction(params: &SystemParams, variant: Scheme) -> Result<f64> {
    params.validate()?;
    let objective = |f: f64| -> f64 {
        match SchemeConfig::new(variant, f) {
            Ok(s) => h0_rate_objective(params, &s),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let grid: Vec<f64> = (1..=FRACTION_SCAN).map(|i| i as f64 / (FRACTION_SCAN + 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&f| objective(f)).collect();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > values[best] { i } else { best });
    if !values[best].is_finite() {
        return Err(Error::domain("harvest fraction objective", "no finite value on the scan grid"));
    }
    let lo = if best == 0 { 1e-6 } else { grid[best - 1] };
    let hi = if best + 1 == grid.len() { 1.0 - 1e-6 } else { grid[best + 1] };
    let (x, fx) = golden_section_max(objective, lo, hi, FRACTION_TOL);
    Ok(if fx >= values[best] { x } else { grid[best] })
}
