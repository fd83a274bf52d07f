//! The warden's radiometer: error rates for a threshold, the optimal threshold and the
//! minimum detection error probability.
//!
//! The source observes the relay's average received power
//! `T = K(η) |h_ar|⁴ + σ²_a`, where `K(η) = η · k · P_a L_ar²` and `k` is the scheme's
//! harvest factor (`2φ/(1−φ)` for TS, `ρ` for PS). It declares "covert traffic" when
//! `T ≥ τ`. Since `|h_ar|²` is exponential, `P[|h_ar|⁴ ≥ x] = exp(−√x / λ_ar)` and every
//! rate has a closed form.

use crate::error::{Error, Result};
use crate::search::bisect;
use crate::params::{SchemeConfig, SystemParams};

/// Below this distance from 1 the closed form for `ξ*` is replaced by its expansion.
const PHI_ONE_BAND: f64 = 1e-8;
const PHI_BRACKET: (f64, f64) = (1e-15, 1.0 - 1e-15);
const PHI_MAX_ITER: usize = 200;
const PHI_TOL: f64 = 1e-12;

/// Error rates of the radiometer at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionPoint {
    /// Threshold, W.
    pub tau: f64,
    /// False alarm rate.
    pub alpha: f64,
    /// Miss detection rate.
    pub beta: f64,
    /// `α + β`.
    pub xi: f64,
}

/// Covertness summary for one efficiency pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covertness {
    /// System overhead `η₀/η₁`.
    pub phi: f64,
    /// Minimum detection error at this overhead.
    pub xi_star: f64,
    /// Overhead at which `ξ*` meets `1 − ε` exactly.
    pub phi_epsilon: f64,
}

impl Covertness {
    pub fn new(eta0: f64, eta1: f64, epsilon: f64) -> Result<Self> {
        if !(eta0 > 0.0 && eta1 >= eta0) {
            return Err(Error::domain("efficiency pair", format!("need 0 < eta0 ({eta0}) <= eta1 ({eta1})")));
        }
        let phi = eta0 / eta1;
        Ok(Covertness {
            phi,
            xi_star: min_detection_error(phi)?,
            phi_epsilon: solve_phi_epsilon(epsilon)?,
        })
    }

    /// Whether the covertness constraint `ξ* ≥ 1 − ε` holds.
    pub fn is_covert(&self) -> bool {
        self.phi >= self.phi_epsilon
    }
}

/// `K(η)`: the scale of the warden's statistic, `T = K(η)|h_ar|⁴ + σ²_a`.
pub fn statistic_scale(params: &SystemParams, scheme: &SchemeConfig, eta: f64) -> f64 {
    let l = params.l_ar();
    eta * scheme.harvest_factor() * params.pa * l * l
}

/// `P[T ≥ τ | H]` for a statistic of scale `k`.
fn exceedance(params: &SystemParams, k: f64, tau: f64) -> f64 {
    if tau <= params.sigma2_a {
        return 1.0;
    }
    (-((tau - params.sigma2_a) / k).sqrt() / params.lambda_ar).exp()
}

/// False alarm rate `α(τ)`. The boundary `τ = σ²_a` belongs to the `α = 1` branch.
pub fn false_alarm(params: &SystemParams, scheme: &SchemeConfig, tau: f64) -> f64 {
    exceedance(params, statistic_scale(params, scheme, params.eta0), tau)
}

/// Miss detection rate `β(τ)` when the relay harvests with efficiency `eta1`.
pub fn miss_detection(params: &SystemParams, scheme: &SchemeConfig, eta1: f64, tau: f64) -> f64 {
    if tau <= params.sigma2_a {
        return 0.0;
    }
    let k1 = statistic_scale(params, scheme, eta1);
    -(-((tau - params.sigma2_a) / k1).sqrt() / params.lambda_ar).exp_m1()
}

pub fn detection_error(params: &SystemParams, scheme: &SchemeConfig, eta1: f64, tau: f64) -> DetectionPoint {
    let alpha = false_alarm(params, scheme, tau);
    let beta = miss_detection(params, scheme, eta1, tau);
    DetectionPoint {
        tau,
        alpha,
        beta,
        xi: alpha + beta,
    }
}

/// The threshold `τ*` minimizing `ξ(τ)`.
pub fn optimal_threshold(params: &SystemParams, scheme: &SchemeConfig, eta1: f64) -> Result<f64> {
    let eta0 = params.eta0;
    if eta1 == eta0 {
        return Err(Error::Degenerate(format!(
            "eta1 = eta0 = {eta0}: both hypotheses coincide and no threshold is optimal"
        )));
    }
    if eta1 < eta0 || eta1.is_nan() {
        return Err(Error::domain("eta1", format!("{eta1} must exceed eta0 = {eta0}")));
    }
    let c = statistic_scale(params, scheme, 1.0);
    let root = params.lambda_ar * (eta0 * eta1).sqrt() * (eta1 / eta0).ln() / (2.0 * (eta1.sqrt() - eta0.sqrt()));
    Ok(params.sigma2_a + c * root * root)
}

/// Minimum detection error `ξ*(φ) = 1 − φ^{1/(2(1−√φ))}(1/√φ − 1)` for `φ ∈ (0, 1]`.
pub fn min_detection_error(phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi <= 1.0) {
        return Err(Error::domain("overhead phi", format!("{phi} must lie in (0, 1]")));
    }
    let sqrt_phi = phi.sqrt();
    // 1 − √φ without cancellation
    let t = (1.0 - phi) / (1.0 + sqrt_phi);
    if 1.0 - phi < PHI_ONE_BAND {
        // φ^{1/(2t)}·t/√φ = e^{-1}(t + t²/2) + O(t³)
        return Ok(1.0 - (t + 0.5 * t * t) / std::f64::consts::E);
    }
    Ok(1.0 - (phi.ln() / (2.0 * t)).exp() * (t / sqrt_phi))
}

/// Range `[ξ*(η₀/η_u), 1]` spanned by `ξ*` over `η₁ ∈ [η₀, η_u]`.
pub fn xi_star_range(eta0: f64, eta_u: f64) -> Result<(f64, f64)> {
    if !(eta0 > 0.0 && eta0 <= eta_u && eta_u < 1.0) {
        return Err(Error::domain("efficiency bounds", format!("need 0 < {eta0} <= {eta_u} < 1")));
    }
    Ok((min_detection_error(eta0 / eta_u)?, 1.0))
}

/// Solves `ξ*(φ) = 1 − ε` for the overhead `φ_ε`.
///
/// `ξ*` is increasing in `φ`, so the root is unique. `ε = 0` returns the limit `φ = 1`;
/// `ε = 1` would need `φ → 0` and is rejected.
pub fn solve_phi_epsilon(epsilon: f64) -> Result<f64> {
    if epsilon == 0.0 {
        return Ok(1.0);
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain("epsilon", format!("{epsilon} must lie in [0, 1)")));
    }
    let target = 1.0 - epsilon;
    let f = |phi: f64| min_detection_error(phi).expect("bracket inside (0, 1]") - target;
    bisect(f, PHI_BRACKET.0, PHI_BRACKET.1, PHI_TOL, PHI_MAX_ITER)
}
