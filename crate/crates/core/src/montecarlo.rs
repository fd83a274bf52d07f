//! Monte Carlo oracle: fading blocks, the warden's radiometer and the covert rate.
//!
//! The warden's statistic is taken in its infinite-blocklength form
//! `T = K(η)|h_ar|⁴ + σ²_a`, so each block costs one exponential draw. Work is split into
//! batches of [`BATCH`] blocks; batch `i` of task `t` draws from stream
//! `stream_id(t, i)` of the master seed. Counts are integers and per-batch float sums are
//! merged in batch order, so reports are bit-identical across runs and thread counts.

use rayon::prelude::*;

use crate::detection::{detection_error, optimal_threshold, statistic_scale};
use crate::error::Result;
use crate::params::{sample_gain, ChannelDraw, SchemeConfig, SystemParams};
use crate::relaying::RelayLink;
use crate::rng::{stream_id, stream_rng};

/// Blocks per RNG stream.
pub const BATCH: usize = 1 << 16;
/// Blocks per hypothesis used by [`validate_threshold_optimality`].
pub const VALIDATION_BLOCKS: usize = 100_000;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

const TASK_H0: u32 = 0;
const TASK_H1: u32 = 1;
const TASK_RATE: u32 = 2;

/// One empirical quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Plug-in standard error.
    pub std_error: f64,
    /// 95% half-width. Proportions use the Wilson score interval, which stays positive
    /// even when no event was observed.
    pub ci_halfwidth: f64,
}

impl Estimate {
    fn proportion(hits: usize, n: usize) -> Self {
        let nf = n as f64;
        let p = hits as f64 / nf;
        let z2 = Z95 * Z95;
        let half = Z95 / (1.0 + z2 / nf) * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
        Estimate {
            value: p,
            std_error: (p * (1.0 - p) / nf).sqrt(),
            ci_halfwidth: half,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEstimate {
    pub alpha: Estimate,
    pub beta: Estimate,
    /// `α̂ + β̂`; the two hypotheses use independent draws, so errors add in quadrature.
    pub xi: Estimate,
}

/// Result of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    /// Blocks per hypothesis (detection) or fading blocks (rate).
    pub n_blocks: usize,
    pub seed: u64,
    pub detection: Option<DetectionEstimate>,
    /// Empirical `E[log₂(1 + γ_c)]`, bits per channel use.
    pub rate: Option<Estimate>,
}

/// The warden's statistic for one realization.
pub fn sufficient_statistic(params: &SystemParams, scheme: &SchemeConfig, eta: f64, g_ar: f64) -> f64 {
    statistic_scale(params, scheme, eta) * g_ar * g_ar + params.sigma2_a
}

fn batches(n: usize) -> impl IndexedParallelIterator<Item = (u32, usize)> {
    let count = n.div_ceil(BATCH);
    (0..count).into_par_iter().map(move |i| (i as u32, BATCH.min(n - i * BATCH)))
}

/// Sorted draws of the warden's statistic under both hypotheses.
///
/// One sample set answers queries for any number of thresholds, which keeps threshold
/// sweeps paired.
#[derive(Debug, Clone)]
pub struct StatisticSamples {
    h0: Vec<f64>,
    h1: Vec<f64>,
}

impl StatisticSamples {
    pub fn draw(params: &SystemParams, scheme: &SchemeConfig, eta1: f64, n_blocks: usize, seed: u64) -> Self {
        let draw_task = |task: u32, eta: f64| -> Vec<f64> {
            let k = statistic_scale(params, scheme, eta);
            let parts: Vec<Vec<f64>> = batches(n_blocks)
                .map(|(i, len)| {
                    let mut rng = stream_rng(seed, stream_id(task, i));
                    (0..len)
                        .map(|_| {
                            let g = sample_gain(&mut rng, params.lambda_ar);
                            k * g * g + params.sigma2_a
                        })
                        .collect()
                })
                .collect();
            let mut all = parts.concat();
            all.par_sort_unstable_by(f64::total_cmp);
            all
        };
        StatisticSamples {
            h0: draw_task(TASK_H0, params.eta0),
            h1: draw_task(TASK_H1, eta1),
        }
    }

    pub fn len(&self) -> usize {
        self.h0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h0.is_empty()
    }

    /// Radiometer error rates at threshold `tau`: decide `H₁` when `T ≥ τ`.
    pub fn evaluate(&self, tau: f64) -> DetectionEstimate {
        let n = self.h0.len();
        let false_alarms = n - self.h0.partition_point(|&t| t < tau);
        let misses = self.h1.partition_point(|&t| t < tau);
        let alpha = Estimate::proportion(false_alarms, n);
        let beta = Estimate::proportion(misses, self.h1.len());
        let xi = Estimate {
            value: alpha.value + beta.value,
            std_error: alpha.std_error.hypot(beta.std_error),
            ci_halfwidth: alpha.ci_halfwidth.hypot(beta.ci_halfwidth),
        };
        DetectionEstimate { alpha, beta, xi }
    }

    /// Empirical CDF of the `H₀` statistic at `t`.
    pub fn h0_cdf(&self, t: f64) -> f64 {
        self.h0.partition_point(|&x| x <= t) as f64 / self.h0.len() as f64
    }

    pub fn h0(&self) -> &[f64] {
        &self.h0
    }
}

/// Empirical false alarm, miss detection and detection error at one threshold.
pub fn simulate_detection(
    params: &SystemParams,
    scheme: &SchemeConfig,
    eta1: f64,
    tau: f64,
    n_blocks: usize,
    seed: u64,
) -> SimulationReport {
    let n_blocks = n_blocks.max(1);
    let samples = StatisticSamples::draw(params, scheme, eta1, n_blocks, seed);
    SimulationReport {
        n_blocks,
        seed,
        detection: Some(samples.evaluate(tau)),
        rate: None,
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }
}

/// Empirical average covert rate over `n_blocks` fading blocks.
pub fn simulate_covert_rate(
    params: &SystemParams,
    scheme: &SchemeConfig,
    eta1: f64,
    n_blocks: usize,
    seed: u64,
) -> Result<SimulationReport> {
    let link = RelayLink::new(params, scheme);
    link.check_eta1(eta1)?;
    let n_blocks = n_blocks.max(1);
    let parts: Vec<Moments> = batches(n_blocks)
        .map(|(i, len)| {
            let mut rng = stream_rng(seed, stream_id(TASK_RATE, i));
            let mut m = Moments::default();
            for _ in 0..len {
                let d = ChannelDraw::sample(&mut rng, params);
                m.push(link.covert_snr_unchecked(eta1, &d).ln_1p() / std::f64::consts::LN_2);
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = if total.n > 1.0 { total.m2 / (total.n - 1.0) } else { 0.0 };
    let se = (var / total.n).sqrt();
    Ok(SimulationReport {
        n_blocks,
        seed,
        detection: None,
        rate: Some(Estimate {
            value: total.mean,
            std_error: se,
            ci_halfwidth: Z95 * se,
        }),
    })
}

/// Log-spaced thresholds `σ²_a + δ` with `δ` from `σ²_a·10⁻⁹` to `10³(τ* − σ²_a)`.
pub fn threshold_grid(params: &SystemParams, tau_star: f64, n: usize) -> Vec<f64> {
    let lo = (params.sigma2_a * 1e-9).ln();
    let hi = (1e3 * (tau_star - params.sigma2_a)).ln();
    (0..n)
        .map(|i| params.sigma2_a + (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Checks that `τ*` beats every threshold on a grid, both in closed form and empirically.
///
/// Closed form: `ξ(τ*) ≤ ξ(τ_g)` up to rounding (`1e-12`). Empirical, on one paired sample
/// set of [`VALIDATION_BLOCKS`] blocks per hypothesis: `ξ̂(τ*) ≤ ξ̂(τ_g) + 3·ci(ξ̂(τ*))`.
pub fn validate_threshold_optimality(
    params: &SystemParams,
    scheme: &SchemeConfig,
    eta1: f64,
    grid_size: usize,
    seed: u64,
) -> Result<bool> {
    let grid_size = grid_size.max(100);
    let tau_star = optimal_threshold(params, scheme, eta1)?;
    let best = detection_error(params, scheme, eta1, tau_star).xi;
    let grid = threshold_grid(params, tau_star, grid_size);
    let closed_ok = grid
        .iter()
        .all(|&t| best <= detection_error(params, scheme, eta1, t).xi + 1e-12);

    let samples = StatisticSamples::draw(params, scheme, eta1, VALIDATION_BLOCKS, seed);
    let at_star = samples.evaluate(tau_star).xi;
    let slack = 3.0 * at_star.ci_halfwidth;
    let empirical_ok = grid
        .iter()
        .all(|&t| at_star.value <= samples.evaluate(t).xi.value + slack);
    Ok(closed_ok && empirical_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covert_rate::average_covert_rate;
    use crate::detection::{false_alarm, min_detection_error, miss_detection};

    fn fig2() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn statistic_floor_and_linearity() {
        let p = fig2();
        let s = SchemeConfig::ts(0.5).unwrap();
        assert_eq!(sufficient_statistic(&p, &s, 0.4, 0.0), p.sigma2_a);
        let d1 = sufficient_statistic(&p, &s, 0.7, 1.3) - sufficient_statistic(&p, &s, 0.4, 1.3);
        let d2 = sufficient_statistic(&p, &s, 0.55, 1.3) - sufficient_statistic(&p, &s, 0.4, 1.3);
        assert!((d1 / d2 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn statistic_mean_under_h0() {
        let p = fig2();
        let s = SchemeConfig::ps(0.6).unwrap();
        let samples = StatisticSamples::draw(&p, &s, 0.7, 1_000_000, 1);
        let mean = samples.h0().iter().sum::<f64>() / samples.len() as f64;
        let k0 = statistic_scale(&p, &s, p.eta0);
        let expect = k0 * 2.0 * p.lambda_ar * p.lambda_ar + p.sigma2_a;
        assert!(((mean - expect) / expect).abs() < 0.01);
    }

    #[test]
    fn below_floor_is_exact() {
        let p = fig2();
        let s = SchemeConfig::ts(0.5).unwrap();
        let r = simulate_detection(&p, &s, 0.7, 0.5 * p.sigma2_a, 10_000, 3).detection.unwrap();
        assert_eq!((r.alpha.value, r.beta.value), (1.0, 0.0));
        assert!(r.alpha.ci_halfwidth > 0.0);
    }

    #[test]
    fn optimal_threshold_error_matches_closed_form() {
        let p = fig2();
        for s in [SchemeConfig::ts(0.5).unwrap(), SchemeConfig::ps(0.5).unwrap()] {
            let tau = optimal_threshold(&p, &s, 0.7).unwrap();
            let r = simulate_detection(&p, &s, 0.7, tau, 1_000_000, 9).detection.unwrap();
            assert!((r.xi.value - min_detection_error(4.0 / 7.0).unwrap()).abs() < 0.005);
        }
    }

    #[test]
    fn identical_hypotheses_give_unit_error() {
        let p = fig2();
        let s = SchemeConfig::ts(0.5).unwrap();
        let tau = p.sigma2_a + statistic_scale(&p, &s, p.eta0);
        let r = simulate_detection(&p, &s, p.eta0, tau, 200_000, 4).detection.unwrap();
        assert!((r.xi.value - 1.0).abs() <= 3.0 * r.xi.std_error);
    }

    #[test]
    fn rates_within_binomial_error() {
        let p = fig2();
        let s = SchemeConfig::ts(0.35).unwrap();
        let samples = StatisticSamples::draw(&p, &s, 0.65, 100_000, 12);
        let tau0 = optimal_threshold(&p, &s, 0.65).unwrap();
        for mult in [0.2, 0.5, 1.0, 2.0, 6.0] {
            let tau = p.sigma2_a + mult * (tau0 - p.sigma2_a);
            let e = samples.evaluate(tau);
            let a = false_alarm(&p, &s, tau);
            let b = miss_detection(&p, &s, 0.65, tau);
            assert!((e.alpha.value - a).abs() <= 3.0 * (a * (1.0 - a) / 1e5).sqrt());
            assert!((e.beta.value - b).abs() <= 3.0 * (b * (1.0 - b) / 1e5).sqrt());
        }
    }

    #[test]
    fn h0_statistic_cdf() {
        let p = fig2();
        let s = SchemeConfig::ts(0.5).unwrap();
        let samples = StatisticSamples::draw(&p, &s, 0.7, 1_000_000, 21);
        let k0 = statistic_scale(&p, &s, p.eta0);
        let mut d: f64 = 0.0;
        let n = samples.len() as f64;
        for (i, &t) in samples.h0().iter().enumerate() {
            let f = 1.0 - (-((t - p.sigma2_a) / k0).max(0.0).sqrt() / p.lambda_ar).exp();
            d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
        }
        assert!(d <= 0.003, "KS distance {d}");
        assert!((samples.h0_cdf(p.sigma2_a + k0) - (1.0 - (-1.0f64).exp())).abs() < 0.005);
    }

    #[test]
    fn covert_rate_simulation() {
        let p = fig2();
        let s = SchemeConfig::ts(0.5).unwrap();
        let zero = simulate_covert_rate(&p, &s, p.eta0, 1000, 1).unwrap().rate.unwrap();
        assert_eq!(zero.value, 0.0);

        let r = simulate_covert_rate(&p, &s, 0.7, 1_000_000, 2).unwrap().rate.unwrap();
        let (c, _) = average_covert_rate(&p, &s, 0.7).unwrap();
        assert!(((r.value - c) / c).abs() < 0.02);

        let half = simulate_covert_rate(&p, &s, 0.7, 500_000, 2).unwrap().rate.unwrap();
        let ratio = r.ci_halfwidth / half.ci_halfwidth;
        assert!((ratio * 2f64.sqrt() - 1.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn reports_are_deterministic() {
        let p = fig2();
        let s = SchemeConfig::ps(0.3).unwrap();
        let a = simulate_detection(&p, &s, 0.7, 2e-11, 150_000, 77);
        let b = simulate_detection(&p, &s, 0.7, 2e-11, 150_000, 77);
        assert_eq!(a, b);
        let a = simulate_covert_rate(&p, &s, 0.7, 150_000, 77).unwrap();
        let b = simulate_covert_rate(&p, &s, 0.7, 150_000, 77).unwrap();
        assert_eq!(a, b);
        let c = simulate_covert_rate(&p, &s, 0.7, 150_000, 78).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn threshold_optimality_holds() {
        let p = fig2();
        assert!(validate_threshold_optimality(&p, &SchemeConfig::ts(0.5).unwrap(), 0.7, 10_000, 1).unwrap());
        assert!(validate_threshold_optimality(&p, &SchemeConfig::ts(0.5).unwrap(), 0.4 * 1.001, 2_000, 2).unwrap());
        assert!(validate_threshold_optimality(&p, &SchemeConfig::ps(0.9).unwrap(), 0.7, 2_000, 3).unwrap());
    }
}
