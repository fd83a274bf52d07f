//! Self-check of the closed forms against independent oracles at one parameter point.

use std::io::Write;

use rand::Rng;

use crate::covert_rate::{effective_covert_rate, optimal_eta1, Binding};
use crate::detection::{
    detection_error, false_alarm, min_detection_error, miss_detection, optimal_threshold,
};
use crate::error::Result;
use crate::montecarlo::{simulate_covert_rate, validate_threshold_optimality, StatisticSamples};
use crate::params::{ChannelDraw, SchemeConfig, SystemParams};
use crate::relaying::RelayLink;
use crate::rng::{stream_id, stream_rng};

use super::config::ExperimentConfig;
use super::table::format_float;

/// Random tuples per algebraic check.
const ALGEBRA_DRAWS: usize = 1000;
/// Points of the threshold grid used against the closed-form minimum.
const GRID_POINTS: usize = 100_000;
/// `η₁` used by the detection checks when `η₁*` equals `η₀`.
const FALLBACK_ETA1_SHARE: f64 = 0.75;

/// Deliberate corruption of a closed form, used to prove the report can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fault {
    /// Adds the given amount to every closed-form minimum detection error.
    ShiftMinDetectionError(f64),
}

/// One line of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Scheme label, or empty for scheme-independent checks.
    pub scheme: String,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "scheme", "measured", "tolerance", "status"])?;
        for c in &self.checks {
            w.write_record([
                c.name,
                c.scheme.as_str(),
                &format_float(c.measured),
                &format_float(c.tolerance),
                if c.passed() { "pass" } else { "FAIL" },
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

struct Ctx<'a> {
    params: &'a SystemParams,
    shift: f64,
}

impl Ctx<'_> {
    fn xi_star(&self, phi: f64) -> Result<f64> {
        Ok(min_detection_error(phi)? + self.shift)
    }
}

/// Runs every check at `cfg.params` for each configured scheme.
pub fn run_validate(cfg: &ExperimentConfig, fault: Option<Fault>) -> Result<ValidationReport> {
    let params = &cfg.params;
    params.validate()?;
    let ctx = Ctx {
        params,
        shift: match fault {
            Some(Fault::ShiftMinDetectionError(d)) => d,
            None => 0.0,
        },
    };
    let opt = optimal_eta1(params)?;
    let eta1 = if opt.eta1_star > params.eta0 {
        opt.eta1_star
    } else {
        params.eta0 + FALLBACK_ETA1_SHARE * (params.eta_u - params.eta0).max(1e-3 * params.eta0)
    };
    let mut checks = vec![case_split(&ctx, opt.binding, opt.eta1_star)?, phi_epsilon_root(&ctx)?];

    let mut minima = Vec::new();
    for (i, variant) in cfg.schemes.schemes().into_iter().enumerate() {
        let scheme = cfg.scheme_config(params, variant)?;
        let label = variant.label().to_string();
        let seed = cfg.seed.wrapping_add(i as u64);
        let tau = optimal_threshold(params, &scheme, eta1)?;
        minima.push(detection_error(params, &scheme, eta1, tau).xi);

        let mut push = |name: &'static str, measured: f64, tolerance: f64| {
            checks.push(Check {
                name,
                scheme: label.clone(),
                measured,
                tolerance,
            })
        };
        push("xi_star_vs_threshold_grid", xi_star_vs_grid(&ctx, &scheme, eta1, tau)?, 1e-6);
        let (energy, snr, q_form) = algebra(&ctx, &scheme, eta1, seed);
        push("power_split_conservation", energy, 1e-12);
        push("h0_h1_snr_equal", snr, 1e-10);
        push("covert_snr_q_form", q_form, 1e-12);

        let samples = StatisticSamples::draw(params, &scheme, eta1, cfg.mc_blocks.max(1), seed);
        let at_star = samples.evaluate(tau).xi.value;
        push("mc_xi_at_tau_star", (at_star - ctx.xi_star(params.eta0 / eta1)?).abs(), 0.005);
        let mut worst_z: f64 = 0.0;
        for mult in [0.3, 1.0, 3.0] {
            let t = params.sigma2_a + mult * (tau - params.sigma2_a);
            let e = samples.evaluate(t);
            let a = false_alarm(params, &scheme, t);
            let b = miss_detection(params, &scheme, eta1, t);
            let n = samples.len() as f64;
            for (hat, p) in [(e.alpha.value, a), (e.beta.value, b)] {
                let se = (p * (1.0 - p) / n).sqrt().max(1.0 / n);
                worst_z = worst_z.max((hat - p).abs() / se);
            }
        }
        push("mc_alpha_beta_std_errors", worst_z, 4.0);
        let optimal = validate_threshold_optimality(params, &scheme, eta1, 10_000, seed)?;
        push("threshold_optimality_violations", if optimal { 0.0 } else { 1.0 }, 0.0);

        let rate = effective_covert_rate(params, &scheme, eta1)?;
        push("rate_quadrature_convergence", rate.quad_error, crate::covert_rate::QUAD_TOLERANCE);
        let mc = simulate_covert_rate(params, &scheme, eta1, cfg.mc_blocks.max(1), seed)?
            .rate
            .expect("rate estimate");
        let rel = if rate.c_avg > 0.0 { ((mc.value - rate.c_avg) / rate.c_avg).abs() } else { mc.value };
        push("rate_quadrature_vs_mc", rel, 0.02);
    }
    if minima.len() == 2 {
        checks.push(Check {
            name: "ts_ps_minimum_equal",
            scheme: String::new(),
            measured: (minima[0] - minima[1]).abs(),
            tolerance: 1e-10,
        });
    }
    Ok(ValidationReport { checks })
}

/// The covertness constraint holds at `η₁*`, with equality when it binds.
fn case_split(ctx: &Ctx, binding: Binding, eta1_star: f64) -> Result<Check> {
    let p = ctx.params;
    let target = 1.0 - p.epsilon;
    let measured = if eta1_star <= p.eta0 {
        0.0
    } else {
        let xi = ctx.xi_star(p.eta0 / eta1_star)?;
        match binding {
            Binding::Covertness => (xi - target).abs(),
            Binding::HarvesterCap => (target - xi).max(0.0),
        }
    };
    Ok(Check {
        name: "eta1_star_covertness",
        scheme: String::new(),
        measured,
        tolerance: 1e-9,
    })
}

fn phi_epsilon_root(ctx: &Ctx) -> Result<Check> {
    let eps = ctx.params.epsilon;
    let measured = if eps > 0.0 && eps < 1.0 {
        let phi = crate::detection::solve_phi_epsilon(eps)?;
        (ctx.xi_star(phi)? - (1.0 - eps)).abs()
    } else {
        0.0
    };
    Ok(Check {
        name: "phi_epsilon_root",
        scheme: String::new(),
        measured,
        tolerance: 1e-9,
    })
}

/// Gap between the closed-form minimum and the least closed-form error on a log grid of
/// threshold offsets spanning twelve decades around `τ*`.
fn xi_star_vs_grid(ctx: &Ctx, scheme: &SchemeConfig, eta1: f64, tau: f64) -> Result<f64> {
    let p = ctx.params;
    let span = tau - p.sigma2_a;
    let grid_min = (0..GRID_POINTS)
        .map(|i| {
            let u = -6.0 + 12.0 * i as f64 / (GRID_POINTS - 1) as f64;
            detection_error(p, scheme, eta1, p.sigma2_a + span * 10f64.powf(u)).xi
        })
        .fold(f64::INFINITY, f64::min);
    Ok((ctx.xi_star(p.eta0 / eta1)? - grid_min).abs())
}

/// Worst relative errors of the per-realization identities over random draws.
fn algebra(ctx: &Ctx, scheme: &SchemeConfig, eta1_max: f64, seed: u64) -> (f64, f64, f64) {
    let p = ctx.params;
    let link = RelayLink::new(p, scheme);
    let mut rng = stream_rng(seed, stream_id(u32::MAX, 0));
    let (mut energy, mut snr, mut q): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..ALGEBRA_DRAWS {
        let d = ChannelDraw::sample(&mut rng, p);
        let eta1 = p.eta0 + rng.random::<f64>() * (eta1_max - p.eta0);
        let a = link.allocate_unchecked(eta1, &d);
        let total = link.harvested_power(eta1, d.g_ar);
        if total > 0.0 {
            energy = energy.max(((a.pr1 + a.prc - total) / total).abs());
        }
        let (g0, g1) = (link.snr_h0(&d), link.sinr_h1_unchecked(eta1, &d));
        if g0 > 0.0 {
            snr = snr.max(((g1 - g0) / g0).abs());
        }
        let (c, cq) = (link.covert_snr_unchecked(eta1, &d), link.covert_snr_q_form(eta1, &d));
        if c > 0.0 {
            q = q.max(((cq - c) / c).abs());
        }
    }
    (energy, snr, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ExperimentConfig {
        ExperimentConfig {
            mc_blocks: 200_000,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn defaults_pass() {
        let r = run_validate(&quick(), None).unwrap();
        for c in &r.checks {
            assert!(c.passed(), "{c:?}");
        }
        let csv = r.to_csv_string().unwrap();
        assert!(csv.starts_with("check,scheme,measured,tolerance,status\n"));
        assert_eq!(csv.lines().count(), r.checks.len() + 1);
    }

    #[test]
    fn injected_fault_fails() {
        let r = run_validate(&quick(), Some(Fault::ShiftMinDetectionError(1e-3))).unwrap();
        assert!(!r.passed());
        assert!(r.to_csv_string().unwrap().contains("FAIL"));
    }
}
