//! Named sweeps behind the figure subcommands, plus a generic one-parameter sweep.
//!
//! Grid points are evaluated in parallel and collected in grid order. With
//! `fraction = auto` the harvesting fraction is re-optimized at every grid point.

use rayon::prelude::*;

use crate::covert_rate::max_effective_covert_rate;
use crate::detection::{detection_error, min_detection_error, optimal_threshold};
use crate::error::{Error, Result};
use crate::montecarlo::StatisticSamples;
use crate::params::{dbm_to_watts, Scheme, SchemeConfig, SystemParams};

use super::config::{get_param, set_param, ExperimentConfig};
use super::table::{Cell, SweepRow, Table};

/// `η₁` of the detection-error recipe.
pub const FIG2_ETA1: f64 = 0.7;
/// Thresholds in the detection-error recipe.
pub const FIG2_POINTS: usize = 300;
/// Source powers of the power sweep, dBm.
pub const FIG3_PA_DBM: [f64; 15] = [
    -10.0, -7.0, -4.0, -1.0, 2.0, 5.0, 8.0, 11.0, 14.0, 17.0, 20.0, 23.0, 26.0, 29.0, 32.0,
];
/// Baseline efficiencies of the power sweep.
pub const FIG3_ETA0: [f64; 2] = [0.2, 0.4];
/// Covertness levels of the efficiency sweeps.
pub const FIG4_EPSILON: [f64; 3] = [0.1, 0.2, 0.3];
/// Points of the `η₀` grid, which runs from `η_u·10⁻⁹` to `η_u(1 − 10⁻⁹)`.
pub const FIG4_POINTS: usize = 200;
/// Source powers of the distance sweep, dBm.
pub const FIG6_PA_DBM: [f64; 2] = [10.0, 20.0];
/// Relay positions of the distance sweep, m.
pub const FIG6_D_AR: [f64; 17] = [
    2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0,
];
/// Source-destination distance kept fixed by the distance sweep, m.
pub const FIG6_TOTAL_DISTANCE: f64 = 20.0;

/// Output columns of every rate sweep.
pub const RATE_COLUMNS: [&str; 6] = ["eta1_star", "phi_eps", "psi_star", "c_avg", "quad_error", "binding"];

fn rate_table() -> Table {
    Table::new(RATE_COLUMNS.to_vec())
}

fn rate_row(cfg: &ExperimentConfig, params: &SystemParams, variant: Scheme) -> Result<SweepRow> {
    let scheme = cfg.scheme_config(params, variant)?;
    let out = max_effective_covert_rate(params, &scheme)?;
    Ok(SweepRow::new(
        params,
        Some(&scheme),
        vec![
            out.eta1_star.into(),
            out.phi_epsilon.into(),
            out.psi_star.into(),
            out.rate.c_avg.into(),
            out.rate.quad_error.into(),
            Cell::text(out.binding.label()),
        ],
    ))
}

/// Evaluates `points × schemes` in parallel, scheme-major within each point.
fn rate_sweep(cfg: &ExperimentConfig, points: Vec<SystemParams>) -> Result<Table> {
    let schemes = cfg.schemes.schemes();
    let jobs: Vec<(SystemParams, Scheme)> = points
        .into_iter()
        .flat_map(|p| schemes.iter().map(move |&s| (p, s)))
        .collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|(p, s)| {
            p.validate()?;
            rate_row(cfg, p, *s)
        })
        .collect::<Result<_>>()?;
    let mut table = rate_table();
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// `n` log-spaced thresholds from `σ²_a/2` to `σ²_a + 10³·max(τ* − σ²_a)`.
pub fn fig2_threshold_grid(params: &SystemParams, tau_stars: &[f64], n: usize) -> Vec<f64> {
    let widest = tau_stars.iter().map(|t| t - params.sigma2_a).fold(0.0, f64::max);
    let lo = (0.5 * params.sigma2_a).ln();
    let hi = (params.sigma2_a + 1e3 * widest).ln();
    (0..n)
        .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Detection error against the threshold at `η₁ = 0.7`: closed form and Monte Carlo for
/// each scheme, then one `tau_star` marker row per scheme.
pub fn run_fig2(cfg: &ExperimentConfig) -> Result<Table> {
    let params = &cfg.params;
    params.validate()?;
    if FIG2_ETA1 > params.eta_u || FIG2_ETA1 <= params.eta0 {
        return Err(Error::domain(
            "detection-error recipe",
            format!("needs eta0 < {FIG2_ETA1} <= eta_u"),
        ));
    }
    let schemes: Vec<SchemeConfig> = cfg
        .schemes
        .schemes()
        .into_iter()
        .map(|v| cfg.scheme_config(params, v))
        .collect::<Result<_>>()?;
    let tau_stars: Vec<f64> = schemes
        .iter()
        .map(|s| optimal_threshold(params, s, FIG2_ETA1))
        .collect::<Result<_>>()?;
    let grid = fig2_threshold_grid(params, &tau_stars, FIG2_POINTS);

    let mut table = Table::new(vec!["tau", "alpha", "beta", "xi", "xi_mc", "xi_mc_ci", "marker"]);
    for (scheme, &tau_star) in schemes.iter().zip(&tau_stars) {
        let samples = StatisticSamples::draw(params, scheme, FIG2_ETA1, cfg.mc_blocks.max(1), cfg.seed);
        let row = |tau: f64, marker: &str| {
            let exact = detection_error(params, scheme, FIG2_ETA1, tau);
            let mc = samples.evaluate(tau);
            SweepRow::new(
                params,
                Some(scheme),
                vec![
                    tau.into(),
                    exact.alpha.into(),
                    exact.beta.into(),
                    exact.xi.into(),
                    mc.xi.value.into(),
                    mc.xi.ci_halfwidth.into(),
                    Cell::text(marker),
                ],
            )
        };
        let rows: Vec<SweepRow> = grid.par_iter().map(|&t| row(t, "")).collect();
        rows.into_iter().for_each(|r| table.push(r));
        table.push(row(tau_star, "tau_star"));
    }
    Ok(table)
}

/// `Ψ*` against the source power for each baseline efficiency in [`FIG3_ETA0`], `ε = 0.1`.
pub fn run_fig3(cfg: &ExperimentConfig) -> Result<Table> {
    let mut points = Vec::new();
    for eta0 in FIG3_ETA0 {
        for pa in FIG3_PA_DBM {
            let mut p = cfg.params;
            p.eta0 = eta0;
            p.epsilon = 0.1;
            p.pa = dbm_to_watts(pa);
            points.push(p);
        }
    }
    rate_sweep(cfg, points)
}

/// The `η₀` grid shared by the efficiency sweeps.
pub fn eta0_grid(eta_u: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = (eta_u * 1e-9, eta_u * (1.0 - 1e-9));
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn eta0_points(cfg: &ExperimentConfig) -> Vec<SystemParams> {
    let mut points = Vec::new();
    for eps in FIG4_EPSILON {
        for eta0 in eta0_grid(cfg.params.eta_u, FIG4_POINTS) {
            let mut p = cfg.params;
            p.epsilon = eps;
            p.eta0 = eta0;
            p.pa = dbm_to_watts(20.0);
            points.push(p);
        }
    }
    points
}

/// `Ψ*` against `η₀` for each `ε` in [`FIG4_EPSILON`], `P_a = 20 dBm`.
pub fn run_fig4(cfg: &ExperimentConfig) -> Result<Table> {
    rate_sweep(cfg, eta0_points(cfg))
}

/// System overhead `φ = η₀/η₁*` on the grid of [`run_fig4`]. Scheme independent.
pub fn run_fig5(cfg: &ExperimentConfig) -> Result<Table> {
    let rows: Vec<SweepRow> = eta0_points(cfg)
        .par_iter()
        .map(|p| {
            p.validate()?;
            let opt = crate::covert_rate::optimal_eta1(p)?;
            Ok(SweepRow::new(
                p,
                None,
                vec![
                    opt.eta1_star.into(),
                    (p.eta0 / opt.eta1_star).into(),
                    opt.phi_epsilon.into(),
                    Cell::text(opt.binding.label()),
                ],
            ))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(vec!["eta1_star", "phi", "phi_eps", "binding"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// `Ψ*` against the relay position with `d_ar + d_rb = 20 m`, for each power in
/// [`FIG6_PA_DBM`].
pub fn run_fig6(cfg: &ExperimentConfig) -> Result<Table> {
    let mut points = Vec::new();
    for pa in FIG6_PA_DBM {
        for d in FIG6_D_AR {
            let mut p = cfg.params;
            p.pa = dbm_to_watts(pa);
            p.d_ar = d;
            p.d_rb = FIG6_TOTAL_DISTANCE - d;
            points.push(p);
        }
    }
    rate_sweep(cfg, points)
}

/// A linear or logarithmic grid over one parameter, in file units.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub log: bool,
}

impl Sweep {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::domain("sweep", "needs at least one point"));
        }
        if self.log && !(self.from > 0.0 && self.to > 0.0) {
            return Err(Error::domain("sweep", "a logarithmic grid needs positive end points"));
        }
        if self.points == 1 {
            return Ok(vec![self.from]);
        }
        let n = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                let t = i as f64 / n;
                if self.log {
                    (self.from.ln() + (self.to.ln() - self.from.ln()) * t).exp()
                } else {
                    self.from + (self.to - self.from) * t
                }
            })
            .collect())
    }
}

/// Rate outputs plus the optimal threshold and minimum detection error at `η₁*`, over
/// one swept parameter.
pub fn run_sweep(cfg: &ExperimentConfig, sweep: &Sweep) -> Result<Table> {
    get_param(&cfg.params, &sweep.key)?;
    let points: Vec<SystemParams> = sweep
        .values()?
        .into_iter()
        .map(|v| {
            let mut p = cfg.params;
            set_param(&mut p, &sweep.key, v)?;
            Ok(p)
        })
        .collect::<Result<_>>()?;
    let rates = rate_sweep(cfg, points)?;
    let i_eta1 = rates.output_index("eta1_star").expect("rate column");
    let mut outputs = rates.outputs.clone();
    outputs.extend(["tau_star", "xi_star"]);
    let mut table = Table::new(outputs);
    for mut row in rates.rows {
        let eta1 = row.values[i_eta1].as_f64().expect("numeric eta1");
        let scheme = SchemeConfig::new(row.scheme.expect("rate rows carry a scheme"), row.fraction.expect("fraction"))?;
        let (tau, xi) = if eta1 > row.params.eta0 {
            (
                Some(optimal_threshold(&row.params, &scheme, eta1)?),
                Some(min_detection_error(row.params.eta0 / eta1)?),
            )
        } else {
            (None, Some(1.0))
        };
        row.values.push(tau.into());
        row.values.push(xi.into());
        table.push(row);
    }
    Ok(table)
}
