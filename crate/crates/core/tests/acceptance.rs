//! Acceptance suite. Each criterion prints one PASS or FAIL line with its measured value
//! and wall time; the process exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use covert_relay::covert_rate::{
    average_covert_rate, effective_covert_rate, max_effective_covert_rate, Binding,
};
use covert_relay::detection::{
    detection_error, false_alarm, min_detection_error, miss_detection, optimal_threshold, solve_phi_epsilon,
};
use covert_relay::experiments::recipes::{eta0_grid, FIG4_POINTS};
use covert_relay::experiments::{run_fig2, run_fig3, run_fig4, run_fig6, ExperimentConfig, Table};
use covert_relay::montecarlo::{simulate_covert_rate, simulate_detection};
use covert_relay::params::dbm_to_watts;
use covert_relay::relaying::RelayLink;
use covert_relay::rng::stream_rng;
use covert_relay::{ChannelDraw, Scheme, SchemeConfig, SystemParams};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    stream_rng(0x00ac_ce97, stream)
}

fn random_params(r: &mut ChaCha8Rng) -> SystemParams {
    let eta0 = r.random_range(0.15..0.6);
    SystemParams {
        pa: dbm_to_watts(r.random_range(0.0..30.0)),
        d_ar: r.random_range(2.0..18.0),
        d_rb: r.random_range(2.0..18.0),
        lambda_ar: r.random_range(0.5..2.0),
        lambda_rb: r.random_range(0.5..2.0),
        eta0,
        eta_u: r.random_range(eta0 + 0.05..0.95),
        ..SystemParams::default()
    }
}

fn random_scheme(r: &mut ChaCha8Rng, variant: Scheme) -> SchemeConfig {
    SchemeConfig::new(variant, r.random_range(0.05..0.95)).unwrap()
}

/// Least closed-form error on `n` log-spaced threshold offsets spanning twelve decades
/// around `τ*`.
fn grid_minimum(params: &SystemParams, scheme: &SchemeConfig, eta1: f64, n: usize) -> f64 {
    let span = optimal_threshold(params, scheme, eta1).unwrap() - params.sigma2_a;
    (0..n)
        .map(|i| {
            let u = -6.0 + 12.0 * i as f64 / (n - 1) as f64;
            detection_error(params, scheme, eta1, params.sigma2_a + span * 10f64.powf(u)).xi
        })
        .fold(f64::INFINITY, f64::min)
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let phi = r.random_range(0.05..0.95);
        let eta1 = 0.85;
        let params = SystemParams {
            eta0: phi * eta1,
            eta_u: 0.9,
            ..SystemParams::default()
        };
        let closed = min_detection_error(phi).unwrap();
        for variant in Scheme::ALL {
            let scheme = random_scheme(&mut r, variant);
            worst = worst.max((closed - grid_minimum(&params, &scheme, eta1, 1_000_000)).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |xi* - grid min| = {worst:.2e} (tol 1e-6)"))
}

fn marker_rows(t: &Table) -> Vec<usize> {
    let i = t.output_index("marker").unwrap();
    (0..t.rows.len()).filter(|&k| t.rows[k].values[i].as_str() == Some("tau_star")).collect()
}

fn criterion_2() -> Outcome {
    let cfg = ExperimentConfig::default();
    let t = run_fig2(&cfg).unwrap();
    let (xi, mc) = (t.numbers("xi"), t.numbers("xi_mc"));
    let marks = marker_rows(&t);
    let minima: Vec<f64> = marks.iter().map(|&k| xi[k]).collect();
    let star_gap = marks.iter().map(|&k| (mc[k] - xi[k]).abs()).fold(0.0, f64::max);
    let curve_gap = xi.iter().zip(&mc).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let equal = (minima[0] - minima[1]).abs();
    let ok = marks.len() == 2
        && (minima[0] - 0.8974).abs() < 5e-5
        && star_gap <= 0.005
        && curve_gap <= 0.005
        && equal <= 1e-10;
    outcome(
        ok,
        format!(
            "xi* = {:.6}, |MC - closed| at tau* = {star_gap:.2e}, on curve = {curve_gap:.2e}, |TS - PS| = {equal:.1e}",
            minima[0]
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let n = 100_000;
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let params = random_params(&mut r);
        let variant = Scheme::ALL[k % 2];
        let scheme = random_scheme(&mut r, variant);
        let eta1 = r.random_range(params.eta0..params.eta_u) + 1e-3 * (params.eta_u - params.eta0);
        let eta1 = eta1.min(params.eta_u);
        let tau_star = optimal_threshold(&params, &scheme, eta1).unwrap();
        let tau = params.sigma2_a + r.random_range(0.2..5.0) * (tau_star - params.sigma2_a);
        let d = simulate_detection(&params, &scheme, eta1, tau, n, 1000 + k as u64).detection.unwrap();
        let a = false_alarm(&params, &scheme, tau);
        let b = miss_detection(&params, &scheme, eta1, tau);
        for (hat, p) in [(d.alpha.value, a), (d.beta.value, b)] {
            let se = (p * (1.0 - p) / n as f64).sqrt();
            worst = worst.max((hat - p).abs() / se);
        }
    }
    outcome(worst <= 3.0, format!("max |empirical - closed| = {worst:.2} standard errors (tol 3)"))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let (mut energy, mut snr): (f64, f64) = (0.0, 0.0);
    for variant in Scheme::ALL {
        for _ in 0..10_000 {
            let params = random_params(&mut r);
            let scheme = random_scheme(&mut r, variant);
            let link = RelayLink::new(&params, &scheme);
            let eta1 = r.random_range(params.eta0..=params.eta_u);
            let d = ChannelDraw::sample(&mut r, &params);
            let a = link.allocate(eta1, &d).unwrap();
            let total = link.harvested_power(eta1, d.g_ar);
            energy = energy.max(((a.pr1 + a.prc - total) / total).abs());
            let (g0, g1) = (link.snr_h0(&d), link.sinr_h1_unchecked(eta1, &d));
            snr = snr.max(((g1 - g0) / g0).abs());
        }
    }
    outcome(
        energy <= 1e-12 && snr <= 1e-10,
        format!("power split {energy:.1e} (tol 1e-12), snr H0 vs H1 {snr:.1e} (tol 1e-10)"),
    )
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for variant in Scheme::ALL {
        for k in 0..10 {
            let params = random_params(&mut r);
            let scheme = random_scheme(&mut r, variant);
            let eta1 = r.random_range(params.eta0..params.eta_u) + 0.5 * (params.eta_u - params.eta0);
            let eta1 = eta1.min(params.eta_u);
            let (c, _) = average_covert_rate(&params, &scheme, eta1).unwrap();
            let mc = simulate_covert_rate(&params, &scheme, eta1, 1_000_000, 500 + k).unwrap().rate.unwrap();
            worst = worst.max(((c - mc.value) / c).abs());
        }
    }
    outcome(worst <= 0.02, format!("max relative gap = {worst:.2e} (tol 2e-2)"))
}

fn criterion_6() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for (eps, expect_binding) in [(0.1, Binding::Covertness), (0.2, Binding::HarvesterCap)] {
        let params = SystemParams {
            epsilon: eps,
            ..SystemParams::default()
        };
        let ts = max_effective_covert_rate(&params, &SchemeConfig::ts(0.5).unwrap()).unwrap();
        let ps = max_effective_covert_rate(&params, &SchemeConfig::ps(0.5).unwrap()).unwrap();
        let target = if expect_binding == Binding::Covertness { 0.690 } else { 0.8 };
        let tol = if expect_binding == Binding::Covertness { 5e-4 } else { 1e-15 };
        ok &= ts.binding == expect_binding
            && ps.binding == expect_binding
            && (ts.eta1_star - target).abs() <= tol
            && (ts.eta1_star - ps.eta1_star).abs() <= 1e-12;
        detail.push(format!("eps {eps}: eta1* = {:.6} ({})", ts.eta1_star, ts.binding));
    }
    outcome(ok, detail.join(", "))
}

fn criterion_7() -> Outcome {
    let cfg = ExperimentConfig::default();
    let t = run_fig4(&cfg).unwrap();
    let eta_u = cfg.params.eta_u;
    let grid = eta0_grid(eta_u, FIG4_POINTS);
    let step = grid[1] - grid[0];
    let psi = t.numbers("psi_star");
    let ib = t.output_index("binding").unwrap();
    let mut ok = true;
    let (mut kink_err, mut ends, mut post): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for variant in Scheme::ALL {
        let series = |eps: f64| -> Vec<usize> {
            (0..t.rows.len())
                .filter(|&k| t.rows[k].scheme == Some(variant) && t.rows[k].params.epsilon == eps)
                .collect()
        };
        for eps in [0.1, 0.2] {
            let rows = series(eps);
            let switch = rows
                .iter()
                .position(|&k| t.rows[k].values[ib].as_str() == Some("harvester-cap"))
                .expect("binding switch on the grid");
            let after_switch = rows[switch..]
                .iter()
                .all(|&k| t.rows[k].values[ib].as_str() == Some("harvester-cap"));
            let dagger = solve_phi_epsilon(eps).unwrap() * eta_u;
            kink_err = kink_err.max((grid[switch] - dagger).abs() / step);
            ends = ends.max(psi[rows[0]]).max(psi[*rows.last().unwrap()]);
            ok &= after_switch && switch > 0;
        }
        let (a, b) = (series(0.1), series(0.2));
        for (&ka, &kb) in a.iter().zip(&b) {
            if t.rows[ka].values[ib].as_str() == Some("harvester-cap") {
                post = post.max((psi[ka] - psi[kb]).abs());
            }
        }
    }
    ok &= kink_err <= 1.0 && ends <= 1e-6 && post <= 1e-9;
    outcome(
        ok,
        format!("kink offset {kink_err:.2} steps, end values <= {ends:.1e}, post-kink gap {post:.1e}"),
    )
}

fn criterion_8() -> Outcome {
    let cfg = ExperimentConfig::default();
    let fig3 = run_fig3(&cfg).unwrap();
    let psi = fig3.numbers("psi_star");
    let mut monotone = true;
    let mut ps_wins = true;
    let eta0s: Vec<f64> = covert_relay::experiments::recipes::FIG3_ETA0.to_vec();
    for &eta0 in &eta0s {
        let pick = |v: Scheme| -> Vec<usize> {
            (0..fig3.rows.len())
                .filter(|&k| fig3.rows[k].scheme == Some(v) && fig3.rows[k].params.eta0 == eta0)
                .collect()
        };
        for v in Scheme::ALL {
            let rows = pick(v);
            monotone &= rows.len() == 15 && rows.windows(2).all(|w| psi[w[1]] >= psi[w[0]]);
        }
        let at20 = |v: Scheme| {
            pick(v)
                .into_iter()
                .find(|&k| (fig3.rows[k].params.pa - dbm_to_watts(20.0)).abs() < 1e-12)
                .map(|k| psi[k])
                .unwrap()
        };
        ps_wins &= at20(Scheme::PowerSplitting) >= at20(Scheme::TimeSwitching);
    }

    let fig6 = run_fig6(&cfg).unwrap();
    let psi6 = fig6.numbers("psi_star");
    let mut interior = true;
    for pa in covert_relay::experiments::recipes::FIG6_PA_DBM {
        for v in Scheme::ALL {
            let series: Vec<f64> = (0..fig6.rows.len())
                .filter(|&k| fig6.rows[k].scheme == Some(v) && (fig6.rows[k].params.pa - dbm_to_watts(pa)).abs() < 1e-12)
                .map(|k| psi6[k])
                .collect();
            let argmin = (0..series.len()).fold(0, |b, i| if series[i] < series[b] { i } else { b });
            interior &= argmin > 0 && argmin + 1 < series.len();
        }
    }
    outcome(
        monotone && ps_wins && interior,
        format!("fig3 non-decreasing: {monotone}, PS >= TS at 20 dBm: {ps_wins}, fig6 interior minimum: {interior}"),
    )
}

fn criterion_9() -> Outcome {
    let xi: Vec<f64> = (0..1000)
        .map(|i| min_detection_error((i as f64 + 0.5) / 1000.0).unwrap())
        .collect();
    let xi_ok = xi.windows(2).all(|w| w[1] > w[0]);
    let mut r = rng(9);
    let mut psi_ok = true;
    for variant in Scheme::ALL {
        for _ in 0..5 {
            let params = random_params(&mut r);
            let scheme = random_scheme(&mut r, variant);
            let psi: Vec<f64> = (0..20)
                .map(|i| {
                    let eta1 = params.eta0 + (params.eta_u - params.eta0) * i as f64 / 19.0;
                    effective_covert_rate(&params, &scheme, eta1).unwrap().psi
                })
                .collect();
            psi_ok &= psi.windows(2).all(|w| w[1] > w[0]);
        }
    }
    outcome(xi_ok && psi_ok, format!("xi* increasing: {xi_ok}, psi increasing in eta1: {psi_ok}"))
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_covert-relay");
    let recipes: [&[&str]; 8] = [
        &["fig2"],
        &["fig3"],
        &["fig4"],
        &["fig5"],
        &["fig6"],
        &["sweep", "--param", "d_ar", "--from", "2", "--to", "18", "--points", "9"],
        &["validate", "--mc-blocks", "200000"],
        &["fig2", "--seed", "7", "--scheme", "ps", "--fraction", "0.3"],
    ];
    let mut differing = Vec::new();
    for args in recipes {
        let run = || {
            let out = Command::new(bin).args(args).output().expect("binary runs");
            assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
            out.stdout
        };
        if run() != run() {
            differing.push(args.join(" "));
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} recipes rerun, differing: {:?}", recipes.len(), differing),
    )
}

/// Number, name, check and optional time budget in seconds.
type Criterion = (u32, &'static str, fn() -> Outcome, Option<u64>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "minimum detection error vs threshold-grid minimum", criterion_1, Some(60)),
        (2, "detection-error figure at eta1 = 0.7", criterion_2, Some(30)),
        (3, "false alarm and miss detection vs Monte Carlo", criterion_3, Some(60)),
        (4, "power-allocation invariants", criterion_4, Some(10)),
        (5, "rate quadrature vs Monte Carlo", criterion_5, Some(120)),
        (6, "optimal efficiency case split", criterion_6, None),
        (7, "efficiency-sweep kink and limits", criterion_7, None),
        (8, "qualitative figure shapes", criterion_8, None),
        (9, "monotonicity suites", criterion_9, None),
        (10, "byte-identical CSV on rerun", criterion_10, None),
    ];
    let mut failed = 0;
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= Duration::from_secs(b));
        let passed = out.passed && in_time;
        if !passed {
            failed += 1;
        }
        let limit = budget.map_or(String::new(), |b| format!(" / {b} s"));
        println!(
            "{} criterion {id:>2} ({name}): {} [{:.1} s{limit}]",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
