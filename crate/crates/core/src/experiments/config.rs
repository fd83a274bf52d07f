//! Parameter files.
//!
//! One `key = value` pair per line, `#` starts a comment. Keys are the [`SystemParams`]
//! field names plus `scheme` and `fraction`; values are in engineering units (dBm, MHz,
//! meters), converted to SI on load. Unlisted keys keep their defaults.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::covert_rate::optimize_harvest_fraction;
use crate::error::{Error, Result};
use crate::params::{dbm_to_watts, watts_to_dbm, Scheme, SchemeConfig, SystemParams};
use crate::rng::DEFAULT_SEED;

/// Monte Carlo blocks per run unless overridden.
pub const DEFAULT_MC_BLOCKS: usize = 1_000_000;

/// Harvesting fraction used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FractionChoice {
    Fixed(f64),
    /// Maximize the source's own effective rate under `H₀` for each parameter point.
    Auto,
}

impl FromStr for FractionChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(FractionChoice::Auto);
        }
        let f: f64 = s
            .parse()
            .map_err(|_| Error::domain("fraction", format!("`{s}` is neither a number nor `auto`")))?;
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::domain("fraction", format!("{f} must lie in (0, 1)")));
        }
        Ok(FractionChoice::Fixed(f))
    }
}

impl fmt::Display for FractionChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FractionChoice::Fixed(v) => write!(f, "{v}"),
            FractionChoice::Auto => f.write_str("auto"),
        }
    }
}

/// Which schemes an experiment covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    One(Scheme),
    Both,
}

impl SchemeChoice {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeChoice::One(s) => vec![s],
            SchemeChoice::Both => Scheme::ALL.to_vec(),
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("both") {
            Ok(SchemeChoice::Both)
        } else {
            s.parse().map(SchemeChoice::One)
        }
    }
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeChoice::One(s) => write!(f, "{s}"),
            SchemeChoice::Both => f.write_str("both"),
        }
    }
}

/// Everything an experiment needs besides its own grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: SystemParams,
    pub schemes: SchemeChoice,
    pub fraction: FractionChoice,
    pub seed: u64,
    pub mc_blocks: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            params: SystemParams::default(),
            schemes: SchemeChoice::Both,
            fraction: FractionChoice::Auto,
            seed: DEFAULT_SEED,
            mc_blocks: DEFAULT_MC_BLOCKS,
        }
    }
}

impl ExperimentConfig {
    /// Parses a parameter file; keys not present keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate key `{key}`"),
                });
            }
            let at_line = |e: Error| Error::Parse {
                line,
                message: e.to_string(),
            };
            match key {
                "scheme" => cfg.schemes = value.parse().map_err(at_line)?,
                "fraction" => cfg.fraction = value.parse().map_err(at_line)?,
                _ => {
                    let v: f64 = value.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("`{value}` is not a number for key `{key}`"),
                    })?;
                    set_param(&mut cfg.params, key, v).map_err(at_line)?;
                }
            }
            seen.push(key.to_string());
        }
        cfg.params.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Scheme configuration for `variant` at `params`, resolving `auto`.
    pub fn scheme_config(&self, params: &SystemParams, variant: Scheme) -> Result<SchemeConfig> {
        match self.fraction {
            FractionChoice::Fixed(f) => SchemeConfig::new(variant, f),
            FractionChoice::Auto => SchemeConfig::new(variant, optimize_harvest_fraction(params, variant)?),
        }
    }
}

/// Parameter keys in file order, with their units.
pub const PARAM_KEYS: [(&str, &str); 16] = [
    ("Pa", "dBm"),
    ("fc", "MHz"),
    ("m", "-"),
    ("d_ar", "m"),
    ("d_rb", "m"),
    ("lambda_ar", "-"),
    ("lambda_rb", "-"),
    ("sigma2_ra", "dBm"),
    ("sigma2_rc", "dBm"),
    ("sigma2_ba", "dBm"),
    ("sigma2_bc", "dBm"),
    ("sigma2_a", "dBm"),
    ("eta0", "-"),
    ("eta_u", "-"),
    ("epsilon", "-"),
    ("T_block", "s"),
];

/// Sets one parameter from its file-unit value. No range checks; call
/// [`SystemParams::validate`] afterwards.
pub fn set_param(params: &mut SystemParams, key: &str, value: f64) -> Result<()> {
    match key {
        "Pa" => params.pa = dbm_to_watts(value),
        "fc" => params.fc = value * 1e6,
        "m" => params.m = value,
        "d_ar" => params.d_ar = value,
        "d_rb" => params.d_rb = value,
        "lambda_ar" => params.lambda_ar = value,
        "lambda_rb" => params.lambda_rb = value,
        "sigma2_ra" => params.sigma2_ra = dbm_to_watts(value),
        "sigma2_rc" => params.sigma2_rc = dbm_to_watts(value),
        "sigma2_ba" => params.sigma2_ba = dbm_to_watts(value),
        "sigma2_bc" => params.sigma2_bc = dbm_to_watts(value),
        "sigma2_a" => params.sigma2_a = dbm_to_watts(value),
        "eta0" => params.eta0 = value,
        "eta_u" => params.eta_u = value,
        "epsilon" => params.epsilon = value,
        "T_block" => params.t_block = value,
        other => return Err(Error::domain("parameter key", format!("unknown key `{other}`"))),
    }
    Ok(())
}

/// Reads one parameter back in file units.
pub fn get_param(params: &SystemParams, key: &str) -> Result<f64> {
    Ok(match key {
        "Pa" => watts_to_dbm(params.pa),
        "fc" => params.fc / 1e6,
        "m" => params.m,
        "d_ar" => params.d_ar,
        "d_rb" => params.d_rb,
        "lambda_ar" => params.lambda_ar,
        "lambda_rb" => params.lambda_rb,
        "sigma2_ra" => watts_to_dbm(params.sigma2_ra),
        "sigma2_rc" => watts_to_dbm(params.sigma2_rc),
        "sigma2_ba" => watts_to_dbm(params.sigma2_ba),
        "sigma2_bc" => watts_to_dbm(params.sigma2_bc),
        "sigma2_a" => watts_to_dbm(params.sigma2_a),
        "eta0" => params.eta0,
        "eta_u" => params.eta_u,
        "epsilon" => params.epsilon,
        "T_block" => params.t_block,
        other => return Err(Error::domain("parameter key", format!("unknown key `{other}`"))),
    })
}

/// A parameter file holding the defaults, with units in the comments.
pub fn template() -> String {
    let cfg = ExperimentConfig::default();
    let notes = [
        ("Pa", "source transmit power"),
        ("fc", "carrier frequency"),
        ("m", "path-loss exponent"),
        ("d_ar", "source-relay distance"),
        ("d_rb", "relay-destination distance"),
        ("lambda_ar", "mean of |h_ar|^2"),
        ("lambda_rb", "mean of |h_rb|^2"),
        ("sigma2_ra", "relay antenna noise"),
        ("sigma2_rc", "relay conversion noise"),
        ("sigma2_ba", "destination antenna noise"),
        ("sigma2_bc", "destination conversion noise"),
        ("sigma2_a", "source receiver noise"),
        ("eta0", "baseline conversion efficiency, public"),
        ("eta_u", "hardware cap on the conversion efficiency"),
        ("epsilon", "covertness: require min detection error >= 1 - epsilon"),
        ("T_block", "block duration"),
    ];
    let mut out = String::from(
        "# covert-relay parameter file\n\
         # one `key = value` per line; `#` starts a comment; omitted keys keep these defaults\n\
         # units: Pa and sigma2_* in dBm, fc in MHz, distances in m, T_block in s\n\n",
    );
    for ((key, unit), (_, note)) in PARAM_KEYS.iter().zip(notes) {
        let value = get_param(&cfg.params, key).expect("known key");
        out.push_str(&format!("# {note} [{unit}]\n{key} = {}\n", fmt_value(value)));
    }
    out.push_str("\n# ts, ps or both\nscheme = both\n");
    out.push_str("# harvesting fraction in (0, 1), phi for ts and rho for ps, or auto\nfraction = auto\n");
    out
}

fn fmt_value(v: f64) -> String {
    let r = (v * 1e9).round() / 1e9;
    format!("{r}")
}
