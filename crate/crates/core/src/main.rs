use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use covert_relay::experiments::{execute, ExperimentConfig, Fault, FractionChoice, SchemeChoice, Sweep, Task};
use covert_relay::Error;

/// Covert transmission with an energy-harvesting relay: figure sweeps and self-checks.
///
/// Output is CSV, written to stdout unless `--out` is given. Exit status is 0 on success,
/// 1 when validation fails and 2 on usage, parse or parameter errors.
#[derive(Debug, Parser)]
#[command(name = "covert-relay", version)]
struct Cli {
    /// Parameter file (`key = value` lines); see `config-template`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed of the Monte Carlo streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo blocks per estimate.
    #[arg(long, global = true)]
    mc_blocks: Option<usize>,
    /// ts, ps or both.
    #[arg(long, global = true)]
    scheme: Option<SchemeChoice>,
    /// Harvesting fraction in (0, 1), or `auto`.
    #[arg(long, global = true)]
    fraction: Option<FractionChoice>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a parameter file holding the defaults.
    ConfigTemplate,
    /// Detection error against the warden's threshold.
    Fig2,
    /// Maximum effective covert rate against the source power.
    Fig3,
    /// Maximum effective covert rate against the baseline efficiency.
    Fig4,
    /// System overhead against the baseline efficiency.
    Fig5,
    /// Maximum effective covert rate against the relay position.
    Fig6,
    /// Maximum effective covert rate over a grid of one parameter (file units).
    Sweep {
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Logarithmic instead of linear spacing.
        #[arg(long)]
        log: bool,
    },
    /// Check the closed forms against their oracles.
    Validate {
        /// Shift the closed-form minimum detection error to exercise the failure path.
        #[arg(long, hide = true)]
        inject_fault: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<bool, Error> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = cli.mc_blocks {
        cfg.mc_blocks = n;
    }
    if let Some(s) = cli.scheme {
        cfg.schemes = s;
    }
    if let Some(f) = cli.fraction {
        cfg.fraction = f;
    }
    let task = match cli.command {
        Command::ConfigTemplate => Task::ConfigTemplate,
        Command::Fig2 => Task::Fig2,
        Command::Fig3 => Task::Fig3,
        Command::Fig4 => Task::Fig4,
        Command::Fig5 => Task::Fig5,
        Command::Fig6 => Task::Fig6,
        Command::Sweep { param, from, to, points, log } => Task::Sweep(Sweep {
            key: param,
            from,
            to,
            points,
            log,
        }),
        Command::Validate { inject_fault } => Task::Validate(inject_fault.map(Fault::ShiftMinDetectionError)),
    };
    let outcome = execute(&task, &cfg)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome.success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
