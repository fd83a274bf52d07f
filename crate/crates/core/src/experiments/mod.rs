//! Experiment layer: parameter files, sweep recipes, CSV output and the validation report.
//!
//! Every recipe is a pure function of an [`ExperimentConfig`]; the same configuration and
//! seed always produce the same bytes.

pub mod config;
pub mod recipes;
pub mod table;
pub mod validate;

pub use config::{ExperimentConfig, FractionChoice, SchemeChoice};
pub use recipes::{run_fig2, run_fig3, run_fig4, run_fig5, run_fig6, run_sweep, Sweep};
pub use table::{Cell, SweepRow, Table};
pub use validate::{run_validate, Check, Fault, ValidationReport};

use crate::error::Result;

/// Something the experiment runner can do.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    ConfigTemplate,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Sweep(Sweep),
    Validate(Option<Fault>),
}

/// Text produced by a task and whether it succeeded. Only validation can fail without
/// an error.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

pub fn execute(task: &Task, cfg: &ExperimentConfig) -> Result<Outcome> {
    let table = match task {
        Task::ConfigTemplate => {
            return Ok(Outcome {
                text: config::template(),
                success: true,
            })
        }
        Task::Validate(fault) => {
            let report = run_validate(cfg, *fault)?;
            return Ok(Outcome {
                success: report.passed(),
                text: report.to_csv_string()?,
            });
        }
        Task::Fig2 => run_fig2(cfg)?,
        Task::Fig3 => run_fig3(cfg)?,
        Task::Fig4 => run_fig4(cfg)?,
        Task::Fig5 => run_fig5(cfg)?,
        Task::Fig6 => run_fig6(cfg)?,
        Task::Sweep(s) => run_sweep(cfg, s)?,
    };
    Ok(Outcome {
        text: table.to_csv_string()?,
        success: true,
    })
}
