//! The figure recipes as library calls, writing CSV files to a directory.
//!
//! Run with `cargo run --release --example figure_sweeps -- [out_dir]`.

use std::fs::File;
use std::path::PathBuf;

use covert_relay::experiments::{run_fig2, run_fig3, run_fig4, run_fig5, run_fig6, ExperimentConfig, Table};

type Recipe = fn(&ExperimentConfig) -> covert_relay::Result<Table>;

fn main() -> Result<(), covert_relay::Error> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    let cfg = ExperimentConfig {
        mc_blocks: 200_000,
        ..ExperimentConfig::default()
    };

    let recipes: [(&str, Recipe); 5] = [
        ("fig2", run_fig2),
        ("fig3", run_fig3),
        ("fig4", run_fig4),
        ("fig5", run_fig5),
        ("fig6", run_fig6),
    ];
    for (name, run) in recipes {
        let table = run(&cfg)?;
        let path = dir.join(format!("{name}.csv"));
        table.write_csv(File::create(&path)?)?;
        println!("{name}: {} rows -> {}", table.rows.len(), path.display());
    }
    Ok(())
}
