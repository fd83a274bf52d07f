//! Loading a parameter file and sweeping one of its keys.
//!
//! Run with `cargo run --example param_file`.

use covert_relay::experiments::{run_sweep, ExperimentConfig, Sweep};

const FILE: &str = "
# a 2.4 GHz deployment with a farther destination
Pa = 25
fc = 2400
d_rb = 15
epsilon = 0.05
scheme = ps
fraction = auto
";

fn main() -> Result<(), covert_relay::Error> {
    let cfg = ExperimentConfig::parse(FILE)?;
    let sweep = Sweep {
        key: "d_ar".into(),
        from: 2.0,
        to: 20.0,
        points: 7,
        log: false,
    };
    let table = run_sweep(&cfg, &sweep)?;
    let psi = table.numbers("psi_star");
    for (row, psi) in table.rows.iter().zip(psi) {
        println!("d_ar = {:5.1} m  fraction = {:.4}  psi* = {psi:.6}", row.params.d_ar, row.fraction.unwrap_or(f64::NAN));
    }
    println!("{} CSV columns", table.header().len());
    Ok(())
}
