//! Mean wall time of one τ = 1 inference per method and k.
//!
//! `cargo run --release --example runtime_table`

use distboot::harness::{run_bench, ExperimentConfig};
use distboot::{CovKind, ModelSpec};

pub fn run_example() -> distboot::Result<()> {
    let mut cfg = ExperimentConfig::new(ModelSpec::Linear, CovKind::toeplitz(), 8, 1 << 14, vec![4, 32, 256]);
    cfg.bench_runs = 3;
    cfg.blb_r = 20;
    cfg.root_seed = 2;

    let report = run_bench(&cfg)?;
    println!("{:>4} {:>8} {:>12}", "k", "method", "seconds");
    for row in &report.rows {
        println!("{:>4} {:>8} {:>12.5}", row.k, row.method, row.wall_time_s);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> distboot::Result<()> {
    run_example()
}
