//! Average width of k-grad, n+k-1-grad, BLB and SDB against the oracle
//! width, on shared datasets.
//!
//! `cargo run --release --example baseline_widths`

use distboot::harness::{run_comparison, ExperimentConfig};
use distboot::{CovKind, ModelSpec};

pub fn run_example() -> distboot::Result<()> {
    let mut cfg = ExperimentConfig::new(ModelSpec::Linear, CovKind::toeplitz(), 2, 1 << 10, vec![2, 8, 32]);
    cfg.tau_grid = vec![2];
    cfg.reps = 20;
    cfg.b = 200;
    cfg.oracle_reps = 200;
    cfg.blb_r = 20;
    cfg.root_seed = 5;

    let report = run_comparison(&cfg)?;
    let oracle = report.rows[0].oracle_width.unwrap_or(f64::NAN);
    println!("oracle width {oracle:.4}");
    println!("{:>4} {:>8} {:>10} {:>8}", "k", "method", "width", "/oracle");
    for row in &report.rows {
        let w = row.avg_width.unwrap_or(f64::NAN);
        println!("{:>4} {:>8} {:>10.4} {:>8.2}", row.k, row.method, w, w / oracle);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> distboot::Result<()> {
    run_example()
}
