//! Empirical coverage of the 95% sup-norm region for both gradient
//! bootstraps across k, with the report written as CSV.
//!
//! `cargo run --release --example simultaneous_coverage`

use distboot::harness::{emit_report, run_coverage_experiment, ExperimentConfig, ReportFormat};
use distboot::{CovKind, ModelSpec};

pub fn run_example() -> distboot::Result<()> {
    let mut cfg = ExperimentConfig::new(ModelSpec::Linear, CovKind::toeplitz(), 2, 1 << 10, vec![2, 16, 64]);
    cfg.tau_grid = vec![2];
    cfg.reps = 100;
    cfg.b = 200;
    cfg.oracle_reps = 100;
    cfg.root_seed = 7;

    let report = run_coverage_experiment(&cfg)?;
    println!("{:>4} {:>8} {:>9} {:>10} {:>10}", "k", "method", "coverage", "width", "oracle");
    for row in &report.rows {
        println!(
            "{:>4} {:>8} {:>9.3} {:>10.4} {:>10.4}",
            row.k,
            row.method,
            row.coverage.unwrap_or(f64::NAN),
            row.avg_width.unwrap_or(f64::NAN),
            row.oracle_width.unwrap_or(f64::NAN),
        );
    }

    let path = std::env::temp_dir().join("distboot_coverage.csv");
    emit_report(&report, ReportFormat::Csv, &path)?;
    println!("report written to {}", path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> distboot::Result<()> {
    run_example()
}
