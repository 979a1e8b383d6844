//! Oracle width 2·q(0.95) of |θ̂ - θ*|∞ as N doubles; it should shrink by
//! about 1/√2 each time.
//!
//! `cargo run --release --example oracle_width`

use distboot::harness::{run_oracle_width, ExperimentConfig};
use distboot::{CovKind, ModelSpec};

pub fn run_example() -> distboot::Result<()> {
    let mut cfg = ExperimentConfig::new(ModelSpec::Linear, CovKind::toeplitz(), 2, 1 << 9, vec![1]);
    cfg.oracle_reps = 200;
    let mut prev: Option<f64> = None;
    for _ in 0..4 {
        let w = run_oracle_width(&cfg)?;
        match prev {
            Some(p) => println!("N = {:>5}  width {w:.4}  ratio {:.3}", cfg.n_total, w / p),
            None => println!("N = {:>5}  width {w:.4}", cfg.n_total),
        }
        prev = Some(w);
        cfg.n_total *= 2;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> distboot::Result<()> {
    run_example()
}
