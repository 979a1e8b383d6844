//! Minimal CSL rounds over a grid of size exponents (n = d^γn, k = d^γk).
//! `-` marks cells outside the feasible region, `*` a degenerate GLM offset.
//!
//! `cargo run --example tau_min_grid`

use distboot::theory::{exponents_from_sizes, tau_min, ModelFamily};
use distboot::BootMethod;

pub fn run_example() -> distboot::Result<()> {
    for family in [ModelFamily::Linear, ModelFamily::Glm] {
        for method in [BootMethod::KGrad, BootMethod::NK1Grad] {
            println!("{family:?} / {method}   (rows γn = 2..10, columns γk = 0..8)");
            for gn in 2..=10 {
                let cells: Vec<String> = (0..=8)
                    .map(|gk| {
                        let plan = tau_min(family, method, gn as f64, gk as f64);
                        match plan.tau_min {
                            Some(t) if plan.nu0_out_of_range => format!("{t:>3}*"),
                            Some(t) => format!("{t:>3} "),
                            None => "  - ".to_owned(),
                        }
                    })
                    .collect();
                println!("  {gn:>2} |{}", cells.join(""));
            }
        }
    }

    let (gn, gk) = exponents_from_sizes(4096, 16, 2)?;
    let plan = tau_min(ModelFamily::Linear, BootMethod::NK1Grad, gn, gk);
    println!("n = 4096, k = 16, d = 2: γn = {gn:.2}, γk = {gk:.2}, τ_min = {:?}", plan.tau_min);
    Ok(())
}

#[allow(dead_code)]
fn main() -> distboot::Result<()> {
    run_example()
}
