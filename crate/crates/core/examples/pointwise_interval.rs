//! One dataset, one region: the simultaneous sup-norm band next to a
//! pointwise interval for the second coordinate (same draws, different
//! functional).
//!
//! `cargo run --release --example pointwise_interval`

use distboot::bootstrap::{dist_boots, BootConfig, BootInput};
use distboot::csl::csl_run;
use distboot::rng::Purpose;
use distboot::synthdata::{draw_theta_star, sample_dataset, shard};
use distboot::{BootMethod, Cluster, CovKind, DesignSpec, ModelSpec, NormFunctional, SeedSpec, SolverConfig};

pub fn run_example() -> distboot::Result<()> {
    let seeds = SeedSpec::new(3);
    let d = 8;
    let spec = DesignSpec::new(ModelSpec::Logistic, CovKind::equi_corr(), draw_theta_star(d, &seeds.stream(Purpose::ThetaStar)));
    let data = sample_dataset(&spec, 1 << 12, &seeds.stream(Purpose::Data))?;
    let cluster = Cluster::new(shard(&data, 16)?, ModelSpec::Logistic)?;

    let csl = csl_run(&cluster, 3, &SolverConfig::default())?;
    let master_grads = cluster.master_per_datum_gradients(&csl.theta_prev)?;
    let input = BootInput {
        theta: &csl.theta,
        grads: &csl.grads,
        master_grads: &master_grads,
        inv_hessian: &csl.inv_hessian,
        shard_size: cluster.n(),
    };

    let key = seeds.stream(Purpose::Multipliers);
    let band = dist_boots(&input, &BootConfig::new(BootMethod::NK1Grad), &key)?;
    let point_cfg = BootConfig {
        norm: NormFunctional::Coordinate(2),
        ..BootConfig::new(BootMethod::NK1Grad)
    };
    let point = dist_boots(&input, &point_cfg, &key)?;

    println!("{:>3} {:>9} {:>22} {:>22}", "l", "theta*", "simultaneous", "pointwise");
    for l in 0..d {
        let (lo, hi) = band.intervals[l];
        let pw = if l == 1 {
            let (plo, phi) = point.intervals[l];
            format!("[{plo:+.4}, {phi:+.4}]")
        } else {
            String::new()
        };
        println!("{:>3} {:>+9.4} [{lo:+.4}, {hi:+.4}] {pw:>22}", l + 1, spec.theta_star[l]);
    }
    println!("c(0.95): sup {:.3}, coordinate 2 {:.3}", band.c_alpha, point.c_alpha);
    println!("rounds used: {}", cluster.ledger().rounds);
    Ok(())
}

#[allow(dead_code)]
fn main() -> distboot::Result<()> {
    run_example()
}
