//! End to end on logistic data read back from CSV: shard, run CSL, pick τ
//! from the theory, and report the region for both bootstraps.
//!
//! `cargo run --release --example logistic_inference`

use distboot::bootstrap::{covers, dist_boots, BootConfig, BootInput};
use distboot::csl::csl_run;
use distboot::rng::Purpose;
use distboot::synthdata::{draw_theta_star, read_csv, sample_dataset, shard, write_csv};
use distboot::theory::{exponents_from_sizes, tau_min, ModelFamily};
use distboot::{BootMethod, Cluster, CovKind, DesignSpec, ModelSpec, SeedSpec, SolverConfig};

pub fn run_example() -> distboot::Result<()> {
    let seeds = SeedSpec::new(11);
    let d = 4;
    let spec = DesignSpec::new(ModelSpec::Logistic, CovKind::toeplitz(), draw_theta_star(d, &seeds.stream(Purpose::ThetaStar)));
    let path = std::env::temp_dir().join("distboot_logistic.csv");
    write_csv(&sample_dataset(&spec, 1 << 13, &seeds.stream(Purpose::Data))?, &path)?;
    let data = read_csv(&path)?;

    let k = 8;
    let cluster = Cluster::new(shard(&data, k)?, ModelSpec::Logistic)?;
    let (gn, gk) = exponents_from_sizes(cluster.n(), k, d)?;
    let plan = tau_min(ModelFamily::Glm, BootMethod::NK1Grad, gn, gk);
    // Desk-scale sizes sit outside the asymptotic regime; fall back to 3.
    let tau = plan.tau_min.map_or(3, |t| t as usize);
    println!("γn = {gn:.2}, γk = {gk:.2}, feasible {}, τ = {tau}", plan.feasible);

    let csl = csl_run(&cluster, tau, &SolverConfig::default())?;
    let master_grads = cluster.master_per_datum_gradients(&csl.theta_prev)?;
    let input = BootInput {
        theta: &csl.theta,
        grads: &csl.grads,
        master_grads: &master_grads,
        inv_hessian: &csl.inv_hessian,
        shard_size: cluster.n(),
    };
    for method in [BootMethod::KGrad, BootMethod::NK1Grad] {
        let summary = dist_boots(&input, &BootConfig::new(method), &seeds.stream(Purpose::Multipliers))?;
        let hit = covers(&spec.theta_star, &csl.theta, summary.c_alpha, cluster.total(), distboot::NormFunctional::SupNorm)?;
        println!(
            "{method:>8}: half width {:.4}, covers θ* {hit}",
            summary.half_width()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> distboot::Result<()> {
    run_example()
}
