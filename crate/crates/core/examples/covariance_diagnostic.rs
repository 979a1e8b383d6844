//! The exact conditional covariance of the pre-norm bootstrap vector next
//! to a Monte-Carlo estimate from the same multiplier streams.
//!
//! `cargo run --release --example covariance_diagnostic`

use distboot::bootstrap::{conditional_covariance, kgrad_vector, multipliers, nk1grad_vector};
use distboot::csl::csl_run;
use distboot::rng::Purpose;
use distboot::synthdata::{draw_theta_star, sample_dataset, shard};
use distboot::{BootMethod, Cluster, CovKind, DMatrix, DesignSpec, ModelSpec, SeedSpec, SolverConfig};

pub fn run_example() -> distboot::Result<()> {
    let (d, n, k, draws) = (3, 64, 16, 20_000);
    let seeds = SeedSpec::new(9);
    let spec = DesignSpec::new(ModelSpec::Linear, CovKind::toeplitz(), draw_theta_star(d, &seeds.stream(Purpose::ThetaStar)));
    let data = sample_dataset(&spec, n * k, &seeds.stream(Purpose::Data))?;
    let cluster = Cluster::new(shard(&data, k)?, ModelSpec::Linear)?;
    let csl = csl_run(&cluster, 1, &SolverConfig::default())?;
    let master = cluster.master_per_datum_gradients(&csl.theta_prev)?;

    for method in [BootMethod::KGrad, BootMethod::NK1Grad] {
        let exact = conditional_covariance(method, &csl.inv_hessian, &csl.grads, &master, n)?;
        let key = seeds.stream(Purpose::Multipliers);
        let mut mc = DMatrix::zeros(d, d);
        for b in 0..draws {
            let eps = multipliers(method, n, k, &key, b);
            let v = match method {
                BootMethod::KGrad => kgrad_vector(&csl.inv_hessian, &csl.grads, &eps, n)?,
                BootMethod::NK1Grad => nk1grad_vector(&csl.inv_hessian, &master, &csl.grads[1..], &eps[..n], &eps[n..])?,
            };
            mc += &v * v.transpose();
        }
        mc /= draws as f64;
        println!("{method}: exact{exact}Monte Carlo ({draws} draws){mc}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> distboot::Result<()> {
    run_example()
}
