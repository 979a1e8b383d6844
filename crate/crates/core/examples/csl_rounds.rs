//! Distance to the full-data estimator after each CSL round, and what the
//! rounds cost in communication.
//!
//! `cargo run --release --example csl_rounds`

use distboot::baselines::centralized_fit;
use distboot::csl::{csl_init, csl_round};
use distboot::rng::Purpose;
use distboot::synthdata::{draw_theta_star, sample_dataset, shard};
use distboot::{Cluster, CovKind, DesignSpec, ModelSpec, SeedSpec, SolverConfig};

pub fn run_example() -> distboot::Result<()> {
    let cfg = SolverConfig::default();
    let seeds = SeedSpec::new(1);
    for model in [ModelSpec::Linear, ModelSpec::Logistic] {
        let spec = DesignSpec::new(model, CovKind::toeplitz(), draw_theta_star(8, &seeds.stream(Purpose::ThetaStar)));
        let data = sample_dataset(&spec, 2048 * 8, &seeds.stream(Purpose::Data))?;
        let theta_hat = centralized_fit(&data, model, &cfg)?;
        let cluster = Cluster::new(shard(&data, 8)?, model)?;

        let mut state = csl_init(&cluster, &cfg)?;
        println!("{model:?}");
        println!("  t=0  |θ - θ̂|∞ = {:.3e}", (&state.theta - &theta_hat).amax());
        for _ in 0..5 {
            state = csl_round(&state, &cluster, &cfg)?;
            println!("  t={}  |θ - θ̂|∞ = {:.3e}", state.t, (&state.theta - &theta_hat).amax());
        }
        let ledger = cluster.ledger();
        println!("  rounds {}, scalars sent {}", ledger.rounds, ledger.scalars_sent);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> distboot::Result<()> {
    run_example()
}
