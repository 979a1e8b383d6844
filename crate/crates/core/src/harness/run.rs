use std::time::Instant;

use rayon::prelude::*;

use super::report::{ExperimentReport, ReportRow};
use super::{ExperimentConfig, MethodKind};
use crate::baselines::{blb_width, oracle_width, sdb_width, BlbConfig};
use crate::bootstrap::{covers, dist_boots, BootConfig, BootInput};
use crate::cluster::Cluster;
use crate::csl::{csl_init, csl_round, csl_run};
use crate::error::{Error, Result};
use crate::models::DataBlock;
use crate::rng::{Purpose, SeedSpec};
use crate::synthdata::{sample_dataset, shard, DesignSpec};

/// Outcome of one method on one dataset. `None` in the cell vector means
/// the fit or the bootstrap failed.
#[derive(Debug, Clone, Copy)]
struct CellResult {
    covered: Option<bool>,
    width: f64,
    rounds: Option<u64>,
    secs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct CellKey {
    k: usize,
    tau: Option<usize>,
    method: MethodKind,
}

fn cell_keys(cfg: &ExperimentConfig, methods: &[MethodKind]) -> Vec<CellKey> {
    let taus = cfg.sorted_taus();
    let mut keys = Vec::new();
    for &k in &cfg.k_grid {
        for &tau in &taus {
            for &method in methods.iter().filter(|m| m.boot_method().is_some()) {
                keys.push(CellKey { k, tau: Some(tau), method });
            }
        }
        for &method in methods.iter().filter(|m| m.boot_method().is_none()) {
            keys.push(CellKey { k, tau: None, method });
        }
    }
    keys
}

/// Widths for every cell with a given `k` on one dataset, in `cell_keys` order.
fn run_k(
    cfg: &ExperimentConfig,
    spec: &DesignSpec,
    data: &DataBlock,
    k: usize,
    methods: &[MethodKind],
    rep: u64,
    seeds: &SeedSpec,
) -> Vec<Option<CellResult>> {
    let taus = cfg.sorted_taus();
    let grad: Vec<MethodKind> = methods.iter().copied().filter(|m| m.boot_method().is_some()).collect();
    let base: Vec<MethodKind> = methods.iter().copied().filter(|m| m.boot_method().is_none()).collect();
    let mut out = vec![None; taus.len() * grad.len() + base.len()];

    let cluster = match shard(data, k).and_then(|s| Cluster::new(s, spec.model)) {
        Ok(c) => c.with_parallel_workers(false),
        Err(_) => return out,
    };
    let n_total = cluster.total();
    let root_n = (n_total as f64).sqrt();

    if !grad.is_empty() {
        let start = Instant::now();
        let mut state = csl_init(&cluster, &cfg.solver).ok();
        let mut csl_secs = start.elapsed().as_secs_f64();
        let tau_max = *taus.last().expect("validated non-empty");
        let mut slot = 0;
        for t in 1..=tau_max {
            let Some(prev) = state.as_ref() else { break };
            let start = Instant::now();
            state = csl_round(prev, &cluster, &cfg.solver).ok();
            csl_secs += start.elapsed().as_secs_f64();
            if !taus.contains(&t) {
                continue;
            }
            let Some(csl) = state.as_ref().and_then(|s| s.output()) else { break };
            let rounds = cluster.ledger().rounds;
            let start = Instant::now();
            let master_grads = if grad.contains(&MethodKind::NK1Grad) {
                cluster.master_per_datum_gradients(&csl.theta_prev).ok()
            } else {
                Some(Vec::new())
            };
            let master_secs = start.elapsed().as_secs_f64();
            for &m in &grad {
                let method = m.boot_method().expect("gradient method");
                let cell = master_grads.as_ref().and_then(|mg| {
                    let start = Instant::now();
                    let input = BootInput {
                        theta: &csl.theta,
                        grads: &csl.grads,
                        master_grads: mg,
                        inv_hessian: &csl.inv_hessian,
                        shard_size: cluster.n(),
                    };
                    let boot_cfg = BootConfig {
                        method,
                        b: cfg.b,
                        alpha: cfg.alpha,
                        norm: cfg.norm,
                    };
                    let key = seeds
                        .stream(Purpose::Multipliers)
                        .path(&[rep, k as u64, t as u64, m.label()]);
                    let summary = dist_boots(&input, &boot_cfg, &key).ok()?;
                    let covered =
                        covers(&spec.theta_star, &csl.theta, summary.c_alpha, n_total, cfg.norm).ok()?;
                    let extra = if m == MethodKind::NK1Grad { master_secs } else { 0.0 };
                    Some(CellResult {
                        covered: Some(covered),
                        width: 2.0 * summary.c_alpha / root_n,
                        rounds: Some(rounds),
                        secs: csl_secs + extra + start.elapsed().as_secs_f64(),
                    })
                });
                out[slot] = cell;
                slot += 1;
            }
        }
    }

    let offset = taus.len() * grad.len();
    for (i, &m) in base.iter().enumerate() {
        let start = Instant::now();
        let width = match m {
            MethodKind::Blb => {
                let blb = BlbConfig { r: cfg.blb_r, alpha: cfg.alpha };
                let key = seeds.stream(Purpose::Blb).path(&[rep, k as u64]);
                blb_width(cluster.sharded(), spec.model, &blb, &key, &cfg.solver)
            }
            MethodKind::Sdb => {
                let key = seeds.stream(Purpose::Sdb).path(&[rep, k as u64]);
                sdb_width(cluster.sharded(), spec.model, cfg.alpha, &key, &cfg.solver)
            }
            _ => unreachable!("baseline methods only"),
        };
        out[offset + i] = width.ok().map(|width| CellResult {
            covered: None,
            width,
            rounds: None,
            secs: start.elapsed().as_secs_f64(),
        });
    }
    out
}

fn run_cells(cfg: &ExperimentConfig, methods: &[MethodKind]) -> Result<ExperimentReport> {
    cfg.validate()?;
    let spec = cfg.design_spec();
    let seeds = cfg.seeds();
    let keys = cell_keys(cfg, methods);

    let oracle = if cfg.oracle_reps > 0 {
        Some(run_oracle_width(cfg)?)
    } else {
        None
    };

    // One dataset per replication, shared by every k, τ and method.
    let per_rep: Vec<Vec<Option<CellResult>>> = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|rep| {
            let data = sample_dataset(&spec, cfg.n_total, &seeds.stream(Purpose::Data).child(rep));
            let Ok(data) = data else {
                return vec![None; keys.len()];
            };
            cfg.k_grid
                .iter()
                .flat_map(|&k| run_k(cfg, &spec, &data, k, methods, rep, &seeds))
                .collect()
        })
        .collect();

    let rows = keys
        .iter()
        .enumerate()
        .map(|(i, key)| {
            let ok: Vec<CellResult> = per_rep.iter().filter_map(|cells| cells[i]).collect();
            summarize(cfg, key, &ok, oracle)
        })
        .collect();
    Ok(ExperimentReport { rows })
}

fn summarize(cfg: &ExperimentConfig, key: &CellKey, ok: &[CellResult], oracle: Option<f64>) -> ReportRow {
    let count = ok.len() as f64;
    let mean = |f: fn(&CellResult) -> f64| (!ok.is_empty()).then(|| ok.iter().map(f).sum::<f64>() / count);
    let coverage = if key.method.boot_method().is_some() && !ok.is_empty() {
        Some(ok.iter().filter(|c| c.covered == Some(true)).count() as f64 / count)
    } else {
        None
    };
    ReportRow {
        d: cfg.design.d,
        k: key.k,
        n: cfg.n_total / key.k,
        tau: key.tau,
        method: key.method.as_str().to_owned(),
        coverage,
        avg_width: mean(|c| c.width),
        oracle_width: oracle,
        wall_time_s: mean(|c| c.secs).unwrap_or(0.0),
        comm_rounds: ok.iter().find_map(|c| c.rounds),
        failures: cfg.reps - ok.len(),
    }
}

/// Coverage and width of the gradient bootstraps over `reps` datasets.
/// `methods` defaults to both; baselines are rejected here.
pub fn run_coverage_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let methods = if cfg.methods.is_empty() {
        vec![MethodKind::KGrad, MethodKind::NK1Grad]
    } else {
        cfg.methods.clone()
    };
    if let Some(m) = methods.iter().find(|m| m.boot_method().is_none()) {
        return Err(Error::invalid(format!("{m} has no coverage; use the comparison runner")));
    }
    run_cells(cfg, &methods)
}

/// Gradient bootstraps next to BLB and SDB on the same datasets.
/// `methods` defaults to all four.
pub fn run_comparison(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let methods = if cfg.methods.is_empty() {
        vec![MethodKind::KGrad, MethodKind::NK1Grad, MethodKind::Blb, MethodKind::Sdb]
    } else {
        cfg.methods.clone()
    };
    run_cells(cfg, &methods)
}

/// Twice the `alpha` quantile of `‖θ̂ - θ*‖∞` over `oracle_reps` datasets.
/// Dataset `r` is the `r`-th child of the oracle stream, so for a fixed seed
/// the size-`N` datasets are prefixes of the size-`2N` ones.
pub fn run_oracle_width(cfg: &ExperimentConfig) -> Result<f64> {
    cfg.validate()?;
    oracle_width(
        &cfg.design_spec(),
        cfg.n_total,
        cfg.oracle_reps.max(1),
        cfg.alpha,
        &cfg.seeds().stream(Purpose::OracleData),
        &cfg.solver,
    )
}

/// Mean wall time of one `τ = 1` inference per `(k, method)` cell.
///
/// Runs are sequential; data generation and sharding are outside the timed
/// section. `methods` defaults to k-grad, n+k-1-grad and BLB.
pub fn run_bench(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let methods = if cfg.methods.is_empty() {
        vec![MethodKind::KGrad, MethodKind::NK1Grad, MethodKind::Blb]
    } else {
        cfg.methods.clone()
    };
    let spec = cfg.design_spec();
    let seeds = cfg.seeds();
    let mut rows = Vec::new();
    for &k in &cfg.k_grid {
        for &m in &methods {
            let mut ok = Vec::new();
            for run in 0..cfg.bench_runs as u64 {
                let key = seeds.stream(Purpose::Bench).path(&[k as u64, run]);
                let Ok(data) = sample_dataset(&spec, cfg.n_total, &key) else { continue };
                let Ok(cluster) = shard(&data, k).and_then(|s| Cluster::new(s, spec.model)) else {
                    continue;
                };
                let start = Instant::now();
                let result = bench_once(cfg, &cluster, m, &seeds, k, run);
                let secs = start.elapsed().as_secs_f64();
                if let Ok((width, rounds)) = result {
                    ok.push(CellResult { covered: None, width, rounds, secs });
                }
            }
            let key = CellKey {
                k,
                tau: m.boot_method().map(|_| 1),
                method: m,
            };
            let mut row = summarize(cfg, &key, &ok, None);
            row.failures = cfg.bench_runs - ok.len();
            rows.push(row);
        }
    }
    Ok(ExperimentReport { rows })
}

fn bench_once(
    cfg: &ExperimentConfig,
    cluster: &Cluster,
    m: MethodKind,
    seeds: &SeedSpec,
    k: usize,
    run: u64,
) -> Result<(f64, Option<u64>)> {
    let root_n = (cluster.total() as f64).sqrt();
    match m.boot_method() {
        Some(method) => {
            let csl = csl_run(cluster, 1, &cfg.solver)?;
            let master_grads = if method == crate::bootstrap::BootMethod::NK1Grad {
                cluster.master_per_datum_gradients(&csl.theta_prev)?
            } else {
                Vec::new()
            };
            let input = BootInput {
                theta: &csl.theta,
                grads: &csl.grads,
                master_grads: &master_grads,
                inv_hessian: &csl.inv_hessian,
                shard_size: cluster.n(),
            };
            let boot_cfg = BootConfig {
                method,
                b: cfg.b,
                alpha: cfg.alpha,
                norm: cfg.norm,
            };
            let key = seeds.stream(Purpose::Multipliers).path(&[u64::MAX, k as u64, run, m.label()]);
            let summary = dist_boots(&input, &boot_cfg, &key)?;
            Ok((2.0 * summary.c_alpha / root_n, Some(cluster.ledger().rounds)))
        }
        None => {
            let key = seeds.stream(Purpose::Bench).path(&[u64::MAX, k as u64, run, m.label()]);
            let width = if m == MethodKind::Blb {
                let blb = BlbConfig { r: cfg.blb_r, alpha: cfg.alpha };
                blb_width(cluster.sharded(), cluster.model(), &blb, &key, &cfg.solver)?
            } else {
                sdb_width(cluster.sharded(), cluster.model(), cfg.alpha, &key, &cfg.solver)?
            };
            Ok((width, None))
        }
    }
}
