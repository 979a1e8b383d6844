//! Reference quantities and competing distributed bootstraps.
//!
//! The centralized estimator and the oracle width are ground truth for the
//! experiments. BLB (bag of little bootstraps) and SDB (subsampled double
//! bootstrap) are reimplemented here for width comparison only; they do not
//! build confidence regions.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{empirical_quantile, NormFunctional};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, sup_norm};
use crate::models::{self, DataBlock, ModelSpec, SolverConfig};
use crate::rng::StreamKey;
use crate::synthdata::{sample_dataset, DesignSpec, ShardedDataset};

/// `θ̂`, the minimizer of the loss over all data.
pub fn centralized_fit(data: &DataBlock, model: ModelSpec, cfg: &SolverConfig) -> Result<DVector<f64>> {
    models::fit_local(model, data, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub theta_hat: DVector<f64>,
    pub width: f64,
    pub c_star: f64,
}

/// `‖θ̂ - θ*‖∞` for `reps` independent datasets of size `n_total`. Dataset
/// `r` is drawn from `key.child(r)`.
pub fn oracle_errors(
    spec: &DesignSpec,
    n_total: usize,
    reps: usize,
    key: &StreamKey,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    if reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let data = sample_dataset(spec, n_total, &key.child(r as u64))?;
            let theta_hat = centralized_fit(&data, spec.model, cfg)?;
            Ok(sup_norm(&(theta_hat - &spec.theta_star)))
        })
        .collect()
}

/// Twice the `alpha` empirical quantile of `‖θ̂ - θ*‖∞` over `reps` datasets.
pub fn oracle_width(
    spec: &DesignSpec,
    n_total: usize,
    reps: usize,
    alpha: f64,
    key: &StreamKey,
    cfg: &SolverConfig,
) -> Result<f64> {
    let errors = oracle_errors(spec, n_total, reps, key, cfg)?;
    Ok(2.0 * empirical_quantile(&errors, alpha)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleBoot {
    pub draws: Vec<f64>,
    pub c_star: f64,
}

/// Full-data multiplier bootstrap with one multiplier per observation:
/// `‖-∇²L_N(θ̂)^{-1} N^{-1/2} Σ ε_i (ĝ_i - ĝ)‖`. Draw `b` uses `N`
/// standard normals from `key.child(b)` in row order.
pub fn oracle_multiplier_boot(
    data: &DataBlock,
    model: ModelSpec,
    theta_hat: &DVector<f64>,
    b: usize,
    alpha: f64,
    norm: NormFunctional,
    key: &StreamKey,
    cfg: &SolverConfig,
) -> Result<OracleBoot> {
    if b == 0 {
        return Err(Error::invalid("B must be at least 1"));
    }
    check_dim(data.dim(), theta_hat.len())?;
    norm.validate(data.dim())?;
    let n_total = data.len();
    let per_datum = models::per_datum_gradients(model, theta_hat, data)?;
    let h_inv = linalg::spd_inverse(&models::shard_hessian(model, theta_hat, data)?, cfg.ridge)?;

    let mut centered = DMatrix::zeros(data.dim(), n_total);
    for (i, g) in per_datum.iter().enumerate() {
        centered.set_column(i, g);
    }
    let mean = centered.column_mean();
    for mut col in centered.column_iter_mut() {
        col -= &mean;
    }
    let scale = -1.0 / (n_total as f64).sqrt();

    let draws: Vec<f64> = (0..b)
        .into_par_iter()
        .map(|bi| {
            let mut rng = key.child(bi as u64).rng();
            let eps = DVector::from_fn(n_total, |_, _| rng.sample::<f64, _>(StandardNormal));
            let v = &h_inv * (&centered * eps) * scale;
            norm.apply(&v)
        })
        .collect();
    let c_star = empirical_quantile(&draws, alpha)?;
    Ok(OracleBoot { draws, c_star })
}

/// `θ̂` and the oracle bootstrap quantile for one dataset, paired with a
/// precomputed oracle width.
pub fn oracle_reference(
    data: &DataBlock,
    model: ModelSpec,
    width: f64,
    b: usize,
    alpha: f64,
    norm: NormFunctional,
    key: &StreamKey,
    cfg: &SolverConfig,
) -> Result<OracleResult> {
    let theta_hat = centralized_fit(data, model, cfg)?;
    let boot = oracle_multiplier_boot(data, model, &theta_hat, b, alpha, norm, key, cfg)?;
    Ok(OracleResult {
        theta_hat,
        width,
        c_star: boot.c_star,
    })
}

/// Multinomial(`total`; `cells` equiprobable cells) via sequential
/// conditional binomials. The counts always sum to `total`.
pub fn multinomial_uniform<R: Rng + ?Sized>(total: u64, cells: usize, rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0; cells];
    let mut remaining = total;
    for (i, slot) in out.iter_mut().enumerate().take(cells.saturating_sub(1)) {
        if remaining == 0 {
            break;
        }
        let p = 1.0 / (cells - i) as f64;
        let draw = Binomial::new(remaining, p).expect("p in (0, 1]").sample(rng);
        *slot = draw as f64;
        remaining -= draw;
    }
    if let Some(last) = out.last_mut() {
        *last += remaining as f64;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlbConfig {
    /// Monte-Carlo resamples per subset.
    pub r: usize,
    pub alpha: f64,
}

impl Default for BlbConfig {
    fn default() -> Self {
        Self { r: 100, alpha: 0.95 }
    }
}

/// BLB width contribution of one subset for the given weight vectors:
/// `2 · quantile_alpha(‖θ*_b - θ̂_j‖∞)`.
pub fn blb_shard_width(
    model: ModelSpec,
    shard: &DataBlock,
    weight_sets: &[Vec<f64>],
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    if weight_sets.is_empty() {
        return Err(Error::EmptyInput("weight sets"));
    }
    let theta_j = models::fit_local(model, shard, cfg)?;
    let errs = weight_sets
        .iter()
        .map(|w| Ok(sup_norm(&(models::fit_weighted(model, shard, w, cfg)? - &theta_j))))
        .collect::<Result<Vec<f64>>>()?;
    Ok(2.0 * empirical_quantile(&errs, alpha)?)
}

/// Bag of little bootstraps with the `k` shards as subsets: each shard
/// resamples `N` points from its own `n` observations `r` times, refits, and
/// reports a width; the widths are averaged.
pub fn blb_width(
    sharded: &ShardedDataset,
    model: ModelSpec,
    blb: &BlbConfig,
    key: &StreamKey,
    cfg: &SolverConfig,
) -> Result<f64> {
    if blb.r == 0 {
        return Err(Error::invalid("BLB needs r >= 1"));
    }
    let (n, total) = (sharded.n(), sharded.total() as u64);
    let widths = sharded
        .shards()
        .par_iter()
        .enumerate()
        .map(|(j, shard)| {
            let weights: Vec<Vec<f64>> = (0..blb.r)
                .map(|b| multinomial_uniform(total, n, &mut key.path(&[j as u64, b as u64]).rng()))
                .collect();
            blb_shard_width(model, shard, &weights, blb.alpha, cfg)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(widths.iter().sum::<f64>() / widths.len() as f64)
}

/// Subsampled double bootstrap: one size-`N` resample per shard, pooled
/// across shards; twice the `alpha` quantile of the `k` pooled errors.
pub fn sdb_width(
    sharded: &ShardedDataset,
    model: ModelSpec,
    alpha: f64,
    key: &StreamKey,
    cfg: &SolverConfig,
) -> Result<f64> {
    let (n, total) = (sharded.n(), sharded.total() as u64);
    let errs = sharded
        .shards()
        .par_iter()
        .enumerate()
        .map(|(j, shard)| {
            let w = multinomial_uniform(total, n, &mut key.child(j as u64).rng());
            let theta_j = models::fit_local(model, shard, cfg)?;
            let theta_star = models::fit_weighted(model, shard, &w, cfg)?;
            Ok(sup_norm(&(theta_star - theta_j)))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(2.0 * empirical_quantile(&errs, alpha)?)
}
