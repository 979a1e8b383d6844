//! Master-only multiplier bootstrap.
//!
//! Given the CSL output, the master holds `θ̃`, the `k` shard gradients
//! `g_j`, its own per-datum gradients `g_i1` and the surrogate inverse
//! Hessian `Θ̃`. With `ḡ` the global mean gradient, one bootstrap draw is
//!
//! ```text
//! k-grad:      ‖ -Θ̃ k^{-1/2}       Σ_j ε_j √n (g_j - ḡ) ‖
//! n+k-1-grad:  ‖ -Θ̃ (n+k-1)^{-1/2} (Σ_i ε_i1 (g_i1 - ḡ) + Σ_{j≥2} ε_j √n (g_j - ḡ)) ‖
//! ```
//!
//! with i.i.d. standard normal multipliers. The norm is the sup-norm for
//! simultaneous regions, `|(·)_l|` for a pointwise interval, or ℓ2.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, sup_norm};
use crate::rng::StreamKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BootMethod {
    /// One multiplier per machine.
    #[serde(rename = "kgrad")]
    KGrad,
    /// One multiplier per master datum plus one per worker.
    #[serde(rename = "nk1grad")]
    NK1Grad,
}

impl BootMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BootMethod::KGrad => "kgrad",
            BootMethod::NK1Grad => "nk1grad",
        }
    }
}

impl fmt::Display for BootMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BootMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kgrad" | "k-grad" => Ok(BootMethod::KGrad),
            "nk1grad" | "n+k-1-grad" => Ok(BootMethod::NK1Grad),
            other => Err(Error::invalid(format!("unknown bootstrap method {other:?}"))),
        }
    }
}

/// Functional applied to the bootstrap vector and to `√N(θ̃ - θ*)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NormFunctional {
    SupNorm,
    /// `|(·)_l|` with `l` 1-based.
    Coordinate(usize),
    L2,
}

impl NormFunctional {
    pub fn validate(self, d: usize) -> Result<()> {
        match self {
            NormFunctional::Coordinate(l) if l == 0 || l > d => Err(Error::invalid(format!(
                "coordinate {l} out of range 1..={d}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn apply(self, v: &DVector<f64>) -> f64 {
        match self {
            NormFunctional::SupNorm => sup_norm(v),
            NormFunctional::Coordinate(l) => v[l - 1].abs(),
            NormFunctional::L2 => v.norm(),
        }
    }
}

impl fmt::Display for NormFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormFunctional::SupNorm => f.write_str("sup"),
            NormFunctional::Coordinate(l) => write!(f, "coord:{l}"),
            NormFunctional::L2 => f.write_str("l2"),
        }
    }
}

impl FromStr for NormFunctional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" => Ok(NormFunctional::SupNorm),
            "l2" => Ok(NormFunctional::L2),
            _ => {
                let l = s
                    .strip_prefix("coord:")
                    .and_then(|l| l.parse::<usize>().ok())
                    .filter(|&l| l >= 1)
                    .ok_or_else(|| Error::invalid(format!("unknown norm {s:?}")))?;
                Ok(NormFunctional::Coordinate(l))
            }
        }
    }
}

impl TryFrom<String> for NormFunctional {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<NormFunctional> for String {
    fn from(n: NormFunctional) -> String {
        n.to_string()
    }
}

fn check_grads(grads: &[DVector<f64>], d: usize, what: &'static str) -> Result<()> {
    if grads.is_empty() {
        return Err(Error::EmptyInput(what));
    }
    grads.iter().try_for_each(|g| check_dim(d, g.len()))
}

fn check_inv(inv_hessian: &DMatrix<f64>) -> Result<usize> {
    check_dim(inv_hessian.nrows(), inv_hessian.ncols())?;
    Ok(inv_hessian.nrows())
}

/// Mean over all `N = n k` observations from the master's per-datum
/// gradients and the workers' shard means.
fn pooled_mean(master_grads: &[DVector<f64>], worker_grads: &[DVector<f64>]) -> DVector<f64> {
    let n = master_grads.len() as f64;
    let mut acc = DVector::zeros(master_grads[0].len());
    for g in master_grads {
        acc += g;
    }
    for g in worker_grads {
        acc += g * n;
    }
    acc / (n * (1 + worker_grads.len()) as f64)
}

fn shard_mean(grads: &[DVector<f64>]) -> DVector<f64> {
    crate::cluster::mean_vector(grads)
}

/// Pre-norm k-grad vector `-Θ̃ k^{-1/2} Σ_j ε_j √n (g_j - ḡ)`.
pub fn kgrad_vector(
    inv_hessian: &DMatrix<f64>,
    grads: &[DVector<f64>],
    eps: &[f64],
    n: usize,
) -> Result<DVector<f64>> {
    let d = check_inv(inv_hessian)?;
    check_grads(grads, d, "shard gradients")?;
    check_dim(grads.len(), eps.len())?;
    let gbar = shard_mean(grads);
    let mut s = DVector::zeros(d);
    for (g, &e) in grads.iter().zip(eps) {
        s += (g - &gbar) * (e * (n as f64).sqrt());
    }
    Ok(-(inv_hessian * s) / (grads.len() as f64).sqrt())
}

pub fn kgrad_draw(
    inv_hessian: &DMatrix<f64>,
    grads: &[DVector<f64>],
    eps: &[f64],
    n: usize,
    norm: NormFunctional,
) -> Result<f64> {
    norm.validate(inv_hessian.nrows())?;
    Ok(norm.apply(&kgrad_vector(inv_hessian, grads, eps, n)?))
}

/// Pre-norm n+k-1-grad vector. `worker_grads` are shards 2..k (possibly none).
pub fn nk1grad_vector(
    inv_hessian: &DMatrix<f64>,
    master_grads: &[DVector<f64>],
    worker_grads: &[DVector<f64>],
    eps_master: &[f64],
    eps_workers: &[f64],
) -> Result<DVector<f64>> {
    let d = check_inv(inv_hessian)?;
    check_grads(master_grads, d, "master per-datum gradients")?;
    worker_grads.iter().try_for_each(|g| check_dim(d, g.len()))?;
    check_dim(master_grads.len(), eps_master.len())?;
    check_dim(worker_grads.len(), eps_workers.len())?;
    let n = master_grads.len();
    let gbar = pooled_mean(master_grads, worker_grads);
    let mut s = DVector::zeros(d);
    for (g, &e) in master_grads.iter().zip(eps_master) {
        s += (g - &gbar) * e;
    }
    for (g, &e) in worker_grads.iter().zip(eps_workers) {
        s += (g - &gbar) * (e * (n as f64).sqrt());
    }
    Ok(-(inv_hessian * s) / ((n + worker_grads.len()) as f64).sqrt())
}

pub fn nk1grad_draw(
    inv_hessian: &DMatrix<f64>,
    master_grads: &[DVector<f64>],
    worker_grads: &[DVector<f64>],
    eps_master: &[f64],
    eps_workers: &[f64],
    norm: NormFunctional,
) -> Result<f64> {
    norm.validate(inv_hessian.nrows())?;
    let v = nk1grad_vector(inv_hessian, master_grads, worker_grads, eps_master, eps_workers)?;
    Ok(norm.apply(&v))
}

/// Everything the master holds after CSL.
#[derive(Debug, Clone, Copy)]
pub struct BootInput<'a> {
    /// `θ̃ = θ(τ)`.
    pub theta: &'a DVector<f64>,
    /// Shard gradients `g_1..g_k`.
    pub grads: &'a [DVector<f64>],
    /// Master per-datum gradients `g_11..g_n1`; only read by n+k-1-grad.
    pub master_grads: &'a [DVector<f64>],
    /// `Θ̃`.
    pub inv_hessian: &'a DMatrix<f64>,
    /// Shard size `n`.
    pub shard_size: usize,
}

impl BootInput<'_> {
    fn k(&self) -> usize {
        self.grads.len()
    }

    fn total(&self) -> usize {
        self.shard_size * self.k()
    }

    fn validate(&self, method: BootMethod) -> Result<usize> {
        let d = check_inv(self.inv_hessian)?;
        check_dim(d, self.theta.len())?;
        check_grads(self.grads, d, "shard gradients")?;
        if self.shard_size == 0 {
            return Err(Error::EmptyInput("shard"));
        }
        if method == BootMethod::NK1Grad {
            check_grads(self.master_grads, d, "master per-datum gradients")?;
            check_dim(self.shard_size, self.master_grads.len())?;
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootConfig {
    pub method: BootMethod,
    /// Number of bootstrap draws `B`.
    pub b: usize,
    /// Quantile level; `0.95` gives 95% regions.
    pub alpha: f64,
    pub norm: NormFunctional,
}

impl BootConfig {
    pub fn new(method: BootMethod) -> Self {
        Self {
            method,
            b: 500,
            alpha: 0.95,
            norm: NormFunctional::SupNorm,
        }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if self.b == 0 {
            return Err(Error::invalid("B must be at least 1"));
        }
        check_alpha(self.alpha)?;
        self.norm.validate(d)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub draws: Vec<f64>,
    pub c_alpha: f64,
    /// `θ̃_l ± N^{-1/2} c_alpha` for every coordinate.
    pub intervals: Vec<(f64, f64)>,
    pub b: usize,
    pub alpha: f64,
}

impl BootstrapSummary {
    pub fn half_width(&self) -> f64 {
        self.intervals
            .first()
            .map_or(0.0, |(lo, hi)| 0.5 * (hi - lo))
    }
}

/// Multipliers for draw `b`: `k` values for k-grad; `n` master values
/// followed by `k - 1` worker values for n+k-1-grad.
pub fn multipliers(method: BootMethod, n: usize, k: usize, key: &StreamKey, b: usize) -> Vec<f64> {
    let m = match method {
        BootMethod::KGrad => k,
        BootMethod::NK1Grad => n + k - 1,
    };
    let mut eps = vec![0.0; m];
    fill_multipliers(&mut eps, key, b);
    eps
}

fn fill_multipliers(eps: &mut [f64], key: &StreamKey, b: usize) {
    let mut rng = key.child(b as u64).rng();
    eps.iter_mut().for_each(|e| *e = rng.sample(StandardNormal));
}

/// Columns whose multiplier-weighted sum is the pre-norm bootstrap vector.
fn loading_matrix(method: BootMethod, input: &BootInput<'_>, d: usize) -> DMatrix<f64> {
    let n = input.shard_size;
    let k = input.k();
    let root_n = (n as f64).sqrt();
    let (cols, scale): (Vec<DVector<f64>>, f64) = match method {
        BootMethod::KGrad => {
            let gbar = shard_mean(input.grads);
            let cols = input.grads.iter().map(|g| (g - &gbar) * root_n).collect();
            (cols, (k as f64).sqrt())
        }
        BootMethod::NK1Grad => {
            let workers = &input.grads[1..];
            let gbar = pooled_mean(input.master_grads, workers);
            let cols = input
                .master_grads
                .iter()
                .map(|g| g - &gbar)
                .chain(workers.iter().map(|g| (g - &gbar) * root_n))
                .collect();
            (cols, ((n + k - 1) as f64).sqrt())
        }
    };
    let mut centered = DMatrix::zeros(d, cols.len());
    for (j, c) in cols.iter().enumerate() {
        centered.set_column(j, c);
    }
    -(input.inv_hessian * centered) / scale
}

/// Master-only bootstrap: `B` draws, their `alpha` quantile and the
/// resulting region. Draw `b` uses the multiplier stream `key.child(b)`, so
/// the result does not depend on thread count.
pub fn dist_boots(
    input: &BootInput<'_>,
    cfg: &BootConfig,
    key: &StreamKey,
) -> Result<BootstrapSummary> {
    let d = input.validate(cfg.method)?;
    cfg.validate(d)?;
    let loading = loading_matrix(cfg.method, input, d);
    let draws: Vec<f64> = (0..cfg.b)
        .into_par_iter()
        .map_init(
            || (DVector::zeros(loading.ncols()), DVector::zeros(d)),
            |(eps, v), b| {
                fill_multipliers(eps.as_mut_slice(), key, b);
                v.gemv(1.0, &loading, eps, 0.0);
                cfg.norm.apply(v)
            },
        )
        .collect();
    let c_alpha = empirical_quantile(&draws, cfg.alpha)?;
    let half = c_alpha / (input.total() as f64).sqrt();
    let intervals = input.theta.iter().map(|&t| (t - half, t + half)).collect();
    Ok(BootstrapSummary {
        draws,
        c_alpha,
        intervals,
        b: cfg.b,
        alpha: cfg.alpha,
    })
}

/// Order statistic `⌈alpha B⌉` (1-based) of the ascending sample: the
/// smallest `t` with empirical `P(X ≤ t) ≥ alpha`. No interpolation.
pub fn empirical_quantile(samples: &[f64], alpha: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("samples"));
    }
    check_alpha(alpha)?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let b = sorted.len();
    let pos = alpha * b as f64;
    let nearest = pos.round();
    // alpha B is often an integer up to rounding (0.95 * 500)
    let rank = if (pos - nearest).abs() <= 1e-9 * pos.max(1.0) {
        nearest
    } else {
        pos.ceil()
    };
    let rank = (rank as usize).clamp(1, b);
    Ok(sorted[rank - 1])
}

/// Exact covariance of the pre-norm bootstrap vector given the data.
///
/// k-grad: `Θ̃ (k^{-1} Σ_j n (g_j - ḡ)(g_j - ḡ)') Θ̃'`.
/// n+k-1-grad: `Θ̃ ((n+k-1)^{-1} (Σ_i (g_i1 - ḡ)(g_i1 - ḡ)' + Σ_{j≥2} n (g_j - ḡ)(g_j - ḡ)')) Θ̃'`.
pub fn conditional_covariance(
    method: BootMethod,
    inv_hessian: &DMatrix<f64>,
    grads: &[DVector<f64>],
    master_grads: &[DVector<f64>],
    n: usize,
) -> Result<DMatrix<f64>> {
    let d = check_inv(inv_hessian)?;
    check_grads(grads, d, "shard gradients")?;
    let k = grads.len();
    let nf = n as f64;
    let mut meat = DMatrix::zeros(d, d);
    match method {
        BootMethod::KGrad => {
            let gbar = shard_mean(grads);
            for g in grads {
                let c = g - &gbar;
                meat += &c * c.transpose() * nf;
            }
            meat /= k as f64;
        }
        BootMethod::NK1Grad => {
            check_grads(master_grads, d, "master per-datum gradients")?;
            check_dim(n, master_grads.len())?;
            let gbar = pooled_mean(master_grads, &grads[1..]);
            for g in master_grads {
                let c = g - &gbar;
                meat += &c * c.transpose();
            }
            for g in &grads[1..] {
                let c = g - &gbar;
                meat += &c * c.transpose() * nf;
            }
            meat /= (n + k - 1) as f64;
        }
    }
    Ok(linalg::symmetrize(inv_hessian * meat * inv_hessian.transpose()))
}

/// Whether `θ*` lies in the region: `norm(√N (θ̃ - θ*)) ≤ c_alpha`.
pub fn covers(
    theta_star: &DVector<f64>,
    theta: &DVector<f64>,
    c_alpha: f64,
    n_total: usize,
    norm: NormFunctional,
) -> Result<bool> {
    check_dim(theta_star.len(), theta.len())?;
    norm.validate(theta.len())?;
    let scaled = (theta - theta_star) * (n_total as f64).sqrt();
    Ok(norm.apply(&scaled) <= c_alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Purpose, SeedSpec};

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    #[test]
    fn kgrad_equal_gradients_give_zero() {
        let inv = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let grads = vec![v(&[0.5, -1.0]); 4];
        let draw = kgrad_draw(&inv, &grads, &[0.3, -2.0, 1.1, 0.7], 9, NormFunctional::SupNorm);
        assert_eq!(draw.unwrap(), 0.0);
    }

    #[test]
    fn kgrad_two_machine_hand_value() {
        // k = 2, ε = (1, -1), n = 1, Θ̃ = 1: (1/√2) |a - b|
        let (a, b) = (1.75, -0.5);
        let draw = kgrad_draw(
            &DMatrix::identity(1, 1),
            &[v(&[a]), v(&[b])],
            &[1.0, -1.0],
            1,
            NormFunctional::SupNorm,
        )
        .unwrap();
        assert!((draw - (a - b).abs() / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn nk1grad_equal_multipliers_cancel() {
        let draw = nk1grad_draw(
            &DMatrix::identity(1, 1),
            &[v(&[0.8]), v(&[-0.3])],
            &[],
            &[1.0, 1.0],
            &[],
            NormFunctional::SupNorm,
        )
        .unwrap();
        assert!(draw.abs() < 1e-16);
        let flat = nk1grad_draw(
            &DMatrix::identity(2, 2),
            &vec![v(&[1.0, 2.0]); 3],
            &vec![v(&[1.0, 2.0]); 2],
            &[0.4, -1.0, 2.0],
            &[0.1, 0.9],
            NormFunctional::L2,
        )
        .unwrap();
        assert_eq!(flat, 0.0);
    }

    #[test]
    fn nk1grad_single_machine_is_classical_multiplier() {
        let inv = DMatrix::from_row_slice(2, 2, &[1.5, -0.2, -0.2, 0.7]);
        let g = vec![v(&[0.3, 1.0]), v(&[-1.2, 0.4]), v(&[0.9, -0.1])];
        let eps = [0.5, -1.5, 0.25];
        let got = nk1grad_vector(&inv, &g, &[], &eps, &[]).unwrap();
        let mean = (&g[0] + &g[1] + &g[2]) / 3.0;
        let mut s = DVector::zeros(2);
        for (gi, e) in g.iter().zip(eps) {
            s += (gi - &mean) * e;
        }
        let expected = -(&inv * s) / 3f64.sqrt();
        assert!((got - expected).amax() < 1e-15);
    }

    #[test]
    fn dimension_mismatches() {
        let inv = DMatrix::identity(2, 2);
        assert!(kgrad_vector(&inv, &[v(&[1.0])], &[1.0], 1).is_err());
        assert!(kgrad_vector(&inv, &[v(&[1.0, 0.0])], &[1.0, 2.0], 1).is_err());
        assert!(nk1grad_vector(&inv, &[v(&[1.0, 0.0])], &[], &[], &[]).is_err());
        assert!(kgrad_draw(&inv, &[v(&[1.0, 0.0])], &[1.0], 1, NormFunctional::Coordinate(3)).is_err());
    }

    #[test]
    fn quantile_examples() {
        let s: Vec<f64> = (1..=500).map(f64::from).collect();
        assert_eq!(empirical_quantile(&s, 0.95).unwrap(), 475.0);
        assert_eq!(empirical_quantile(&[3.5; 17], 0.3).unwrap(), 3.5);
        assert_eq!(empirical_quantile(&s, 1.0 / 1000.0).unwrap(), 1.0);
        assert_eq!(empirical_quantile(&[7.0], 0.95).unwrap(), 7.0);
        assert!(empirical_quantile(&[], 0.5).is_err());
        assert!(empirical_quantile(&s, 1.0).is_err());
        assert!(empirical_quantile(&s, 0.0).is_err());
    }

    #[test]
    fn covers_examples() {
        let t = v(&[0.1, -0.2]);
        assert!(covers(&t, &t, 0.0, 100, NormFunctional::SupNorm).unwrap());
        assert!(!covers(&t, &v(&[0.1, -0.19]), 0.0, 100, NormFunctional::SupNorm).unwrap());
        // √100 * 0.01 = 0.1
        assert!(covers(&t, &v(&[0.1, -0.19]), 0.1 + 1e-12, 100, NormFunctional::SupNorm).unwrap());
        assert!(covers(&t, &v(&[0.5, -0.2]), 0.0, 100, NormFunctional::Coordinate(2)).unwrap());
    }

    #[test]
    fn norm_parsing() {
        assert_eq!("sup".parse::<NormFunctional>().unwrap(), NormFunctional::SupNorm);
        assert_eq!("l2".parse::<NormFunctional>().unwrap(), NormFunctional::L2);
        assert_eq!("coord:2".parse::<NormFunctional>().unwrap(), NormFunctional::Coordinate(2));
        assert!("coord:0".parse::<NormFunctional>().is_err());
        assert!("max".parse::<NormFunctional>().is_err());
        for n in [NormFunctional::SupNorm, NormFunctional::L2, NormFunctional::Coordinate(7)] {
            assert_eq!(n.to_string().parse::<NormFunctional>().unwrap(), n);
        }
    }

    fn toy_input() -> (DVector<f64>, Vec<DVector<f64>>, Vec<DVector<f64>>, DMatrix<f64>) {
        let theta = v(&[0.2, -0.1, 0.4]);
        let grads: Vec<_> = (0..5)
            .map(|j| v(&[0.1 * j as f64, (j as f64).sin(), -0.05 * (j * j) as f64]))
            .collect();
        let master: Vec<_> = (0..6)
            .map(|i| v(&[(i as f64).cos(), 0.3 * i as f64 - 0.7, 0.2]))
            .collect();
        let inv = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, 2.0, -0.3, 0.0, -0.3, 0.5]);
        (theta, grads, master, inv)
    }

    #[test]
    fn summary_matches_direct_formulas() {
        let (theta, grads, master, inv) = toy_input();
        let key = SeedSpec::new(3).stream(Purpose::Multipliers);
        let input = BootInput {
            theta: &theta,
            grads: &grads,
            master_grads: &master,
            inv_hessian: &inv,
            shard_size: 6,
        };
        for method in [BootMethod::KGrad, BootMethod::NK1Grad] {
            let cfg = BootConfig {
                b: 40,
                ..BootConfig::new(method)
            };
            let s = dist_boots(&input, &cfg, &key).unwrap();
            for (b, &draw) in s.draws.iter().enumerate() {
                let eps = multipliers(method, 6, 5, &key, b);
                let direct = match method {
                    BootMethod::KGrad => kgrad_draw(&inv, &grads, &eps, 6, cfg.norm),
                    BootMethod::NK1Grad => {
                        nk1grad_draw(&inv, &master, &grads[1..], &eps[..6], &eps[6..], cfg.norm)
                    }
                }
                .unwrap();
                assert!((draw - direct).abs() <= 1e-12 * direct.max(1.0));
            }
            assert_eq!(s.c_alpha, empirical_quantile(&s.draws, 0.95).unwrap());
            let half = s.c_alpha / 30f64.sqrt();
            for (l, (lo, hi)) in s.intervals.iter().enumerate() {
                assert!((hi - lo - 2.0 * half).abs() < 1e-15);
                assert!(((lo + hi) / 2.0 - theta[l]).abs() < 1e-15);
            }
            assert_eq!(s, dist_boots(&input, &cfg, &key).unwrap());
        }
    }

    #[test]
    fn single_draw_summary() {
        let (theta, grads, master, inv) = toy_input();
        let input = BootInput {
            theta: &theta,
            grads: &grads,
            master_grads: &master,
            inv_hessian: &inv,
            shard_size: 6,
        };
        let cfg = BootConfig {
            b: 1,
            ..BootConfig::new(BootMethod::NK1Grad)
        };
        let s = dist_boots(&input, &cfg, &SeedSpec::new(1).stream(Purpose::Multipliers)).unwrap();
        assert_eq!(s.c_alpha, s.draws[0]);
    }

    #[test]
    fn kgrad_does_not_need_master_gradients() {
        let (theta, grads, _, inv) = toy_input();
        let input = BootInput {
            theta: &theta,
            grads: &grads,
            master_grads: &[],
            inv_hessian: &inv,
            shard_size: 6,
        };
        let key = SeedSpec::new(1).stream(Purpose::Multipliers);
        assert!(dist_boots(&input, &BootConfig::new(BootMethod::KGrad), &key).is_ok());
        assert!(dist_boots(&input, &BootConfig::new(BootMethod::NK1Grad), &key).is_err());
    }

    #[test]
    fn conditional_covariance_is_symmetric_psd_and_vanishes_on_constant_gradients() {
        let (_, grads, master, inv) = toy_input();
        for method in [BootMethod::KGrad, BootMethod::NK1Grad] {
            let c = conditional_covariance(method, &inv, &grads, &master, 6).unwrap();
            assert_eq!(c, c.transpose());
            assert!(c.clone().symmetric_eigenvalues().min() >= -1e-12);
            let flat = vec![v(&[1.0, 2.0, 3.0]); 5];
            let flat_master = vec![v(&[1.0, 2.0, 3.0]); 6];
            let z = conditional_covariance(method, &inv, &flat, &flat_master, 6).unwrap();
            assert_eq!(z, DMatrix::zeros(3, 3));
        }
    }
}
