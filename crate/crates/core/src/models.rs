//! Loss, gradient and Hessian for least squares and logistic regression.
//!
//! Data live in [`DataBlock`]s (one row per observation). Shard-level
//! quantities are plain arithmetic means of the per-datum ones; the weighted
//! variants divide by the total weight instead and are used by the
//! resampling baselines.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, sup_norm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSpec {
    /// `(y - x'θ)^2 / 2`
    Linear,
    /// `-y x'θ + log(1 + exp(x'θ))`, `y ∈ {0, 1}`
    Logistic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Datum {
    pub x: DVector<f64>,
    pub y: f64,
}

impl Datum {
    pub fn new(x: impl Into<Vec<f64>>, y: f64) -> Self {
        Self {
            x: DVector::from_vec(x.into()),
            y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_newton_iters: usize,
    /// Sup-norm of the mean gradient at which Newton stops.
    pub grad_tol: f64,
    /// Diagonal shift tried once when a Cholesky factorization fails.
    pub ridge: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_newton_iters: 50,
            grad_tol: 1e-10,
            ridge: 1e-8,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_newton_iters == 0 {
            return Err(Error::invalid("max_newton_iters must be positive"));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::invalid("grad_tol must be positive"));
        }
        if !(self.ridge >= 0.0) {
            return Err(Error::invalid("ridge must be nonnegative"));
        }
        Ok(())
    }
}

/// A contiguous block of observations: row `i` of `x` pairs with `y[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataBlock {
    x: DMatrix<f64>,
    y: DVector<f64>,
}

impl DataBlock {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        check_dim(x.nrows(), y.len())?;
        if x.ncols() == 0 {
            return Err(Error::invalid("covariate dimension must be positive"));
        }
        if !x.iter().chain(y.iter()).all(|v| v.is_finite()) {
            return Err(Error::invalid("data contain non-finite values"));
        }
        Ok(Self { x, y })
    }

    pub fn from_data(data: &[Datum]) -> Result<Self> {
        let first = data.first().ok_or(Error::EmptyInput("data"))?;
        let d = first.x.len();
        for z in data {
            check_dim(d, z.x.len())?;
        }
        let x = DMatrix::from_fn(data.len(), d, |i, j| data[i].x[j]);
        let y = DVector::from_iterator(data.len(), data.iter().map(|z| z.y));
        Self::new(x, y)
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn datum(&self, i: usize) -> Datum {
        Datum {
            x: self.x.row(i).transpose(),
            y: self.y[i],
        }
    }

    pub fn rows(&self, start: usize, len: usize) -> DataBlock {
        DataBlock {
            x: self.x.rows(start, len).into_owned(),
            y: self.y.rows(start, len).into_owned(),
        }
    }

    /// Stack blocks vertically in order.
    pub fn concat<'a>(blocks: impl IntoIterator<Item = &'a DataBlock>) -> Result<DataBlock> {
        let blocks: Vec<&DataBlock> = blocks.into_iter().collect();
        let first = blocks.first().ok_or(Error::EmptyInput("blocks"))?;
        let d = first.dim();
        let total: usize = blocks.iter().map(|b| b.len()).sum();
        let mut x = DMatrix::zeros(total, d);
        let mut y = DVector::zeros(total);
        let mut at = 0;
        for b in &blocks {
            check_dim(d, b.dim())?;
            x.rows_mut(at, b.len()).copy_from(&b.x);
            y.rows_mut(at, b.len()).copy_from(&b.y);
            at += b.len();
        }
        Ok(DataBlock { x, y })
    }
}

#[inline]
pub fn sigmoid(b: f64) -> f64 {
    if b >= 0.0 {
        1.0 / (1.0 + (-b).exp())
    } else {
        let e = b.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(b))` without overflow.
#[inline]
pub fn softplus(b: f64) -> f64 {
    if b > 0.0 {
        b + (-b).exp().ln_1p()
    } else {
        b.exp().ln_1p()
    }
}

impl ModelSpec {
    #[inline]
    fn pointwise_loss(self, eta: f64, y: f64) -> f64 {
        match self {
            ModelSpec::Linear => 0.5 * (y - eta) * (y - eta),
            ModelSpec::Logistic => softplus(eta) - y * eta,
        }
    }

    /// Derivative of the pointwise loss in the linear predictor.
    #[inline]
    fn score(self, eta: f64, y: f64) -> f64 {
        match self {
            ModelSpec::Linear => eta - y,
            ModelSpec::Logistic => sigmoid(eta) - y,
        }
    }

    /// Second derivative of the pointwise loss in the linear predictor.
    #[inline]
    fn curvature(self, eta: f64) -> f64 {
        match self {
            ModelSpec::Linear => 1.0,
            ModelSpec::Logistic => {
                let s = sigmoid(eta);
                s * (1.0 - s)
            }
        }
    }

    /// Logistic responses must be 0/1.
    pub fn validate_block(self, block: &DataBlock) -> Result<()> {
        if self == ModelSpec::Logistic && block.y.iter().any(|&y| y != 0.0 && y != 1.0) {
            return Err(Error::invalid("logistic responses must be 0 or 1"));
        }
        Ok(())
    }
}

pub fn loss(model: ModelSpec, theta: &DVector<f64>, z: &Datum) -> Result<f64> {
    check_dim(z.x.len(), theta.len())?;
    Ok(model.pointwise_loss(z.x.dot(theta), z.y))
}

pub fn gradient(model: ModelSpec, theta: &DVector<f64>, z: &Datum) -> Result<DVector<f64>> {
    check_dim(z.x.len(), theta.len())?;
    Ok(&z.x * model.score(z.x.dot(theta), z.y))
}

pub fn hessian(model: ModelSpec, theta: &DVector<f64>, z: &Datum) -> Result<DMatrix<f64>> {
    check_dim(z.x.len(), theta.len())?;
    let c = model.curvature(z.x.dot(theta));
    Ok(linalg::symmetrize(&z.x * z.x.transpose() * c))
}

fn check_block(theta: &DVector<f64>, block: &DataBlock) -> Result<()> {
    if block.is_empty() {
        return Err(Error::EmptyInput("shard"));
    }
    check_dim(block.dim(), theta.len())
}

fn check_weights(block: &DataBlock, weights: Option<&[f64]>) -> Result<f64> {
    match weights {
        None => Ok(block.len() as f64),
        Some(w) => {
            check_dim(block.len(), w.len())?;
            if w.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::invalid("weights must be finite and nonnegative"));
            }
            let total: f64 = w.iter().sum();
            if !(total > 0.0) {
                return Err(Error::invalid("weights sum to zero"));
            }
            Ok(total)
        }
    }
}

fn block_loss(
    model: ModelSpec,
    theta: &DVector<f64>,
    block: &DataBlock,
    weights: Option<&[f64]>,
) -> Result<f64> {
    check_block(theta, block)?;
    let total = check_weights(block, weights)?;
    let eta = &block.x * theta;
    let sum: f64 = match weights {
        None => eta
            .iter()
            .zip(block.y.iter())
            .map(|(&e, &y)| model.pointwise_loss(e, y))
            .sum(),
        Some(w) => eta
            .iter()
            .zip(block.y.iter())
            .zip(w)
            .map(|((&e, &y), &wi)| wi * model.pointwise_loss(e, y))
            .sum(),
    };
    Ok(sum / total)
}

fn block_gradient(
    model: ModelSpec,
    theta: &DVector<f64>,
    block: &DataBlock,
    weights: Option<&[f64]>,
) -> Result<DVector<f64>> {
    check_block(theta, block)?;
    let total = check_weights(block, weights)?;
    let eta = &block.x * theta;
    let mut r = DVector::from_iterator(
        eta.len(),
        eta.iter().zip(block.y.iter()).map(|(&e, &y)| model.score(e, y)),
    );
    if let Some(w) = weights {
        r.iter_mut().zip(w).for_each(|(ri, &wi)| *ri *= wi);
    }
    Ok(block.x.tr_mul(&r) / total)
}

fn block_hessian(
    model: ModelSpec,
    theta: &DVector<f64>,
    block: &DataBlock,
    weights: Option<&[f64]>,
) -> Result<DMatrix<f64>> {
    check_block(theta, block)?;
    let total = check_weights(block, weights)?;
    let h = if model == ModelSpec::Linear && weights.is_none() {
        // unit curvature: skip the scaled copy of X
        block.x.tr_mul(&block.x) / total
    } else {
        let eta = &block.x * theta;
        let mut scaled = block.x.clone();
        for (i, mut row) in scaled.row_iter_mut().enumerate() {
            let w = weights.map_or(1.0, |w| w[i]);
            row *= w * model.curvature(eta[i]);
        }
        block.x.tr_mul(&scaled) / total
    };
    Ok(linalg::symmetrize(h))
}

/// Mean loss over a shard.
pub fn shard_loss(model: ModelSpec, theta: &DVector<f64>, shard: &DataBlock) -> Result<f64> {
    block_loss(model, theta, shard, None)
}

/// Mean gradient over a shard.
pub fn shard_gradient(
    model: ModelSpec,
    theta: &DVector<f64>,
    shard: &DataBlock,
) -> Result<DVector<f64>> {
    block_gradient(model, theta, shard, None)
}

/// Mean Hessian over a shard; exactly symmetric.
pub fn shard_hessian(
    model: ModelSpec,
    theta: &DVector<f64>,
    shard: &DataBlock,
) -> Result<DMatrix<f64>> {
    block_hessian(model, theta, shard, None)
}

pub fn weighted_loss(
    model: ModelSpec,
    theta: &DVector<f64>,
    block: &DataBlock,
    weights: &[f64],
) -> Result<f64> {
    block_loss(model, theta, block, Some(weights))
}

pub fn weighted_gradient(
    model: ModelSpec,
    theta: &DVector<f64>,
    block: &DataBlock,
    weights: &[f64],
) -> Result<DVector<f64>> {
    block_gradient(model, theta, block, Some(weights))
}

/// Gradient of every datum in the block, in row order.
pub fn per_datum_gradients(
    model: ModelSpec,
    theta: &DVector<f64>,
    block: &DataBlock,
) -> Result<Vec<DVector<f64>>> {
    check_block(theta, block)?;
    let eta = &block.x * theta;
    Ok((0..block.len())
        .map(|i| block.x.row(i).transpose() * model.score(eta[i], block.y[i]))
        .collect())
}

/// Minimizer of the mean loss over `shard`.
pub fn fit_local(model: ModelSpec, shard: &DataBlock, cfg: &SolverConfig) -> Result<DVector<f64>> {
    fit(model, shard, None, cfg)
}

/// Minimizer of the weighted mean loss `Σ w_i L_i / Σ w_i`.
pub fn fit_weighted(
    model: ModelSpec,
    block: &DataBlock,
    weights: &[f64],
    cfg: &SolverConfig,
) -> Result<DVector<f64>> {
    fit(model, block, Some(weights), cfg)
}

fn fit(
    model: ModelSpec,
    block: &DataBlock,
    weights: Option<&[f64]>,
    cfg: &SolverConfig,
) -> Result<DVector<f64>> {
    cfg.validate()?;
    if block.is_empty() {
        return Err(Error::EmptyInput("shard"));
    }
    model.validate_block(block)?;
    let zero = DVector::zeros(block.dim());
    match model {
        ModelSpec::Linear => {
            // gradient at 0 is -X'Wy / Σw, so θ = H^{-1} (-g0)
            let h = block_hessian(model, &zero, block, weights)?;
            let g0 = block_gradient(model, &zero, block, weights)?;
            linalg::spd_solve(&h, &(-g0), cfg.ridge)
        }
        ModelSpec::Logistic => damped_newton(model, block, weights, zero, cfg),
    }
}

fn damped_newton(
    model: ModelSpec,
    block: &DataBlock,
    weights: Option<&[f64]>,
    mut theta: DVector<f64>,
    cfg: &SolverConfig,
) -> Result<DVector<f64>> {
    let mut current = block_loss(model, &theta, block, weights)?;
    let mut grad = block_gradient(model, &theta, block, weights)?;
    for _ in 0..cfg.max_newton_iters {
        if sup_norm(&grad) <= cfg.grad_tol {
            return Ok(theta);
        }
        let h = block_hessian(model, &theta, block, weights)?;
        let step = linalg::spd_solve(&h, &grad, cfg.ridge)?;
        // step halving; near the optimum loss differences fall below
        // rounding, so a relative slack admits the full step there
        let slack = 1e-13 * current.abs().max(1.0);
        let mut t = 1.0;
        let mut candidate = &theta - &step;
        let mut cand_loss = block_loss(model, &candidate, block, weights)?;
        for _ in 0..40 {
            if cand_loss <= current + slack {
                break;
            }
            t *= 0.5;
            candidate = &theta - &step * t;
            cand_loss = block_loss(model, &candidate, block, weights)?;
        }
        theta = candidate;
        current = cand_loss;
        grad = block_gradient(model, &theta, block, weights)?;
    }
    let grad_norm = sup_norm(&grad);
    if grad_norm <= cfg.grad_tol {
        Ok(theta)
    } else {
        Err(Error::NoConvergence {
            iters: cfg.max_newton_iters,
            grad_norm,
            last: theta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use rand_distr::StandardNormal;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    fn random_block(model: ModelSpec, n: usize, d: usize, seed: u64) -> DataBlock {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let x = DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let theta = DVector::from_fn(d, |i, _| 0.3 - 0.1 * i as f64);
        let y = DVector::from_fn(n, |i, _| {
            let eta = x.row(i).dot(&theta.transpose());
            match model {
                ModelSpec::Linear => eta + rng.sample::<f64, _>(StandardNormal),
                ModelSpec::Logistic => f64::from(rng.random::<f64>() < sigmoid(eta)),
            }
        });
        DataBlock::new(x, y).unwrap()
    }

    #[test]
    fn loss_examples() {
        let z = Datum::new([1.0, 2.0], 3.0);
        assert_eq!(loss(ModelSpec::Linear, &v(&[0.0, 0.0]), &z).unwrap(), 4.5);
        let z = Datum::new([1.0], 0.0);
        assert_relative_eq!(
            loss(ModelSpec::Logistic, &v(&[0.0]), &z).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
        // x'θ = 1, y = 1: -1 + log(1 + e)
        let z = Datum::new([1.0, -1.0], 1.0);
        let got = loss(ModelSpec::Logistic, &v(&[2.0, 1.0]), &z).unwrap();
        assert_relative_eq!(got, 0.313_261_687_518_222_8, epsilon = 1e-15);
    }

    #[test]
    fn gradient_examples() {
        let z = Datum::new([1.0, 2.0], 3.0);
        assert_eq!(
            gradient(ModelSpec::Linear, &v(&[0.0, 0.0]), &z).unwrap(),
            v(&[-3.0, -6.0])
        );
        let z = Datum::new([1.0, -1.0], 1.0);
        assert_eq!(
            gradient(ModelSpec::Logistic, &v(&[0.0, 0.0]), &z).unwrap(),
            v(&[-0.5, 0.5])
        );
    }

    #[test]
    fn hessian_examples() {
        let z = Datum::new([1.0, 2.0], 0.0);
        let h = hessian(ModelSpec::Linear, &v(&[0.3, 0.1]), &z).unwrap();
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]));
        let z = Datum::new([1.0], 1.0);
        let h = hessian(ModelSpec::Logistic, &v(&[0.0]), &z).unwrap();
        assert_eq!(h[(0, 0)], 0.25);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let z = Datum::new([1.0, 2.0], 3.0);
        let theta = v(&[0.0]);
        assert!(matches!(
            loss(ModelSpec::Linear, &theta, &z),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(gradient(ModelSpec::Logistic, &theta, &z).is_err());
        assert!(hessian(ModelSpec::Logistic, &theta, &z).is_err());
    }

    #[test]
    fn softplus_is_stable_for_large_arguments() {
        assert_eq!(softplus(800.0), 800.0);
        assert!(softplus(-800.0) >= 0.0 && softplus(-800.0) < 1e-300);
        let z = Datum::new([1.0], 0.0);
        let l = loss(ModelSpec::Logistic, &v(&[1000.0]), &z).unwrap();
        assert!(l.is_finite());
        assert_relative_eq!(l, 1000.0);
    }

    #[test]
    fn shard_gradient_examples() {
        let one = DataBlock::from_data(&[Datum::new([1.0, 2.0], 3.0)]).unwrap();
        let theta = v(&[0.2, -0.1]);
        assert_eq!(
            shard_gradient(ModelSpec::Linear, &theta, &one).unwrap(),
            gradient(ModelSpec::Linear, &theta, &one.datum(0)).unwrap()
        );
        // opposite responses at θ = 0 give opposite gradients
        let two =
            DataBlock::from_data(&[Datum::new([1.0, 2.0], 3.0), Datum::new([1.0, 2.0], -3.0)])
                .unwrap();
        let g = shard_gradient(ModelSpec::Linear, &v(&[0.0, 0.0]), &two).unwrap();
        assert_eq!(g, v(&[0.0, 0.0]));
    }

    #[test]
    fn shard_gradient_matches_brute_force_sum() {
        for model in [ModelSpec::Linear, ModelSpec::Logistic] {
            let block = random_block(model, 137, 5, 3);
            let theta = v(&[0.1, -0.2, 0.3, 0.0, 0.5]);
            let mut acc = DVector::zeros(5);
            for i in 0..block.len() {
                acc += gradient(model, &theta, &block.datum(i)).unwrap();
            }
            acc /= block.len() as f64;
            let got = shard_gradient(model, &theta, &block).unwrap();
            assert!((&got - &acc).norm() <= 1e-12 * acc.norm().max(1e-300));
        }
    }

    #[test]
    fn empty_shard_is_an_error() {
        let empty = DataBlock::new(DMatrix::zeros(0, 2), DVector::zeros(0)).unwrap();
        assert!(matches!(
            shard_gradient(ModelSpec::Linear, &v(&[0.0, 0.0]), &empty),
            Err(Error::EmptyInput(_))
        ));
        assert!(shard_hessian(ModelSpec::Linear, &v(&[0.0, 0.0]), &empty).is_err());
        assert!(fit_local(ModelSpec::Linear, &empty, &SolverConfig::default()).is_err());
    }

    #[test]
    fn shard_hessian_is_symmetric_psd() {
        for model in [ModelSpec::Linear, ModelSpec::Logistic] {
            let block = random_block(model, 50, 6, 9);
            let h = shard_hessian(model, &v(&[0.5, -0.5, 0.1, 0.2, 0.0, 1.0]), &block).unwrap();
            assert_eq!(h, h.transpose());
            let min_eig = h.symmetric_eigenvalues().min();
            assert!(min_eig >= -1e-10);
        }
    }

    #[test]
    fn fit_local_single_point() {
        let block = DataBlock::from_data(&[Datum::new([1.0], 2.0)]).unwrap();
        let theta = fit_local(ModelSpec::Linear, &block, &SolverConfig::default()).unwrap();
        assert_relative_eq!(theta[0], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn fit_local_linear_matches_lu_normal_equations() {
        let block = random_block(ModelSpec::Linear, 300, 6, 17);
        let theta = fit_local(ModelSpec::Linear, &block, &SolverConfig::default()).unwrap();
        let xtx = block.x().transpose() * block.x();
        let xty = block.x().transpose() * block.y();
        let reference = xtx.lu().solve(&xty).unwrap();
        assert!((&theta - &reference).amax() < 1e-10);
        let g = shard_gradient(ModelSpec::Linear, &theta, &block).unwrap();
        assert!(sup_norm(&g) < 1e-10);
    }

    #[test]
    fn singular_gram_without_ridge() {
        // second column duplicates the first
        let data: Vec<Datum> = (0..5)
            .map(|i| Datum::new([i as f64, i as f64], 1.0))
            .collect();
        let block = DataBlock::from_data(&data).unwrap();
        let cfg = SolverConfig {
            ridge: 0.0,
            ..SolverConfig::default()
        };
        assert!(matches!(
            fit_local(ModelSpec::Linear, &block, &cfg),
            Err(Error::SingularHessian)
        ));
    }

    #[test]
    fn separable_logistic_reports_no_convergence() {
        let data = vec![
            Datum::new([1.0], 1.0),
            Datum::new([2.0], 1.0),
            Datum::new([-1.0], 0.0),
            Datum::new([-2.0], 0.0),
        ];
        let block = DataBlock::from_data(&data).unwrap();
        let cfg = SolverConfig {
            max_newton_iters: 10,
            ..SolverConfig::default()
        };
        match fit_local(ModelSpec::Logistic, &block, &cfg) {
            Err(Error::NoConvergence { last, .. }) => assert!(last[0] > 1.0),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn logistic_rejects_non_binary_response() {
        let block = DataBlock::from_data(&[Datum::new([1.0], 0.5)]).unwrap();
        assert!(fit_local(ModelSpec::Logistic, &block, &SolverConfig::default()).is_err());
    }

    #[test]
    fn logistic_fit_beats_gradient_descent_oracle() {
        let block = random_block(ModelSpec::Logistic, 200, 3, 5);
        let fit = fit_local(ModelSpec::Logistic, &block, &SolverConfig::default()).unwrap();
        // independent oracle: plain gradient descent from the origin
        let mut theta = DVector::zeros(3);
        for _ in 0..20_000 {
            let g = shard_gradient(ModelSpec::Logistic, &theta, &block).unwrap();
            theta -= g * 2.0;
        }
        let l_fit = shard_loss(ModelSpec::Logistic, &fit, &block).unwrap();
        let l_gd = shard_loss(ModelSpec::Logistic, &theta, &block).unwrap();
        assert!(l_fit <= l_gd + 1e-12);
        assert!((&fit - &theta).amax() < 1e-5);
        let truth = v(&[0.3, 0.2, 0.1]);
        assert!(l_fit <= shard_loss(ModelSpec::Logistic, &truth, &block).unwrap());
    }

    #[test]
    fn uniform_weights_reproduce_unweighted_fit() {
        for model in [ModelSpec::Linear, ModelSpec::Logistic] {
            let block = random_block(model, 120, 3, 21);
            let cfg = SolverConfig::default();
            let plain = fit_local(model, &block, &cfg).unwrap();
            let w = vec![7.0; block.len()];
            let weighted = fit_weighted(model, &block, &w, &cfg).unwrap();
            let tol = if model == ModelSpec::Linear { 1e-12 } else { 1e-9 };
            assert!((&plain - &weighted).amax() < tol);
        }
    }

    #[test]
    fn integer_weights_equal_duplicated_rows() {
        let block = random_block(ModelSpec::Linear, 6, 2, 4);
        let w = [2.0, 0.0, 1.0, 3.0, 1.0, 1.0];
        let mut dup = Vec::new();
        for (i, &wi) in w.iter().enumerate() {
            for _ in 0..wi as usize {
                dup.push(block.datum(i));
            }
        }
        let dup = DataBlock::from_data(&dup).unwrap();
        let cfg = SolverConfig::default();
        let a = fit_weighted(ModelSpec::Linear, &block, &w, &cfg).unwrap();
        let b = fit_local(ModelSpec::Linear, &dup, &cfg).unwrap();
        assert!((&a - &b).amax() < 1e-12);
    }

    #[test]
    fn concat_and_rows_round_trip() {
        let block = random_block(ModelSpec::Linear, 10, 3, 8);
        let a = block.rows(0, 4);
        let b = block.rows(4, 6);
        assert_eq!(DataBlock::concat([&a, &b]).unwrap(), block);
        assert_eq!(block.datum(5), b.datum(1));
    }
}
