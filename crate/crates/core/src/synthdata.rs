//! Synthetic Gaussian designs and contiguous sharding.

use std::path::Path;

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_distr::{StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::models::{sigmoid, DataBlock, ModelSpec};
use crate::rng::StreamKey;

/// Covariance structure of the covariates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovKind {
    /// `Σ[l][l'] = rho^|l - l'|`
    Toeplitz { rho: f64 },
    /// unit diagonal, `rho` everywhere else
    EquiCorr { rho: f64 },
    Identity,
}

impl CovKind {
    pub const fn toeplitz() -> Self {
        CovKind::Toeplitz { rho: 0.9 }
    }

    pub const fn equi_corr() -> Self {
        CovKind::EquiCorr { rho: 0.8 }
    }
}

pub fn build_covariance(cov: CovKind, d: usize) -> DMatrix<f64> {
    match cov {
        CovKind::Toeplitz { rho } => {
            DMatrix::from_fn(d, d, |i, j| rho.powi((i as i32 - j as i32).abs()))
        }
        CovKind::EquiCorr { rho } => DMatrix::from_fn(d, d, |i, j| if i == j { 1.0 } else { rho }),
        CovKind::Identity => DMatrix::identity(d, d),
    }
}

/// Data-generating process for one experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub d: usize,
    pub cov: CovKind,
    pub model: ModelSpec,
    pub theta_star: DVector<f64>,
    /// Standard deviation of the additive noise; ignored for logistic.
    pub noise_sd: f64,
}

impl DesignSpec {
    pub fn new(model: ModelSpec, cov: CovKind, theta_star: DVector<f64>) -> Self {
        Self {
            d: theta_star.len(),
            cov,
            model,
            theta_star,
            noise_sd: 1.0,
        }
    }

    pub fn with_noise_sd(mut self, noise_sd: f64) -> Self {
        self.noise_sd = noise_sd;
        self
    }
}

/// `θ*` with i.i.d. Uniform[-0.5, 0.5] coordinates.
pub fn draw_theta_star(d: usize, key: &StreamKey) -> DVector<f64> {
    let mut rng = key.rng();
    let unif = Uniform::new_inclusive(-0.5, 0.5).expect("valid bounds");
    DVector::from_fn(d, |_, _| rng.sample(unif))
}

/// Draw `n_total` observations. Row `i` consumes the stream strictly after
/// row `i - 1`, so a larger sample from the same key extends a smaller one.
pub fn sample_dataset(spec: &DesignSpec, n_total: usize, key: &StreamKey) -> Result<DataBlock> {
    if n_total == 0 {
        return Err(Error::EmptyInput("sample size"));
    }
    check_dim(spec.d, spec.theta_star.len())?;
    if spec.model == ModelSpec::Linear && !(spec.noise_sd >= 0.0) {
        return Err(Error::invalid("noise_sd must be nonnegative"));
    }
    let sigma = build_covariance(spec.cov, spec.d);
    let l = Cholesky::new(sigma).ok_or(Error::NotPositiveDefinite)?.unpack();

    let d = spec.d;
    let mut rng = key.rng();
    let mut x = DMatrix::zeros(n_total, d);
    let mut y = DVector::zeros(n_total);
    let mut z = DVector::zeros(d);
    for i in 0..n_total {
        for zj in z.iter_mut() {
            *zj = rng.sample(StandardNormal);
        }
        let xi = &l * &z;
        let eta = xi.dot(&spec.theta_star);
        y[i] = match spec.model {
            ModelSpec::Linear => {
                let e: f64 = rng.sample(StandardNormal);
                eta + spec.noise_sd * e
            }
            ModelSpec::Logistic => f64::from(rng.random::<f64>() < sigmoid(eta)),
        };
        x.row_mut(i).copy_from(&xi.transpose());
    }
    DataBlock::new(x, y)
}

/// `k` shards of equal size `n`; shard 0 belongs to the master.
#[derive(Debug, Clone, PartialEq)]
pub struct ShardedDataset {
    shards: Vec<DataBlock>,
    n: usize,
}

impl ShardedDataset {
    pub fn from_shards(shards: Vec<DataBlock>) -> Result<Self> {
        let first = shards.first().ok_or(Error::EmptyInput("shards"))?;
        let (n, d) = (first.len(), first.dim());
        if n == 0 {
            return Err(Error::EmptyInput("shard"));
        }
        for s in &shards {
            if s.len() != n {
                return Err(Error::invalid("all shards must have the same size"));
            }
            check_dim(d, s.dim())?;
        }
        Ok(Self { shards, n })
    }

    pub fn shards(&self) -> &[DataBlock] {
        &self.shards
    }

    pub fn master(&self) -> &DataBlock {
        &self.shards[0]
    }

    /// Observations per shard.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of shards.
    pub fn k(&self) -> usize {
        self.shards.len()
    }

    pub fn total(&self) -> usize {
        self.n * self.shards.len()
    }

    pub fn dim(&self) -> usize {
        self.shards[0].dim()
    }

    /// All shards stacked in shard order.
    pub fn pooled(&self) -> DataBlock {
        DataBlock::concat(&self.shards).expect("shards share a dimension")
    }
}

/// Split into `k` contiguous blocks; block `j` goes to shard `j`.
pub fn shard(data: &DataBlock, k: usize) -> Result<ShardedDataset> {
    if k == 0 || !data.len().is_multiple_of(k) {
        return Err(Error::invalid(format!(
            "k = {k} does not divide N = {}",
            data.len()
        )));
    }
    let n = data.len() / k;
    ShardedDataset::from_shards((0..k).map(|j| data.rows(j * n, n)).collect())
}

/// Write `x_1..x_d,y` rows.
pub fn write_csv(data: &DataBlock, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=data.dim()).map(|j| format!("x_{j}")).collect();
    header.push("y".into());
    w.write_record(&header)?;
    for i in 0..data.len() {
        let mut rec: Vec<String> = data.x().row(i).iter().map(|v| format!("{v:?}")).collect();
        rec.push(format!("{:?}", data.y()[i]));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<DataBlock> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let d = headers
        .len()
        .checked_sub(1)
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::invalid("CSV needs at least one covariate column and y"))?;
    if headers.get(d) != Some("y") {
        return Err(Error::invalid("last CSV column must be y"));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        check_dim(d + 1, rec.len())?;
        for j in 0..d {
            xs.push(parse_field(&rec[j])?);
        }
        ys.push(parse_field(&rec[d])?);
    }
    let rows = ys.len();
    DataBlock::new(
        DMatrix::from_row_slice(rows, d, &xs),
        DVector::from_vec(ys),
    )
}

fn parse_field(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("not a number: {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Purpose, SeedSpec};

    #[test]
    fn covariance_examples() {
        let t = build_covariance(CovKind::toeplitz(), 2);
        assert_eq!(t, DMatrix::from_row_slice(2, 2, &[1.0, 0.9, 0.9, 1.0]));
        let e = build_covariance(CovKind::equi_corr(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(e[(i, j)], if i == j { 1.0 } else { 0.8 });
            }
        }
        assert_eq!(build_covariance(CovKind::Identity, 5), DMatrix::identity(5, 5));
    }

    #[test]
    fn covariances_are_symmetric_and_factor() {
        for cov in [CovKind::toeplitz(), CovKind::equi_corr(), CovKind::Identity] {
            for d in [1, 2, 3, 8, 32, 64, 128] {
                let s = build_covariance(cov, d);
                assert_eq!(s, s.transpose());
                assert!(Cholesky::new(s).is_some(), "{cov:?} d={d}");
            }
        }
    }

    #[test]
    fn theta_star_is_deterministic_and_bounded() {
        let key = SeedSpec::new(1).stream(Purpose::ThetaStar);
        let a = draw_theta_star(64, &key);
        assert_eq!(a, draw_theta_star(64, &key));
        assert!(a.iter().all(|v| (-0.5..=0.5).contains(v)));
    }

    #[test]
    fn theta_star_mean_is_zero() {
        let base = SeedSpec::new(2).stream(Purpose::ThetaStar);
        let m = 100_000;
        let mean = (0..m)
            .map(|i| draw_theta_star(1, &base.child(i))[0])
            .sum::<f64>()
            / m as f64;
        // Uniform[-0.5, 0.5] has variance 1/12
        let se = (1.0 / 12.0 / m as f64).sqrt();
        assert!(mean.abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn noiseless_linear_is_exact() {
        let spec = DesignSpec::new(
            ModelSpec::Linear,
            CovKind::Identity,
            DVector::from_row_slice(&[0.2, -0.4, 0.1]),
        )
        .with_noise_sd(0.0);
        let data = sample_dataset(&spec, 50, &SeedSpec::new(3).stream(Purpose::Data)).unwrap();
        let fitted = data.x() * &spec.theta_star;
        assert_eq!(&fitted, data.y());
    }

    #[test]
    fn logistic_at_zero_is_balanced() {
        let spec = DesignSpec::new(ModelSpec::Logistic, CovKind::toeplitz(), DVector::zeros(2));
        let m = 100_000;
        let data = sample_dataset(&spec, m, &SeedSpec::new(4).stream(Purpose::Data)).unwrap();
        assert!(data.y().iter().all(|&y| y == 0.0 || y == 1.0));
        let mean = data.y().mean();
        let se = (0.25 / m as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn sampling_is_reproducible_and_prefix_stable() {
        let spec = DesignSpec::new(
            ModelSpec::Linear,
            CovKind::toeplitz(),
            DVector::from_row_slice(&[0.1, 0.2, 0.3]),
        );
        let key = SeedSpec::new(5).stream(Purpose::Data);
        let a = sample_dataset(&spec, 40, &key).unwrap();
        assert_eq!(a, sample_dataset(&spec, 40, &key).unwrap());
        let b = sample_dataset(&spec, 80, &key).unwrap();
        assert_eq!(b.rows(0, 40), a);
    }

    #[test]
    fn empirical_toeplitz_covariance() {
        let d = 4;
        let m = 100_000;
        let spec = DesignSpec::new(ModelSpec::Linear, CovKind::toeplitz(), DVector::zeros(d));
        let data = sample_dataset(&spec, m, &SeedSpec::new(6).stream(Purpose::Data)).unwrap();
        let sigma = build_covariance(CovKind::toeplitz(), d);
        let x = data.x();
        for a in 0..d {
            for b in a..d {
                let prods: Vec<f64> = (0..m).map(|i| x[(i, a)] * x[(i, b)]).collect();
                let mean = prods.iter().sum::<f64>() / m as f64;
                let var = prods.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
                let se = (var / m as f64).sqrt();
                assert!(
                    (mean - sigma[(a, b)]).abs() < 3.0 * se,
                    "entry ({a},{b}): {mean} vs {}",
                    sigma[(a, b)]
                );
            }
        }
    }

    #[test]
    fn not_pd_covariance_errors() {
        let spec = DesignSpec::new(
            ModelSpec::Linear,
            CovKind::EquiCorr { rho: 1.5 },
            DVector::zeros(3),
        );
        assert!(matches!(
            sample_dataset(&spec, 10, &SeedSpec::new(0).stream(Purpose::Data)),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn sharding_examples() {
        let spec = DesignSpec::new(ModelSpec::Linear, CovKind::Identity, DVector::zeros(2));
        let data = sample_dataset(&spec, 4, &SeedSpec::new(7).stream(Purpose::Data)).unwrap();
        let s = shard(&data, 2).unwrap();
        assert_eq!((s.n(), s.k(), s.total()), (2, 2, 4));
        assert_eq!(s.shards()[0], data.rows(0, 2));
        assert_eq!(s.shards()[1], data.rows(2, 2));
        assert_eq!(shard(&data, 1).unwrap().master(), &data);
        let singles = shard(&data, 4).unwrap();
        assert_eq!(singles.n(), 1);
        assert_eq!(singles.pooled(), data);
        assert!(shard(&data, 3).is_err());
        assert!(shard(&data, 0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let spec = DesignSpec::new(
            ModelSpec::Logistic,
            CovKind::toeplitz(),
            DVector::from_row_slice(&[0.3, -0.2]),
        );
        let data = sample_dataset(&spec, 25, &SeedSpec::new(8).stream(Purpose::Data)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        write_csv(&data, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("x_1,x_2,y\n"));
        assert_eq!(read_csv(&path).unwrap(), data);
    }
}
