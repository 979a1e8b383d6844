//! Experiment orchestration.
//!
//! An [`ExperimentConfig`] (JSON) describes one design, a total sample size,
//! grids over `k` and `τ`, and the bootstrap settings. The runners return an
//! [`ExperimentReport`] with one row per `(d, k, τ, method)` cell, which
//! [`emit_report`] writes as CSV or JSON.
//!
//! Replications run on the rayon pool; each one derives its own streams
//! from `root_seed`, and results are merged in replication order, so the
//! statistical columns do not depend on the number of threads.

mod report;
mod run;

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{BootMethod, NormFunctional};
use crate::error::{Error, Result};
use crate::models::{ModelSpec, SolverConfig};
use crate::rng::{Purpose, SeedSpec};
use crate::synthdata::{draw_theta_star, CovKind, DesignSpec};

pub use report::{emit_report, read_report, write_report, ExperimentReport, ReportFormat, ReportRow};
pub use run::{run_bench, run_comparison, run_coverage_experiment, run_oracle_width};

/// A method that produces a width (and, for the gradient methods, a region).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    KGrad,
    NK1Grad,
    Blb,
    Sdb,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::KGrad => "kgrad",
            MethodKind::NK1Grad => "nk1grad",
            MethodKind::Blb => "blb",
            MethodKind::Sdb => "sdb",
        }
    }

    pub fn boot_method(self) -> Option<BootMethod> {
        match self {
            MethodKind::KGrad => Some(BootMethod::KGrad),
            MethodKind::NK1Grad => Some(BootMethod::NK1Grad),
            MethodKind::Blb | MethodKind::Sdb => None,
        }
    }

    fn label(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kgrad" | "k-grad" => Ok(MethodKind::KGrad),
            "nk1grad" | "n+k-1-grad" => Ok(MethodKind::NK1Grad),
            "blb" => Ok(MethodKind::Blb),
            "sdb" => Ok(MethodKind::Sdb),
            other => Err(Error::invalid(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub model: ModelSpec,
    pub cov: CovKind,
    pub d: usize,
    #[serde(default = "default_noise_sd")]
    pub noise_sd: f64,
    /// Fixed `θ*`; drawn from `root_seed` when absent.
    #[serde(default)]
    pub theta_star: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub design: DesignConfig,
    #[serde(rename = "N")]
    pub n_total: usize,
    pub k_grid: Vec<usize>,
    #[serde(default = "default_tau_grid")]
    pub tau_grid: Vec<usize>,
    /// Empty means "the defaults of the runner".
    #[serde(default)]
    pub methods: Vec<MethodKind>,
    #[serde(rename = "B", default = "default_b")]
    pub b: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default = "default_norm")]
    pub norm: NormFunctional,
    #[serde(default)]
    pub root_seed: u64,
    /// Datasets behind the oracle width; 0 skips it.
    #[serde(default = "default_oracle_reps")]
    pub oracle_reps: usize,
    /// BLB resamples per subset.
    #[serde(default = "default_blb_r")]
    pub blb_r: usize,
    /// Timed runs per bench cell.
    #[serde(default = "default_bench_runs")]
    pub bench_runs: usize,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_noise_sd() -> f64 {
    1.0
}
fn default_tau_grid() -> Vec<usize> {
    vec![1]
}
fn default_b() -> usize {
    500
}
fn default_alpha() -> f64 {
    0.95
}
fn default_reps() -> usize {
    200
}
fn default_norm() -> NormFunctional {
    NormFunctional::SupNorm
}
fn default_oracle_reps() -> usize {
    500
}
fn default_blb_r() -> usize {
    100
}
fn default_bench_runs() -> usize {
    50
}

impl ExperimentConfig {
    /// Desk-scale defaults around a single design.
    pub fn new(model: ModelSpec, cov: CovKind, d: usize, n_total: usize, k_grid: Vec<usize>) -> Self {
        Self {
            design: DesignConfig {
                model,
                cov,
                d,
                noise_sd: default_noise_sd(),
                theta_star: None,
            },
            n_total,
            k_grid,
            tau_grid: default_tau_grid(),
            methods: Vec::new(),
            b: default_b(),
            alpha: default_alpha(),
            reps: default_reps(),
            norm: default_norm(),
            root_seed: 0,
            oracle_reps: default_oracle_reps(),
            blb_r: default_blb_r(),
            bench_runs: default_bench_runs(),
            solver: SolverConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.design.d;
        if d == 0 {
            return Err(Error::invalid("d must be positive"));
        }
        if self.n_total == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        if self.k_grid.is_empty() {
            return Err(Error::invalid("k_grid is empty"));
        }
        for &k in &self.k_grid {
            if k == 0 || !self.n_total.is_multiple_of(k) {
                return Err(Error::invalid(format!("k = {k} does not divide N = {}", self.n_total)));
            }
        }
        if self.tau_grid.is_empty() || self.tau_grid.contains(&0) {
            return Err(Error::invalid("tau_grid must be non-empty with every tau >= 1"));
        }
        if self.reps == 0 {
            return Err(Error::invalid("reps must be at least 1"));
        }
        if self.b == 0 {
            return Err(Error::invalid("B must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid("alpha must lie in (0, 1)"));
        }
        if self.blb_r == 0 || self.bench_runs == 0 {
            return Err(Error::invalid("blb_r and bench_runs must be positive"));
        }
        if let Some(t) = &self.design.theta_star {
            if t.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: t.len() });
            }
        }
        self.norm.validate(d)?;
        self.solver.validate()
    }

    pub fn seeds(&self) -> SeedSpec {
        SeedSpec::new(self.root_seed)
    }

    /// The design with `θ*` resolved. `θ*` depends only on `(root_seed, d)`,
    /// so every replication and every `k` sees the same value.
    pub fn design_spec(&self) -> DesignSpec {
        let d = self.design.d;
        let theta_star = match &self.design.theta_star {
            Some(t) => DVector::from_column_slice(t),
            None => draw_theta_star(d, &self.seeds().stream(Purpose::ThetaStar).child(d as u64)),
        };
        DesignSpec::new(self.design.model, self.design.cov, theta_star)
            .with_noise_sd(self.design.noise_sd)
    }

    pub(crate) fn sorted_taus(&self) -> Vec<usize> {
        let mut t = self.tau_grid.clone();
        t.sort_unstable();
        t.dedup();
        t
    }
}

/// Run `f` on a dedicated pool with `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
