//! Distributed multiplier bootstrap for simultaneous inference.
//!
//! The crate simulates a master-worker cluster holding `k` shards of `n`
//! observations each, runs the communication-efficient surrogate likelihood
//! (CSL) estimator for `τ` rounds, and then bootstraps a sup-norm (or
//! coordinate, or ℓ2) confidence region on the master alone using either
//! the `k-grad` or the `n+k-1-grad` multiplier scheme.
//!
//! Module map:
//!
//! * [`models`] - least-squares and logistic loss, gradient, Hessian, local Newton fits
//! * [`synthdata`] - Toeplitz / equi-correlation Gaussian designs and sharding
//! * [`cluster`] - the simulated cluster and its communication ledger
//! * [`csl`] - the CSL iteration
//! * [`bootstrap`] - `k-grad` / `n+k-1-grad` draws, quantiles, regions, covariance diagnostics
//! * [`baselines`] - centralized fit, oracle width, oracle multiplier bootstrap, BLB, SDB
//! * [`theory`] - minimal round counts for bootstrap validity
//! * [`harness`] - coverage, comparison and timing experiments with CSV/JSON reports

pub mod baselines;
pub mod bootstrap;
pub mod cluster;
pub mod csl;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod models;
pub mod rng;
pub mod synthdata;
pub mod theory;

pub use bootstrap::{BootMethod, BootstrapSummary, NormFunctional};
pub use cluster::{Cluster, CommLedger, LedgerSnapshot};
pub use csl::{CslOutput, CslState};
pub use error::{Error, Result};
pub use models::{DataBlock, Datum, ModelSpec, SolverConfig};
pub use rng::{Purpose, SeedSpec, StreamKey};
pub use synthdata::{CovKind, DesignSpec, ShardedDataset};

pub use nalgebra::{DMatrix, DVector};
