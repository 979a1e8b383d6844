//! In-process master-worker cluster.
//!
//! Node 1 (the master) owns shard 0 and may touch it freely. Worker shards
//! are only ever read inside [`Cluster::broadcast_and_gather_gradients`],
//! which is also the only operation that charges the [`CommLedger`].

use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{check_dim, Result};
use crate::linalg;
use crate::models::{self, DataBlock, ModelSpec};
use crate::synthdata::ShardedDataset;

/// Communication counters: one round per broadcast+gather cycle, and the
/// number of reals moved between master and workers.
#[derive(Debug, Default)]
pub struct CommLedger {
    rounds: AtomicU64,
    scalars_sent: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LedgerSnapshot {
    pub rounds: u64,
    pub scalars_sent: u64,
}

impl CommLedger {
    fn charge_round(&self, scalars: u64) {
        self.rounds.fetch_add(1, Ordering::SeqCst);
        self.scalars_sent.fetch_add(scalars, Ordering::SeqCst);
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            rounds: self.rounds.load(Ordering::SeqCst),
            scalars_sent: self.scalars_sent.load(Ordering::SeqCst),
        }
    }
}

#[derive(Debug)]
pub struct Cluster {
    sharded: ShardedDataset,
    model: ModelSpec,
    ledger: CommLedger,
    worker_reads: AtomicU64,
    parallel: bool,
}

impl Cluster {
    pub fn new(sharded: ShardedDataset, model: ModelSpec) -> Result<Self> {
        for s in sharded.shards() {
            model.validate_block(s)?;
        }
        Ok(Self {
            sharded,
            model,
            ledger: CommLedger::default(),
            worker_reads: AtomicU64::new(0),
            parallel: true,
        })
    }

    /// Evaluate worker gradients on the rayon pool (default) or in order on
    /// the calling thread. Results are bitwise identical either way.
    pub fn with_parallel_workers(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn model(&self) -> ModelSpec {
        self.model
    }

    pub fn k(&self) -> usize {
        self.sharded.k()
    }

    pub fn n(&self) -> usize {
        self.sharded.n()
    }

    pub fn total(&self) -> usize {
        self.sharded.total()
    }

    pub fn dim(&self) -> usize {
        self.sharded.dim()
    }

    pub fn sharded(&self) -> &ShardedDataset {
        &self.sharded
    }

    pub fn master_shard(&self) -> &DataBlock {
        self.sharded.master()
    }

    pub fn ledger(&self) -> LedgerSnapshot {
        self.ledger.snapshot()
    }

    /// Number of times any worker shard has been read.
    pub fn worker_reads(&self) -> u64 {
        self.worker_reads.load(Ordering::SeqCst)
    }

    /// Send `θ` to every worker and collect `[∇L_1(θ), ..., ∇L_k(θ)]`.
    ///
    /// Charges one round and `2 (k - 1) d` scalars: `d` out and `d` back
    /// per worker. The master's own gradient is free.
    pub fn broadcast_and_gather_gradients(&self, theta: &DVector<f64>) -> Result<Vec<DVector<f64>>> {
        check_dim(self.dim(), theta.len())?;
        let shards = self.sharded.shards();
        let eval = |(j, shard): (usize, &DataBlock)| {
            if j > 0 {
                self.worker_reads.fetch_add(1, Ordering::SeqCst);
            }
            models::shard_gradient(self.model, theta, shard)
        };
        let grads: Result<Vec<_>> = if self.parallel {
            shards.par_iter().enumerate().map(eval).collect()
        } else {
            shards.iter().enumerate().map(eval).collect()
        };
        let grads = grads?;
        let workers = (self.k() - 1) as u64;
        self.ledger.charge_round(2 * workers * self.dim() as u64);
        Ok(grads)
    }

    /// Per-datum gradients on the master shard. No communication.
    pub fn master_per_datum_gradients(&self, theta: &DVector<f64>) -> Result<Vec<DVector<f64>>> {
        models::per_datum_gradients(self.model, theta, self.master_shard())
    }

    pub fn master_gradient(&self, theta: &DVector<f64>) -> Result<DVector<f64>> {
        models::shard_gradient(self.model, theta, self.master_shard())
    }

    pub fn master_hessian(&self, theta: &DVector<f64>) -> Result<DMatrix<f64>> {
        models::shard_hessian(self.model, theta, self.master_shard())
    }

    /// `∇²L_1(θ)^{-1}` via Cholesky with the ridge retry. No communication.
    pub fn master_hessian_inverse(&self, theta: &DVector<f64>, ridge: f64) -> Result<DMatrix<f64>> {
        linalg::spd_inverse(&self.master_hessian(theta)?, ridge)
    }
}

/// Arithmetic mean in index order.
pub fn mean_vector(vs: &[DVector<f64>]) -> DVector<f64> {
    let mut acc = DVector::zeros(vs[0].len());
    for v in vs {
        acc += v;
    }
    acc / vs.len() as f64
}
