//! Communication-efficient surrogate likelihood (CSL) iteration.
//!
//! Starting from the master's local minimizer, each round broadcasts the
//! current iterate, gathers the `k` shard gradients and takes a Newton step
//! with the master Hessian in place of the global one:
//!
//! ```text
//! θ(t) = θ(t-1) - ∇²L_1(θ(t-1))^{-1} · (1/k) Σ_j ∇L_j(θ(t-1))
//! ```
//!
//! No damping is applied. After `τ` rounds the bootstrap consumes
//! `θ(τ)` together with the gradients and inverse master Hessian evaluated
//! at `θ(τ-1)`.

use nalgebra::{DMatrix, DVector};

use crate::cluster::{mean_vector, Cluster};
use crate::error::{Error, Result};
use crate::models::{self, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CslState {
    pub t: usize,
    /// `θ(t-1)`; `None` before the first round.
    pub theta_prev: Option<DVector<f64>>,
    /// `θ(t)`.
    pub theta: DVector<f64>,
    /// `∇L_j(θ(t-1))` for every shard, in shard order.
    pub grads_at_prev: Vec<DVector<f64>>,
    /// `∇²L_1(θ(t-1))^{-1}`.
    pub inv_hessian: Option<DMatrix<f64>>,
}

/// What the bootstrap needs after `τ` rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct CslOutput {
    /// `θ(τ)`.
    pub theta: DVector<f64>,
    /// `θ(τ-1)`, where `grads` and `inv_hessian` were evaluated.
    pub theta_prev: DVector<f64>,
    pub grads: Vec<DVector<f64>>,
    pub inv_hessian: DMatrix<f64>,
    pub rounds: usize,
}

impl CslState {
    pub fn output(&self) -> Option<CslOutput> {
        Some(CslOutput {
            theta: self.theta.clone(),
            theta_prev: self.theta_prev.clone()?,
            grads: self.grads_at_prev.clone(),
            inv_hessian: self.inv_hessian.clone()?,
            rounds: self.t,
        })
    }
}

/// `θ(0)`: the minimizer of the master's local loss.
pub fn csl_init(cluster: &Cluster, cfg: &SolverConfig) -> Result<CslState> {
    let theta = models::fit_local(cluster.model(), cluster.master_shard(), cfg)?;
    Ok(CslState {
        t: 0,
        theta_prev: None,
        theta,
        grads_at_prev: Vec::new(),
        inv_hessian: None,
    })
}

/// One broadcast+gather and one surrogate Newton step.
pub fn csl_round(state: &CslState, cluster: &Cluster, cfg: &SolverConfig) -> Result<CslState> {
    let grads = cluster.broadcast_and_gather_gradients(&state.theta)?;
    let inv = cluster.master_hessian_inverse(&state.theta, cfg.ridge)?;
    let step = &inv * mean_vector(&grads);
    let theta = &state.theta - step;
    if !theta.iter().all(|v| v.is_finite()) {
        return Err(Error::SingularHessian);
    }
    Ok(CslState {
        t: state.t + 1,
        theta_prev: Some(state.theta.clone()),
        theta,
        grads_at_prev: grads,
        inv_hessian: Some(inv),
    })
}

/// `csl_init` followed by `tau` rounds.
pub fn csl_run(cluster: &Cluster, tau: usize, cfg: &SolverConfig) -> Result<CslOutput> {
    if tau == 0 {
        return Err(Error::invalid("tau must be at least 1"));
    }
    let mut state = csl_init(cluster, cfg)?;
    for _ in 0..tau {
        state = csl_round(&state, cluster, cfg)?;
    }
    Ok(state.output().expect("at least one round ran"))
}
