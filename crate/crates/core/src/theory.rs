//! Minimal number of CSL rounds for bootstrap validity.
//!
//! Sizes enter through exponents: `n = d^γn`, `k = d^γk`. Each
//! (model family, method) pair has its own feasibility region and closed
//! form for `τ_min`; the GLM forms add a burn-in `τ0` and an offset `ν0`.

use serde::{Deserialize, Serialize};

use crate::bootstrap::BootMethod;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelFamily {
    Linear,
    Glm,
}

impl std::str::FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ModelFamily::Linear),
            "glm" | "logistic" => Ok(ModelFamily::Glm),
            other => Err(Error::invalid(format!("unknown model family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauPlan {
    pub gamma_n: f64,
    pub gamma_k: f64,
    pub feasible: bool,
    pub tau_min: Option<u32>,
    /// GLM burn-in rounds.
    pub tau0: Option<u32>,
    /// GLM offset; nominally in (0, 1].
    pub nu0: Option<f64>,
    /// Set when `ν0` falls outside (0, 1] (it is exactly 0 whenever
    /// `log2((γn-1)/(γn-4))` is an integer).
    pub nu0_out_of_range: bool,
}

const SNAP: f64 = 1e-12;

/// Floor that treats values within `1e-12` of an integer as that integer.
fn snapped_floor(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= SNAP {
        r
    } else {
        x.floor()
    }
}

fn to_rounds(x: f64) -> u32 {
    debug_assert!(x >= 0.0 && x.is_finite());
    x as u32
}

pub fn tau_min(family: ModelFamily, method: BootMethod, gamma_n: f64, gamma_k: f64) -> TauPlan {
    let mut plan = TauPlan {
        gamma_n,
        gamma_k,
        feasible: false,
        tau_min: None,
        tau0: None,
        nu0: None,
        nu0_out_of_range: false,
    };
    let (gn, gk) = (gamma_n, gamma_k);
    if !(gn >= 0.0 && gk >= 0.0 && gn.is_finite() && gk.is_finite()) {
        return plan;
    }
    match family {
        ModelFamily::Linear => {
            let tau = match method {
                BootMethod::KGrad if gn > 1.0 && gk > 3.0 => {
                    let inner = ((gk + 1.0) / (gn - 1.0)).max(1.0 + 3.0 / (gn - 1.0));
                    Some(1.0 + snapped_floor(inner))
                }
                BootMethod::NK1Grad if gn > 1.0 && gn.max(gk) > 3.0 && gn + gk > 4.0 => {
                    let num = (gk - 1.0).max(gn.min(gk)).max(1.0) + 2.0;
                    Some(1.0 + snapped_floor(num / (gn - 1.0)))
                }
                _ => None,
            };
            if let Some(t) = tau {
                plan.feasible = true;
                plan.tau_min = Some(to_rounds(t));
            }
        }
        ModelFamily::Glm => {
            let ok = match method {
                BootMethod::KGrad => gn > 4.0 && gk > 3.0,
                BootMethod::NK1Grad => gn > 4.0 && gn + gk > 5.0,
            };
            if !ok {
                return plan;
            }
            let tau0 = 1.0 + snapped_floor(((gn - 1.0) / (gn - 4.0)).log2());
            let nu0 = 2.0 - tau0.exp2() * (gn - 4.0) / (gn - 1.0);
            let tau = match method {
                BootMethod::KGrad => tau0 + snapped_floor((gk - 2.0) / (gn - 1.0) + nu0).max(1.0),
                BootMethod::NK1Grad => {
                    let num = (gk - 1.0).max(gn.min(gk)) - 1.0;
                    tau0 + snapped_floor(num / (gn - 1.0) + nu0)
                }
            };
            plan.feasible = true;
            plan.tau0 = Some(to_rounds(tau0));
            plan.nu0 = Some(nu0);
            plan.nu0_out_of_range = !(nu0 > SNAP && nu0 <= 1.0 + SNAP);
            plan.tau_min = Some(to_rounds(tau));
        }
    }
    plan
}

/// `(ln n / ln d, ln k / ln d)`.
pub fn exponents_from_sizes(n: usize, k: usize, d: usize) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(Error::invalid("d must be at least 2"));
    }
    if n == 0 || k == 0 {
        return Err(Error::invalid("n and k must be positive"));
    }
    let ld = (d as f64).ln();
    Ok(((n as f64).ln() / ld, (k as f64).ln() / ld))
}
