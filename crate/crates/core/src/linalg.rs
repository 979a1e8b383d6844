//! Dense symmetric positive definite helpers.
//!
//! Every Hessian inversion in the crate goes through [`spd_inverse`] or
//! [`spd_solve`]: Cholesky first, then a single retry with `ridge * I`
//! added to the diagonal, then [`Error::SingularHessian`].

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

fn factor(h: &DMatrix<f64>, ridge: f64) -> Result<Cholesky<f64, Dyn>> {
    if !h.iter().all(|v| v.is_finite()) {
        return Err(Error::SingularHessian);
    }
    if let Some(chol) = Cholesky::new(h.clone()) {
        return Ok(chol);
    }
    if ridge > 0.0 {
        let mut shifted = h.clone();
        for i in 0..shifted.nrows() {
            shifted[(i, i)] += ridge;
        }
        if let Some(chol) = Cholesky::new(shifted) {
            return Ok(chol);
        }
    }
    Err(Error::SingularHessian)
}

pub fn spd_inverse(h: &DMatrix<f64>, ridge: f64) -> Result<DMatrix<f64>> {
    let inv = factor(h, ridge)?.inverse();
    Ok(symmetrize(inv))
}

pub fn spd_solve(h: &DMatrix<f64>, rhs: &DVector<f64>, ridge: f64) -> Result<DVector<f64>> {
    Ok(factor(h, ridge)?.solve(rhs))
}

/// Copy the upper triangle onto the lower one so the result is exactly symmetric.
pub fn symmetrize(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let d = m.nrows();
    for i in 0..d {
        for j in (i + 1)..d {
            m[(j, i)] = m[(i, j)];
        }
    }
    m
}

pub fn sup_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}
