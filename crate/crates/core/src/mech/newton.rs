use super::error::MechError;
use crate::la::{lu_solve, max_abs};
use crate::scalar::Real;

/// Newton iteration parameters. The defaults match the solver contract used
/// throughout: absolute residual tolerance 1e-12 in the max norm, at most 50
/// iterations, step halving up to 8 times.
#[derive(Debug, Clone, Copy)]
pub struct NewtonCfg<T> {
    pub tol: T,
    pub max_iter: usize,
    pub max_halvings: usize,
}

impl<T: Real> Default for NewtonCfg<T> {
    fn default() -> Self {
        Self { tol: T::of(1e-12), max_iter: 50, max_halvings: 8 }
    }
}

/// Damped Newton on `residual(x) = 0` with a dense Jacobian, starting from
/// the warm-start value already in `x`. Both closures write into row-major
/// buffers. Returns the iteration count.
pub fn newton_solve<T: Real>(
    dim: usize,
    x: &mut [T],
    cfg: &NewtonCfg<T>,
    mut residual: impl FnMut(&[T], &mut [T]),
    mut jacobian: impl FnMut(&[T], &mut [T]),
) -> Result<usize, MechError> {
    debug_assert_eq!(x.len(), dim);
    let mut r = vec![T::zero(); dim];
    let mut jac = vec![T::zero(); dim * dim];
    let mut delta = vec![T::zero(); dim];
    let mut trial = vec![T::zero(); dim];
    let mut r_trial = vec![T::zero(); dim];

    residual(x, &mut r);
    let mut norm = max_abs(&r);
    if !norm.is_finite() {
        return Err(MechError::NonFiniteEvaluation);
    }
    for iter in 0..cfg.max_iter {
        if norm <= cfg.tol {
            return Ok(iter);
        }
        jacobian(x, &mut jac);
        for i in 0..dim {
            delta[i] = -r[i];
        }
        lu_solve(&mut jac, &mut delta, dim).map_err(|_| MechError::SingularJacobian)?;
        // step halving until the residual improves
        let mut scale = T::one();
        let mut accepted = false;
        for _ in 0..=cfg.max_halvings {
            for i in 0..dim {
                trial[i] = x[i] + scale * delta[i];
            }
            residual(&trial, &mut r_trial);
            let trial_norm = max_abs(&r_trial);
            if trial_norm.is_finite() && (trial_norm < norm || trial_norm <= cfg.tol) {
                x.copy_from_slice(&trial);
                r.copy_from_slice(&r_trial);
                norm = trial_norm;
                accepted = true;
                break;
            }
            scale = scale * T::of(0.5);
        }
        if !accepted {
            // take the most damped step and let the iteration cap decide
            for i in 0..dim {
                x[i] = x[i] + scale * delta[i];
            }
            residual(x, &mut r);
            norm = max_abs(&r);
            if !norm.is_finite() {
                return Err(MechError::NonFiniteEvaluation);
            }
        }
    }
    if norm <= cfg.tol {
        Ok(cfg.max_iter)
    } else {
        Err(MechError::NewtonDiverged {
            iterations: cfg.max_iter,
            residual: norm.to_f64().unwrap_or(f64::NAN),
        })
    }
}
