//! Euler baselines for constrained Lagrangian systems.
//!
//! These step the unconstrained equations with the multiplier taken from
//! the continuous-time constraint-force formula, evaluated explicitly at
//! the current state: solve `M(q) v' = F(q,v) + lambda . omega(q)` with
//! `lambda` chosen so that `d/dt (omega . v) = 0` instantaneously. Nothing
//! re-projects onto the constraint, so the discrete flow drifts off it;
//! that drift is the point of the comparison.

use crate::expr::Expression;
use crate::la::lu_solve;
use crate::mech::{LagrangianSystem, MechError, State};
use crate::scalar::Real;

/// Precomputed symbolic pieces for the multiplier formula.
#[derive(Debug, Clone)]
pub struct MultiplierDynamics<T> {
    n: usize,
    m: usize,
    mass: Vec<Vec<Expression<T>>>,
    dp_dq: Vec<Vec<Expression<T>>>,
    dl_dq: Vec<Expression<T>>,
    omega: Vec<Vec<Expression<T>>>,
    domega: Vec<Vec<Vec<Expression<T>>>>,
}

impl<T: Real> MultiplierDynamics<T> {
    pub fn new(sys: &LagrangianSystem<T>) -> Self {
        let n = sys.dim();
        let m = sys.constraint_count();
        let mass: Vec<Vec<Expression<T>>> = (0..n)
            .map(|i| (0..n).map(|j| sys.grad_v()[i].diff(n + j)).collect())
            .collect();
        let dp_dq: Vec<Vec<Expression<T>>> = (0..n)
            .map(|i| (0..n).map(|j| sys.grad_v()[i].diff(j)).collect())
            .collect();
        let omega: Vec<Vec<Expression<T>>> = sys
            .constraints()
            .iter()
            .map(|form| form.coeffs.clone())
            .collect();
        let domega: Vec<Vec<Vec<Expression<T>>>> = sys
            .constraints()
            .iter()
            .map(|form| {
                form.coeffs
                    .iter()
                    .map(|c| (0..n).map(|j| c.diff(j)).collect())
                    .collect()
            })
            .collect();
        Self { n, m, mass, dp_dq, dl_dq: sys.grad_q().to_vec(), omega, domega }
    }

    /// Acceleration `v' = M^{-1}(F + lambda . omega)` with the continuous
    /// multiplier.
    pub fn accel(&self, s: &State<T>) -> Result<Vec<T>, MechError> {
        let n = self.n;
        let m = self.m;
        let vals = {
            let mut v = s.q.clone();
            v.extend_from_slice(&s.pv);
            v
        };
        let mut mass = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                mass[i * n + j] = self.mass[i][j].eval(&vals);
            }
        }
        // F_i = dL/dq_i - sum_j dp_i/dq_j v_j
        let mut force = vec![T::zero(); n];
        for i in 0..n {
            let mut acc = self.dl_dq[i].eval(&vals);
            for j in 0..n {
                acc = acc - self.dp_dq[i][j].eval(&vals) * s.pv[j];
            }
            force[i] = acc;
        }
        // y_f = M^{-1} F; y_a = M^{-1} omega^a
        let mut y_f = force.clone();
        let mut mass_copy = mass.clone();
        lu_solve(&mut mass_copy, &mut y_f, n).map_err(|_| MechError::SingularJacobian)?;
        let omega_vals: Vec<Vec<T>> = self
            .omega
            .iter()
            .map(|form| form.iter().map(|c| c.eval(&vals)).collect())
            .collect();
        let mut y_omega: Vec<Vec<T>> = Vec::with_capacity(m);
        for form in &omega_vals {
            let mut y = form.clone();
            let mut mass_copy = mass.clone();
            lu_solve(&mut mass_copy, &mut y, n).map_err(|_| MechError::SingularJacobian)?;
            y_omega.push(y);
        }
        // lambda solves (omega^a . y_b) lambda_b = -(omega^a . y_f + v' Domega^a v)
        let mut lambda = vec![T::zero(); m];
        if m > 0 {
            let dot = |a: &[T], b: &[T]| {
                a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
            };
            let mut sys_mat = vec![T::zero(); m * m];
            let mut rhs = vec![T::zero(); m];
            for a in 0..m {
                for b in 0..m {
                    sys_mat[a * m + b] = dot(&omega_vals[a], &y_omega[b]);
                }
                let mut curvature = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        curvature =
                            curvature + self.domega[a][i][j].eval(&vals) * s.pv[i] * s.pv[j];
                    }
                }
                rhs[a] = -(dot(&omega_vals[a], &y_f) + curvature);
            }
            lu_solve(&mut sys_mat, &mut rhs, m).map_err(|_| MechError::SingularJacobian)?;
            lambda = rhs;
        }
        let mut accel = y_f;
        for (b, y) in y_omega.iter().enumerate() {
            for i in 0..n {
                accel[i] = accel[i] + lambda[b] * y[i];
            }
        }
        Ok(accel)
    }

    /// Forward Euler: `q+ = q + h v`, `v+ = v + h a(q, v)`.
    pub fn step_explicit(&self, s: &State<T>, h: T) -> Result<State<T>, MechError> {
        let a = self.accel(s)?;
        let q = s.q.iter().zip(&s.pv).map(|(&q, &v)| q + h * v).collect();
        let v = s.pv.iter().zip(&a).map(|(&v, &a)| v + h * a).collect();
        let out = State { t: s.t + h, q, pv: v, lambda: Vec::new() };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(MechError::NonFiniteEvaluation)
        }
    }

    /// Semi-implicit Euler: velocity first, then the position uses the new
    /// velocity.
    pub fn step_semi_implicit(&self, s: &State<T>, h: T) -> Result<State<T>, MechError> {
        let a = self.accel(s)?;
        let v: Vec<T> = s.pv.iter().zip(&a).map(|(&v, &a)| v + h * a).collect();
        let q = s.q.iter().zip(&v).map(|(&q, &v)| q + h * v).collect();
        let out = State { t: s.t + h, q, pv: v, lambda: Vec::new() };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(MechError::NonFiniteEvaluation)
        }
    }
}
