//! Reduced dynamics of a constrained Lagrangian system.
//!
//! Given a basis `e_1..e_r` of the constraint distribution, the velocity is
//! written `v = A(q) u` and the multiplier is eliminated by contracting the
//! Euler–Lagrange equations with the basis fields:
//!
//! ```text
//! K(q,u) u' = b(q,u),      q' = A(q) u,
//! K_ab = sum_i e_a^i dp_i/du_b,
//! b_a  = sum_i e_a^i ( dL/dq_i(q, Au) - sum_j dp_i/dq_j (Au)_j ),
//! ```
//!
//! with `p_i(q,u) = dL/dv_i(q, A(q)u)`. Everything is derived symbolically
//! from the Lagrangian, so the reference solution shares no stepping code
//! (and no hand algebra) with the integrators it is used to judge.

use std::sync::Arc;

use crate::expr::{Expression, VarSet};
use crate::la::lu_solve;
use crate::mech::{
    step_count, LagrangianSystem, MechError, RecordKind, Sample, State, TrajectoryRecord,
};
use crate::sample::SplitMix64;
use crate::scalar::Real;

/// Symbolically reduced equations of motion over variables `q1..qn, u1..ur`.
#[derive(Debug, Clone)]
pub struct ReducedOde<T> {
    n: usize,
    r: usize,
    vars: Arc<VarSet>,
    basis: Vec<Vec<Expression<T>>>,
    k: Vec<Vec<Expression<T>>>,
    b: Vec<Expression<T>>,
}

impl<T: Real> ReducedOde<T> {
    /// Build from a system and a spanning basis of the constraint
    /// distribution (each field given by components over the system
    /// variables, depending on positions only). The basis is checked to
    /// annihilate every constraint at seeded sample configurations.
    pub fn build(
        sys: &LagrangianSystem<T>,
        basis_on_sys: &[Vec<Expression<T>>],
    ) -> Result<Self, MechError> {
        let n = sys.dim();
        let r = basis_on_sys.len();
        if r == 0 || r + sys.constraint_count() != n {
            return Err(MechError::DimensionMismatch {
                expected: n - sys.constraint_count(),
                got: r,
            });
        }
        for field in basis_on_sys {
            if field.len() != n {
                return Err(MechError::DimensionMismatch { expected: n, got: field.len() });
            }
            for comp in field {
                if (0..n).any(|j| comp.depends_on(n + j)) {
                    return Err(MechError::ConstraintDependsOnVelocity);
                }
            }
        }
        // sampled annihilation check: e_a . omega^a = 0
        let mut rng = SplitMix64::new(0x0ba5_ca1e);
        for _ in 0..16 {
            let mut vals = vec![T::zero(); 2 * n];
            for v in vals.iter_mut().take(n) {
                *v = T::of(rng.int_in(-20, 20) as f64 / 10.0);
            }
            for form in sys.constraints() {
                for field in basis_on_sys {
                    let mut acc = T::zero();
                    for i in 0..n {
                        acc = acc + field[i].eval(&vals) * form.coeffs[i].eval(&vals);
                    }
                    if acc.abs() > T::of(1e-9) {
                        return Err(MechError::ConstraintViolated {
                            residual: acc.abs().to_f64().unwrap_or(f64::NAN),
                        });
                    }
                }
            }
        }

        let mut names: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
        names.extend((1..=r).map(|a| format!("u{a}")));
        let vars = VarSet::new(names);
        // source [q, v] -> reduced [q, u] with v = A(q) u
        let mut to_reduced: Vec<Expression<T>> =
            (0..n).map(|j| Expression::var(&vars, j)).collect();
        let zero = Expression::constant(&vars, T::zero());
        let basis: Vec<Vec<Expression<T>>> = basis_on_sys
            .iter()
            .map(|field| {
                field
                    .iter()
                    .map(|comp| {
                        let mut reps: Vec<Expression<T>> =
                            (0..n).map(|j| Expression::var(&vars, j)).collect();
                        reps.extend((0..n).map(|_| zero.clone()));
                        comp.substitute(&vars, &reps).expect("total substitution")
                    })
                    .collect()
            })
            .collect();
        let au: Vec<Expression<T>> = (0..n)
            .map(|j| {
                let mut acc = zero.clone();
                for (a, field) in basis.iter().enumerate() {
                    acc = acc.add(&Expression::var(&vars, n + a).mul(&field[j]));
                }
                acc
            })
            .collect();
        to_reduced.extend(au.iter().cloned());

        let p: Vec<Expression<T>> = sys
            .grad_v()
            .iter()
            .map(|e| e.substitute(&vars, &to_reduced).expect("total substitution"))
            .collect();
        let force: Vec<Expression<T>> = sys
            .grad_q()
            .iter()
            .map(|e| e.substitute(&vars, &to_reduced).expect("total substitution"))
            .collect();

        let mut k = vec![vec![zero.clone(); r]; r];
        let mut b = vec![zero.clone(); r];
        for a in 0..r {
            for (i, pi) in p.iter().enumerate() {
                let ea_i = &basis[a][i];
                for (bb, kab) in k[a].iter_mut().enumerate() {
                    *kab = kab.add(&ea_i.mul(&pi.diff(n + bb)));
                }
                let mut drift = force[i].clone();
                for (j, au_j) in au.iter().enumerate() {
                    drift = drift.sub(&pi.diff(j).mul(au_j));
                }
                b[a] = b[a].add(&ea_i.mul(&drift));
            }
        }
        Ok(Self { n, r, vars, basis, k, b })
    }

    pub fn reduced_dim(&self) -> usize {
        self.n + self.r
    }

    /// Velocity `v = A(q) u` at a reduced state.
    pub fn velocity(&self, z: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|j| {
                let mut acc = T::zero();
                for (a, field) in self.basis.iter().enumerate() {
                    acc = acc + z[self.n + a] * field[j].eval(z);
                }
                acc
            })
            .collect()
    }

    /// Reduced velocities from a full state, by least squares; errors if the
    /// state is not in the distribution.
    pub fn project(&self, s: &State<T>) -> Result<Vec<T>, MechError> {
        let n = self.n;
        let r = self.r;
        let mut z = vec![T::zero(); n + r];
        z[..n].copy_from_slice(&s.q);
        let a_cols: Vec<Vec<T>> = self
            .basis
            .iter()
            .map(|field| field.iter().map(|e| e.eval(&z)).collect())
            .collect();
        let mut normal = vec![T::zero(); r * r];
        let mut rhs = vec![T::zero(); r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = T::zero();
                for row in 0..n {
                    acc = acc + a_cols[i][row] * a_cols[j][row];
                }
                normal[i * r + j] = acc;
            }
            let mut acc = T::zero();
            for row in 0..n {
                acc = acc + a_cols[i][row] * s.pv[row];
            }
            rhs[i] = acc;
        }
        lu_solve(&mut normal, &mut rhs, r).map_err(|_| MechError::SingularJacobian)?;
        z[n..].copy_from_slice(&rhs);
        let v = self.velocity(&z);
        let mut worst = T::zero();
        for i in 0..n {
            worst = worst.max((v[i] - s.pv[i]).abs());
        }
        if worst > T::of(1e-9) {
            return Err(MechError::ConstraintViolated {
                residual: worst.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(rhs)
    }

    fn rhs(&self, z: &[T], out: &mut [T]) -> Result<(), MechError> {
        let n = self.n;
        let r = self.r;
        let mut kmat = vec![T::zero(); r * r];
        let mut udot = vec![T::zero(); r];
        for a in 0..r {
            for bb in 0..r {
                kmat[a * r + bb] = self.k[a][bb].eval(z);
            }
            udot[a] = self.b[a].eval(z);
        }
        lu_solve(&mut kmat, &mut udot, r).map_err(|_| MechError::SingularJacobian)?;
        let v = self.velocity(z);
        out[..n].copy_from_slice(&v);
        out[n..].copy_from_slice(&udot);
        Ok(())
    }

    /// Classical RK4 on the reduced equations, recording full states (with
    /// exactly reconstructed velocities) every `stride` steps.
    pub fn integrate_rk4(
        &self,
        sys: &LagrangianSystem<T>,
        s0: &State<T>,
        h: T,
        t_end: T,
        stride: usize,
    ) -> Result<TrajectoryRecord<T>, MechError> {
        if !(h.is_finite() && h > T::zero()) || !(t_end.is_finite() && t_end >= T::zero()) {
            return Err(MechError::InvalidStep);
        }
        let stride = stride.max(1);
        let n = self.n;
        let r = self.r;
        let dim = n + r;
        let u0 = self.project(s0)?;
        let mut z = vec![T::zero(); dim];
        z[..n].copy_from_slice(&s0.q);
        z[n..].copy_from_slice(&u0);

        let steps = step_count(t_end, h);
        let mut rec = TrajectoryRecord::new(RecordKind::Lagrangian, n);
        let push = |rec: &mut TrajectoryRecord<T>, t: T, z: &[T]| {
            let state = State::lagrangian(t, z[..n].to_vec(), self.velocity(z));
            let energy = sys.energy(&state);
            let constraint_residual = Some(sys.constraint_residual(&state));
            rec.push(Sample { state, energy, constraint_residual, power_residual: None });
        };
        push(&mut rec, s0.t, &z);

        let half = T::of(0.5);
        let sixth = T::one() / T::of(6.0);
        let mut k1 = vec![T::zero(); dim];
        let mut k2 = vec![T::zero(); dim];
        let mut k3 = vec![T::zero(); dim];
        let mut k4 = vec![T::zero(); dim];
        let mut tmp = vec![T::zero(); dim];
        for step in 1..=steps {
            self.rhs(&z, &mut k1)?;
            for i in 0..dim {
                tmp[i] = z[i] + half * h * k1[i];
            }
            self.rhs(&tmp, &mut k2)?;
            for i in 0..dim {
                tmp[i] = z[i] + half * h * k2[i];
            }
            self.rhs(&tmp, &mut k3)?;
            for i in 0..dim {
                tmp[i] = z[i] + h * k3[i];
            }
            self.rhs(&tmp, &mut k4)?;
            for i in 0..dim {
                let incr = k1[i] + T::of(2.0) * (k2[i] + k3[i]) + k4[i];
                z[i] = z[i] + h * sixth * incr;
            }
            if !z.iter().all(|v| v.is_finite()) {
                return Err(MechError::NonFiniteEvaluation);
            }
            if step % stride == 0 {
                push(&mut rec, s0.t + T::of_usize(step) * h, &z);
            }
        }
        Ok(rec)
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expression;

    /// Unconstrained oscillator as a degenerate case: basis = identity.
    #[test]
    fn reduces_unconstrained_oscillator_to_itself() {
        let vars = LagrangianSystem::<f64>::canonical_vars(1);
        let l = Expression::parse(&vars, "v1^2/2 - q1^2/2").unwrap();
        let sys = LagrangianSystem::new(1, l, vec![]).unwrap();
        let basis = vec![vec![Expression::constant(&vars, 1.0)]];
        let ode = ReducedOde::build(&sys, &basis).unwrap();
        let s0 = State::lagrangian(0.0, vec![1.0], vec![0.0]);
        let rec = ode.integrate_rk4(&sys, &s0, 0.01, 6.4, 640).unwrap();
        let last = rec.last_state().unwrap();
        // exact solution q = cos t
        assert!((last.q[0] - (6.4_f64).cos()).abs() < 1e-7);
    }

    #[test]
    fn rejects_constraint_violating_start() {
        let vars = LagrangianSystem::<f64>::canonical_vars(2);
        let l = Expression::parse(&vars, "(v1^2 + v2^2)/2").unwrap();
        let omega = crate::mech::OneForm {
            coeffs: vec![Expression::constant(&vars, 0.0), Expression::constant(&vars, 1.0)],
        };
        let sys = LagrangianSystem::new(2, l, vec![omega]).unwrap();
        let basis = vec![vec![
            Expression::constant(&vars, 1.0),
            Expression::constant(&vars, 0.0),
        ]];
        let ode = ReducedOde::build(&sys, &basis).unwrap();
        let bad = State::lagrangian(0.0, vec![0.0, 0.0], vec![0.0, 1.0]);
        assert!(matches!(
            ode.project(&bad),
            Err(MechError::ConstraintViolated { .. })
        ));
    }
}
