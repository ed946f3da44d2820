//! The Chaplygin sleigh: a planar body whose contact point can only move
//! along the body axis. Configuration `(x, y, th)` with Lagrangian
//!
//! ```text
//! L = m/2 ( vx^2 + vy^2 + (I/m + a^2) vth^2
//!           - 2 a sin(th) vx vth + 2 a cos(th) vy vth )
//! ```
//!
//! and the no-side-slip constraint `sin(th) dx - cos(th) dy = 0`.

use crate::expr::Expression;
use crate::mech::{
    simulate, step_count, LagrangianSystem, MechError, MechSystem, Method, NewtonCfg,
    RecordKind, Sample, State, TrajectoryRecord,
};
use crate::scalar::Real;

use super::multiplier::MultiplierDynamics;
use super::reduced::ReducedOde;
use super::table::{ErrorRow, ErrorTable};

/// Physical parameters: mass, contact-to-center distance, moment of inertia.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SleighParams<T> {
    pub mass: T,
    pub offset: T,
    pub inertia: T,
}

impl<T: Real> SleighParams<T> {
    pub fn new(mass: T, offset: T, inertia: T) -> Result<Self, MechError> {
        let ok = mass > T::zero()
            && inertia > T::zero()
            && offset >= T::zero()
            && (inertia + mass * offset * offset) > T::zero();
        if ok {
            Ok(Self { mass, offset, inertia })
        } else {
            Err(MechError::InvalidStep)
        }
    }

    /// The default benchmark configuration `(m, a, I) = (1, 0.1, 1)`.
    pub fn standard() -> Self {
        Self { mass: T::one(), offset: T::of(0.1), inertia: T::one() }
    }
}

/// The default benchmark initial state: origin, heading along +x, unit
/// forward speed and unit angular rate (constraint-satisfying at `th = 0`).
pub fn standard_initial_state<T: Real>() -> State<T> {
    State::lagrangian(
        T::zero(),
        vec![T::zero(), T::zero(), T::zero()],
        vec![T::one(), T::zero(), T::one()],
    )
}

/// Build the constrained Lagrangian system for the given parameters.
pub fn sleigh_system<T: Real>(p: &SleighParams<T>) -> LagrangianSystem<T> {
    let vars = LagrangianSystem::<T>::canonical_vars(3);
    let v = |i: usize| Expression::var(&vars, 3 + i);
    let th = Expression::var(&vars, 2);
    let c = |x: T| Expression::constant(&vars, x);

    let half_m = c(p.mass * T::of(0.5));
    let ratio = c(p.inertia / p.mass + p.offset * p.offset);
    let two_a = c(T::of(2.0) * p.offset);
    // vx^2 + vy^2 + (I/m + a^2) vth^2 - 2a sin(th) vx vth + 2a cos(th) vy vth
    let sum = v(0)
        .powi(2)
        .add(&v(1).powi(2))
        .add(&ratio.mul(&v(2).powi(2)))
        .sub(&two_a.mul(&th.sin()).mul(&v(0)).mul(&v(2)))
        .add(&two_a.mul(&th.cos()).mul(&v(1)).mul(&v(2)));
    let l = half_m.mul(&sum);

    let omega = crate::mech::OneForm {
        coeffs: vec![th.sin(), th.cos().neg(), c(T::zero())],
    };
    LagrangianSystem::new(3, l, vec![omega]).expect("sleigh system is well-formed")
}

/// Basis of the constraint distribution: the body axis and the rotation.
pub fn sleigh_basis<T: Real>(sys: &LagrangianSystem<T>) -> Vec<Vec<Expression<T>>> {
    let vars = sys.vars();
    let th = Expression::var(vars, 2);
    let zero = Expression::constant(vars, T::zero());
    let one = Expression::constant(vars, T::one());
    vec![
        vec![th.cos(), th.sin(), zero.clone()],
        vec![zero.clone(), zero, one],
    ]
}

/// Reference trajectory via the reduced variables (forward speed and
/// angular rate) integrated with RK4 and reconstructed exactly on the
/// constraint. Errors if `s0` violates the constraint.
pub fn sleigh_reference<T: Real>(
    p: &SleighParams<T>,
    s0: &State<T>,
    h_ref: T,
    t_end: T,
    stride: usize,
) -> Result<TrajectoryRecord<T>, MechError> {
    let sys = sleigh_system(p);
    let ode = ReducedOde::build(&sys, &sleigh_basis(&sys))?;
    ode.integrate_rk4(&sys, s0, h_ref, t_end, stride)
}

fn run_multiplier_euler<T: Real>(
    sys: &LagrangianSystem<T>,
    dynamics: &MultiplierDynamics<T>,
    s0: &State<T>,
    h: T,
    steps: usize,
    semi_implicit: bool,
) -> Result<TrajectoryRecord<T>, MechError> {
    let mut rec = TrajectoryRecord::new(RecordKind::Lagrangian, sys.dim());
    let push = |rec: &mut TrajectoryRecord<T>, state: &State<T>| {
        rec.push(Sample {
            state: state.clone(),
            energy: sys.energy(state),
            constraint_residual: Some(sys.constraint_residual(state)),
            power_residual: None,
        });
    };
    let mut state = s0.clone();
    push(&mut rec, &state);
    for k in 1..=steps {
        state = if semi_implicit {
            dynamics.step_semi_implicit(&state, h)?
        } else {
            dynamics.step_explicit(&state, h)?
        };
        state.t = s0.t + T::of_usize(k) * h;
        push(&mut rec, &state);
    }
    Ok(rec)
}

/// Run the three-method comparison at step `h` over `[0, t_end]`:
/// explicit and semi-implicit Euler on the multiplier formulation, and the
/// Dirac step on the constrained system, each scored against the reduced
/// reference at `h_ref = h/100`.
pub fn run_sleigh_benchmark<T: Real>(
    p: &SleighParams<T>,
    s0: &State<T>,
    h: T,
    t_end: T,
) -> Result<ErrorTable<T>, MechError> {
    if !(h.is_finite() && h > T::zero()) {
        return Err(MechError::InvalidStep);
    }
    let sys = sleigh_system(p);
    let steps = step_count(t_end, h);
    // horizon nudged half a step up so every integrator takes exactly `steps`
    let horizon = (T::of_usize(steps) + T::of(0.5)) * h;
    let reference = sleigh_reference(p, s0, h / T::of(100.0), horizon, steps * 100)?;
    let ref_end = reference.last_state().ok_or(MechError::InvalidStep)?.clone();

    let dynamics = MultiplierDynamics::new(&sys);
    let explicit = run_multiplier_euler(&sys, &dynamics, s0, h, steps, false)?;
    let semi = run_multiplier_euler(&sys, &dynamics, s0, h, steps, true)?;
    let dirac = simulate(
        &MechSystem::Lagrangian(sys.clone()),
        Method::Dirac1,
        s0,
        h,
        horizon,
        1,
        &NewtonCfg::default(),
    )?;

    let labels = ["x", "y", "th"].map(String::from);
    let mut table = ErrorTable::new(labels);
    for (name, rec) in [
        ("explicit-euler", &explicit),
        ("symplectic-euler", &semi),
        ("dirac1", &dirac),
    ] {
        let end = rec.last_state().ok_or(MechError::InvalidStep)?;
        let endpoint_error: Vec<T> = (0..3)
            .map(|i| (end.q[i] - ref_end.q[i]).abs())
            .collect();
        table.rows.push(ErrorRow {
            method: name.to_string(),
            endpoint_error,
            max_constraint_residual: rec.max_constraint_residual(),
            max_energy_deviation: rec.max_energy_deviation(),
        });
    }
    Ok(table)
}
