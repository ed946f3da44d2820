//! Energy-drift study on the harmonic oscillator `H = (p^2 + q^2)/2`.

use crate::expr::Expression;
use crate::mech::{
    simulate, HamiltonianSystem, MechError, MechSystem, Method, NewtonCfg, State,
};
use crate::scalar::Real;

use super::table::{ErrorRow, ErrorTable};

/// The oscillator as a canonical Hamiltonian system.
pub fn oscillator_system<T: Real>() -> HamiltonianSystem<T> {
    let vars = HamiltonianSystem::<T>::canonical_vars(1);
    let h = Expression::parse(&vars, "(q1^2 + p1^2)/2").expect("fixed expression parses");
    HamiltonianSystem::new(1, h).expect("oscillator is well-formed")
}

/// Run explicit Euler, symplectic Euler, and Verlet from `(q, p) = (1, 0)`
/// and tabulate endpoint errors against the exact solution
/// `(cos t, -sin t)` together with the run-wide energy deviation.
pub fn oscillator_drift_study<T: Real>(h: T, t_end: T) -> Result<ErrorTable<T>, MechError> {
    if !(h.is_finite() && h > T::zero()) {
        return Err(MechError::InvalidStep);
    }
    let sys = MechSystem::Hamiltonian(oscillator_system::<T>());
    let s0 = State::hamiltonian(T::zero(), vec![T::one()], vec![T::zero()]);
    let labels = ["q", "p"].map(String::from);
    let mut table = ErrorTable::new(labels);
    for method in [Method::ExplicitEuler, Method::SymplecticEuler, Method::Verlet] {
        let rec = simulate(&sys, method, &s0, h, t_end, 1, &NewtonCfg::default())?;
        let end = rec.last_state().ok_or(MechError::InvalidStep)?;
        let q_exact = end.t.cos();
        let p_exact = -end.t.sin();
        table.rows.push(ErrorRow {
            method: method.name().to_string(),
            endpoint_error: vec![(end.q[0] - q_exact).abs(), (end.pv[0] - p_exact).abs()],
            max_constraint_residual: T::zero(),
            max_energy_deviation: rec.max_energy_deviation(),
        });
    }
    Ok(table)
}
