//! Benchmark harnesses: the Chaplygin sleigh with its independent reference
//! solution, and a harmonic-oscillator energy-drift study.
//!
//! The reference integrator works on the reduced velocity variables of the
//! constrained system and never touches the stepping code it is judging:
//! the reduced equations are derived symbolically from the Lagrangian by
//! eliminating the multiplier against a basis of the constraint
//! distribution, and integrated with classical RK4.

mod multiplier;
mod oscillator;
mod reduced;
mod sleigh;
mod table;

pub use multiplier::MultiplierDynamics;
pub use oscillator::{oscillator_drift_study, oscillator_system};
pub use reduced::ReducedOde;
pub use sleigh::{
    run_sleigh_benchmark, sleigh_basis, sleigh_reference, sleigh_system, standard_initial_state,
    SleighParams,
};
pub use table::{ErrorRow, ErrorTable};
