//! Numeric mechanical systems and structure-diagnosing time steppers.
//!
//! Three system variants are supported: canonical Hamiltonian systems,
//! Lagrangian systems with linear-in-velocity constraints, and
//! port-Hamiltonian systems `x' = (J - R) dH/dx + g f(t)`. Derivatives are
//! symbolic (see [`crate::expr`]); implicit steps solve their residual
//! systems by damped Newton with symbolic Jacobians.
//!
//! A single trajectory is strictly sequential and bit-deterministic.
//! Systems are immutable and can be shared across threads for independent
//! runs.

mod error;
mod file;
mod newton;
mod record;
mod step;
mod step_count;
mod system;

pub use error::MechError;
pub use file::parse_system_file;
pub use newton::{newton_solve, NewtonCfg};
pub use record::{power_balance_residual, RecordKind, Sample, TrajectoryRecord};
pub use step_count::step_count;
pub use step::{
    simulate, step, step_dirac1, step_explicit_euler, step_port_midpoint, step_symplectic_euler,
    step_verlet, Method,
};
pub use system::{
    HamiltonianSystem, LagrangianSystem, MechSystem, OneForm, PortSystem, State,
};
