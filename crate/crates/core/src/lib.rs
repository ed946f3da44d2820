//! Graded exterior calculus and structure-preserving integrators for
//! finite-dimensional mechanics.
//!
//! The crate has two halves that share nothing but conventions:
//!
//! * an exact symbolic half ([`graded`], [`dirac`]) working over an exact
//!   coefficient ring (rationals by default), used to build and certify
//!   graded structures: homological vector fields, Poisson bivectors,
//!   differential forms, and Dirac structures;
//! * a numeric half ([`expr`], [`mech`], [`bench`](mod@bench)) working over a
//!   floating-point scalar, used to integrate Hamiltonian, constrained
//!   Lagrangian, and port-Hamiltonian systems with structure diagnostics.
//!
//! All core types are generic over the scalar; the aliases below fix the
//! default instantiations (`BigRational` for exact work, `f64` for numerics).

// indexed loops over small dense matrices stay as written
#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod dirac;
pub mod expr;
pub mod graded;
pub mod la;
pub mod mech;
pub mod sample;
pub mod scalar;

pub use scalar::{Coefficient, Real};

// re-exported so downstream code can name coefficient types directly
pub use num_rational;
pub use num_traits;

/// Default exact coefficient ring.
pub type Rat = num_rational::BigRational;
/// Default floating-point scalar.
pub type Scalar = f64;

/// Graded polynomial over the default exact ring.
pub type Poly = graded::GradedPolynomial<Rat>;
/// Graded vector field over the default exact ring.
pub type VectorField = graded::GradedVectorField<Rat>;
/// Bivector over the default exact ring.
pub type Bivector = graded::BivectorSpec<Rat>;
/// Differential form over the default exact ring.
pub type Form = dirac::DifferentialForm<Rat>;
/// Pontryagin-bundle section over the default exact ring.
pub type Section = dirac::PontryaginSection<Rat>;

/// Expression tree over the default float.
pub type Expr = expr::Expression<Scalar>;
/// Mechanical system over the default float.
pub type System = mech::MechSystem<Scalar>;
/// Simulation state over the default float.
pub type State = mech::State<Scalar>;
/// Trajectory record over the default float.
pub type Trajectory = mech::TrajectoryRecord<Scalar>;
