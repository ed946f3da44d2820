//! Exact computer algebra over non-negatively graded coordinates.
//!
//! Coordinates carry a degree; permuting two factors of degrees `a` and `b`
//! costs the Koszul sign `(-1)^{ab}`. Polynomials are kept in a canonical
//! normal form (coordinates in context order, squares of odd coordinates
//! eliminated), so equality and zero tests are exact. On top of the
//! polynomial ring sit graded vector fields (derivations), their graded
//! commutator, homological ("Q") structure verdicts, and the standard
//! constructions tying Poisson bivectors to degree-1 self-commuting fields
//! on the shifted cotangent bundle.
//!
//! Sign conventions: derivatives are *left* derivatives throughout, i.e.
//! `d/dx (f g) = (df) g + (-1)^{deg(x) deg(f)} f (dg)` for homogeneous `f`.

mod bivector;
mod context;
mod error;
mod field;
mod parse;
mod poly;
pub mod random;

pub use bivector::{
    cotangent_lift, poisson_preservation, BivectorSpec, PhaseSpace, PreservationVerdict,
};
pub use context::{same_context, GradedContext};
pub use error::GradedError;
pub use field::{de_rham_q, GradedVectorField, QVerdict};
pub use parse::parse_polynomial;
pub use poly::GradedPolynomial;
