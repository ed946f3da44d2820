//! Differential forms as graded functions, Cartan calculus, the Pontryagin
//! pairing and Courant–Dorfman bracket, and certification of almost-Dirac /
//! Dirac structures.
//!
//! A p-form on the base is a graded polynomial of degree p on the shifted
//! tangent space: one degree-1 coordinate (the differential) per base
//! coordinate. The exterior derivative is the action of the de Rham field,
//! contraction with a vector field is the odd derivation sending each
//! differential to the corresponding component, and the Lie derivative is
//! the Cartan formula `L_v = i_v d + d i_v`.
//!
//! Angle coordinates are handled exactly by rationalization: an angle enters
//! through a cosine/sine pair subject to `c^2 + s^2 = 1`, its differential
//! is an ordinary degree-1 coordinate, and the partial derivative along the
//! angle is the well-defined derivation `c d/ds - s d/dc`.
//!
//! Closure checks run on generators only. For the three structure variants
//! implemented here this is enough: the pairing and the bracket obstruction
//! are function-linear over the base once isotropy holds, so closure of a
//! spanning set of sections implies closure of the module they generate.

mod error;
mod file;
mod form;
mod kernel;
mod section;
mod space;
mod structure;

pub use error::DiracError;
pub use file::{parse_dirac_file, ParsedDirac};
pub use form::DifferentialForm;
pub use kernel::{kernel_basis, rank_at_point};
pub use section::{
    courant_bracket, interior_product, lie_derivative, pairing, BaseVectorField,
    PontryaginSection,
};
pub use space::{BaseCoord, CoordSpec, FormSpace};
pub use structure::{
    AlmostDiracVerdict, DiracSpec, IntegrabilityVerdict, Obstruction, SampleConfig,
};
