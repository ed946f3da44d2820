//! Scalar traits: an exact coefficient ring for the symbolic half and a
//! floating-point scalar for the numeric half.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed};

/// Exact coefficient ring for symbolic computation.
///
/// Zero tests must be exact: everything downstream (normal forms, Q-structure
/// verdicts, Dirac certification) relies on `is_zero` being decidable. The
/// default instantiation is `num_rational::BigRational`.
pub trait Coefficient:
    Num + Signed + Clone + PartialEq + Debug + Display + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in coefficient ring")
    }

    /// Exact quotient `n / d`; `d` must be nonzero.
    fn ratio(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }
}

impl<T> Coefficient for T where
    T: Num + Signed + Clone + PartialEq + Debug + Display + FromPrimitive + Send + Sync + 'static
{
}

/// Floating-point scalar for numeric time stepping: f32 or f64.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 representable in scalar")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}
