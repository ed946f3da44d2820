use std::fmt;

use crate::expr::ExprError;

#[derive(Debug, Clone, PartialEq)]
pub enum MechError {
    Expr(ExprError),
    /// Verlet (or the explicit symplectic-Euler path) needs H = T(p) + V(q).
    NonSeparable,
    /// Newton failed to reach tolerance.
    NewtonDiverged { iterations: usize, residual: f64 },
    /// The linearized system was singular (degenerate Legendre transform or
    /// singular step Jacobian).
    SingularJacobian,
    NonFiniteEvaluation,
    /// Step size must be finite (and positive where a horizon is involved).
    InvalidStep,
    IncompatibleMethod { method: &'static str, system: &'static str },
    DimensionMismatch { expected: usize, got: usize },
    /// Constraint coefficients must be functions of the positions only.
    ConstraintDependsOnVelocity,
    /// A coefficient depends on a variable it must not (H or J/R/g on t,
    /// input signals on the state).
    BadDependence { what: &'static str },
    /// A one-form expression was not linear in the differentials.
    NotAOneForm,
    /// Constraint one-forms are linearly dependent at a sampled state.
    DependentConstraints,
    /// The state violates a constraint where an exact one is required.
    ConstraintViolated { residual: f64 },
    /// A step inside `simulate` failed; carries the 1-based step index.
    StepFailed { index: usize, source: Box<MechError> },
    Parse { line: usize, msg: String },
}

impl From<ExprError> for MechError {
    fn from(e: ExprError) -> Self {
        MechError::Expr(e)
    }
}

impl fmt::Display for MechError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechError::Expr(e) => write!(f, "{e}"),
            MechError::NonSeparable => write!(f, "Hamiltonian is not separable as T(p) + V(q)"),
            MechError::NewtonDiverged { iterations, residual } => {
                write!(f, "Newton did not converge after {iterations} iterations (residual {residual:.3e})")
            }
            MechError::SingularJacobian => write!(f, "singular Jacobian in implicit solve"),
            MechError::NonFiniteEvaluation => write!(f, "non-finite value during evaluation"),
            MechError::InvalidStep => write!(f, "invalid step size or horizon"),
            MechError::IncompatibleMethod { method, system } => {
                write!(f, "method `{method}` does not apply to {system} systems")
            }
            MechError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            MechError::ConstraintDependsOnVelocity => {
                write!(f, "constraint coefficients must depend on positions only")
            }
            MechError::BadDependence { what } => {
                write!(f, "{what} depends on a variable it must not")
            }
            MechError::NotAOneForm => write!(f, "expression is not linear in the differentials"),
            MechError::DependentConstraints => {
                write!(f, "constraint one-forms are linearly dependent at a sampled state")
            }
            MechError::ConstraintViolated { residual } => {
                write!(f, "state violates the constraint (residual {residual:.3e})")
            }
            MechError::StepFailed { index, source } => {
                write!(f, "step {index} failed: {source}")
            }
            MechError::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
        }
    }
}

impl std::error::Error for MechError {}
