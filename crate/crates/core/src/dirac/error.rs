use std::fmt;

use crate::graded::GradedError;

#[derive(Debug, Clone, PartialEq)]
pub enum DiracError {
    Graded(GradedError),
    /// The polynomial is not homogeneous in the differentials.
    NotAForm,
    WrongFormDegree { expected: usize, got: Option<usize> },
    SpaceMismatch,
    /// Coefficient depends on a differential where a base function is required.
    NotBaseCoefficient,
    /// The annihilator matrix dropped rank during symbolic elimination.
    NonConstantRank,
    EmptyGeneratorList,
    Parse { line: usize, msg: String },
}

impl From<GradedError> for DiracError {
    fn from(e: GradedError) -> Self {
        DiracError::Graded(e)
    }
}

impl fmt::Display for DiracError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiracError::Graded(e) => write!(f, "{e}"),
            DiracError::NotAForm => write!(f, "polynomial is not homogeneous in the differentials"),
            DiracError::WrongFormDegree { expected, got } => match got {
                Some(got) => write!(f, "expected a {expected}-form, got degree {got}"),
                None => write!(f, "expected a {expected}-form, got an inhomogeneous polynomial"),
            },
            DiracError::SpaceMismatch => write!(f, "values belong to different form spaces"),
            DiracError::NotBaseCoefficient => {
                write!(f, "coefficient must be a function on the base")
            }
            DiracError::NonConstantRank => {
                write!(f, "distribution does not have constant rank symbolically")
            }
            DiracError::EmptyGeneratorList => write!(f, "structure specification has no generators"),
            DiracError::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
        }
    }
}

impl std::error::Error for DiracError {}
