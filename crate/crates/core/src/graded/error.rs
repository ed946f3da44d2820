use std::fmt;

/// Errors from the graded-algebra layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradedError {
    /// Two values from different contexts were combined.
    ContextMismatch,
    DuplicateCoordinate(String),
    BadCoordinateName(String),
    UnknownCoordinate(String),
    CoordinateOutOfRange(usize),
    /// A vector-field component is not homogeneous of the declared degree.
    NotHomogeneous { coordinate: String },
    /// Trig pair members must be distinct degree-0 coordinates.
    BadTrigPair(String),
    /// Dimension or index data inconsistent with the context.
    DimensionMismatch { expected: usize, got: usize },
    /// Bivector component depends on a coordinate of nonzero degree.
    NotBaseFunction { coordinate: String },
    Parse { pos: usize, msg: String },
    NonIntegerExponent { pos: usize },
}

impl fmt::Display for GradedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedError::ContextMismatch => write!(f, "values belong to different contexts"),
            GradedError::DuplicateCoordinate(n) => write!(f, "duplicate coordinate `{n}`"),
            GradedError::BadCoordinateName(n) => write!(f, "invalid coordinate name `{n}`"),
            GradedError::UnknownCoordinate(n) => write!(f, "unknown coordinate `{n}`"),
            GradedError::CoordinateOutOfRange(i) => write!(f, "coordinate index {i} out of range"),
            GradedError::NotHomogeneous { coordinate } => {
                write!(f, "component of `{coordinate}` is not homogeneous of the declared degree")
            }
            GradedError::BadTrigPair(n) => write!(f, "invalid trig pair involving `{n}`"),
            GradedError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            GradedError::NotBaseFunction { coordinate } => {
                write!(f, "component depends on non-base coordinate `{coordinate}`")
            }
            GradedError::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            GradedError::NonIntegerExponent { pos } => {
                write!(f, "exponent at byte {pos} must be a non-negative integer")
            }
        }
    }
}

impl std::error::Error for GradedError {}
