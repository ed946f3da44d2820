//! Small dense linear solves, enough for Newton iterations and reduced
//! dynamics on systems with a handful of degrees of freedom.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularMatrix;

impl std::fmt::Display for SingularMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "matrix is singular to working precision")
    }
}

impl std::error::Error for SingularMatrix {}

/// Solve `A x = b` in place by LU with partial pivoting. `a` is row-major
/// `n x n` and is overwritten; `b` is overwritten with the solution.
pub fn lu_solve<T: Real>(a: &mut [T], b: &mut [T], n: usize) -> Result<(), SingularMatrix> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for row in (col + 1)..n {
            let mag = a[row * n + col].abs();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best == T::zero() || !best.is_finite() {
            return Err(SingularMatrix);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in (col + 1)..n {
            let factor = a[row * n + col] / diag;
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let delta = factor * a[col * n + k];
                a[row * n + k] = a[row * n + k] - delta;
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in (col + 1)..n {
            acc = acc - a[col * n + k] * b[k];
        }
        b[col] = acc / a[col * n + col];
    }
    Ok(())
}

/// Infinity norm of a vector.
pub fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_systems() {
        let mut a = [2.0_f64, 1.0, 1.0, 3.0];
        let mut b = [3.0_f64, 5.0];
        lu_solve(&mut a, &mut b, 2).unwrap();
        assert!((b[0] - 0.8).abs() < 1e-14);
        assert!((b[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn pivots_on_zero_diagonal() {
        let mut a = [0.0_f64, 1.0, 1.0, 0.0];
        let mut b = [2.0_f64, 3.0];
        lu_solve(&mut a, &mut b, 2).unwrap();
        assert_eq!(b, [3.0, 2.0]);
    }

    #[test]
    fn rejects_singular() {
        let mut a = [1.0_f64, 2.0, 2.0, 4.0];
        let mut b = [1.0_f64, 2.0];
        assert_eq!(lu_solve(&mut a, &mut b, 2), Err(SingularMatrix));
    }
}
