//! Exact linear algebra over base functions.
//!
//! The kernel of a matrix of polynomial (base-function) entries is computed
//! by Gaussian elimination over the fraction field; the trig-pair quotient
//! is an integral domain, so zero tests on numerators are sound. Kernel
//! vectors are cleared of denominators, giving polynomial spanning fields.

use std::sync::Arc;

use super::error::DiracError;
use crate::graded::{GradedContext, GradedPolynomial};
use crate::scalar::Coefficient;

/// A quotient of base functions; no reduction to lowest terms is attempted
/// (the matrices here are tiny).
#[derive(Debug, Clone)]
struct Frac<C> {
    num: GradedPolynomial<C>,
    den: GradedPolynomial<C>,
}

impl<C: Coefficient> Frac<C> {
    fn from_poly(p: GradedPolynomial<C>) -> Self {
        let one = GradedPolynomial::one(p.context());
        Self { num: p, den: one }
    }

    fn zero(ctx: &Arc<GradedContext>) -> Self {
        Self { num: GradedPolynomial::zero(ctx), den: GradedPolynomial::one(ctx) }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            num: self.num.checked_mul(&other.num).expect("same context"),
            den: self.den.checked_mul(&other.den).expect("same context"),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        // a/b - c/d = (ad - cb) / bd
        let ad = self.num.checked_mul(&other.den).expect("same context");
        let cb = other.num.checked_mul(&self.den).expect("same context");
        Self {
            num: ad.checked_sub(&cb).expect("same context"),
            den: self.den.checked_mul(&other.den).expect("same context"),
        }
    }

    fn div(&self, other: &Self) -> Self {
        Self {
            num: self.num.checked_mul(&other.den).expect("same context"),
            den: self.den.checked_mul(&other.num).expect("same context"),
        }
    }
}

/// Polynomial spanning set of the kernel `{v : A v = 0}` of an `m x n`
/// matrix of base functions, via reduced row echelon form over the fraction
/// field. Returns one vector per free column; the result has generically
/// maximal rank `n - rank(A)`.
pub fn kernel_basis<C: Coefficient>(
    ctx: &Arc<GradedContext>,
    rows: &[Vec<GradedPolynomial<C>>],
) -> Result<Vec<Vec<GradedPolynomial<C>>>, DiracError> {
    let m = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut mat: Vec<Vec<Frac<C>>> = rows
        .iter()
        .map(|r| r.iter().map(|p| Frac::from_poly(p.clone())).collect())
        .collect();

    // forward elimination with full reduction above pivots
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0;
    for col in 0..n {
        if row >= m {
            break;
        }
        let Some(pivot_row) = (row..m).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, pivot_row);
        let pivot = mat[row][col].clone();
        for c in 0..n {
            mat[row][c] = mat[row][c].div(&pivot);
        }
        for r in 0..m {
            if r == row || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in 0..n {
                let delta = factor.mul(&mat[row][c]);
                mat[r][c] = mat[r][c].sub(&delta);
            }
        }
        pivots.push((row, col));
        row += 1;
    }

    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        // x_free = 1, x_pivot = -R[pivot_row][free]
        let mut vec_f: Vec<Frac<C>> = (0..n).map(|_| Frac::zero(ctx)).collect();
        vec_f[free] = Frac::from_poly(GradedPolynomial::one(ctx));
        for &(r, c) in &pivots {
            if !mat[r][free].is_zero() {
                let mut v = mat[r][free].clone();
                v.num = v.num.negate();
                vec_f[c] = v;
            }
        }
        // clear denominators: multiply entry i by the product of the other denominators
        let mut cleared: Vec<GradedPolynomial<C>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut p = vec_f[i].num.clone();
            for (j, f) in vec_f.iter().enumerate() {
                if j != i {
                    p = p.checked_mul(&f.den)?;
                }
            }
            cleared.push(p);
        }
        basis.push(cleared);
    }
    Ok(basis)
}

/// Rank of a numeric matrix over the exact coefficient field.
pub fn rank_at_point<C: Coefficient>(rows: &[Vec<C>]) -> usize {
    let m = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut mat: Vec<Vec<C>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..n {
        if rank >= m {
            break;
        }
        let Some(pivot_row) = (rank..m).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot_row);
        let pivot = mat[rank][col].clone();
        for r in (rank + 1)..m {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone() / pivot.clone();
            for c in col..n {
                let delta = factor.clone() * mat[rank][c].clone();
                mat[r][c] = mat[r][c].clone() - delta;
            }
        }
        rank += 1;
    }
    rank
}
