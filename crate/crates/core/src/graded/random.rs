//! Seeded random graded objects for randomized checks.

use std::sync::Arc;

use super::context::GradedContext;
use super::field::GradedVectorField;
use super::poly::{GradedPolynomial, Monomial};
use crate::sample::SplitMix64;
use crate::scalar::Coefficient;

/// All exponent vectors of the given total degree with per-coordinate
/// exponent at most `max_exp` (odd coordinates capped at 1).
pub fn monomials_of_degree(
    ctx: &Arc<GradedContext>,
    degree: i64,
    max_exp: u32,
) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; ctx.len()];
    fn go(
        ctx: &GradedContext,
        idx: usize,
        remaining: i64,
        max_exp: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if idx == ctx.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let cap = if ctx.is_odd(idx) { max_exp.min(1) } else { max_exp };
        for e in 0..=cap {
            let used = e as i64 * ctx.degree(idx) as i64;
            if ctx.degree(idx) > 0 && used > remaining {
                break;
            }
            current[idx] = e;
            go(ctx, idx + 1, remaining - used, max_exp, current, out);
        }
        current[idx] = 0;
    }
    go(ctx, 0, degree, max_exp, &mut current, &mut out);
    out
}

/// Random polynomial with up to `max_terms` monomials, exponents at most
/// `max_exp`, and small nonzero rational coefficients.
pub fn polynomial<C: Coefficient>(
    rng: &mut SplitMix64,
    ctx: &Arc<GradedContext>,
    max_terms: usize,
    max_exp: u32,
) -> GradedPolynomial<C> {
    let terms = rng.usize_below(max_terms + 1);
    let mut acc = GradedPolynomial::zero(ctx);
    for _ in 0..terms {
        let mono: Monomial = (0..ctx.len())
            .map(|i| {
                let cap = if ctx.is_odd(i) { 1 } else { max_exp };
                rng.usize_below(cap as usize + 1) as u32
            })
            .collect();
        let coeff: C = rng.nonzero_rational(3, 2);
        let term = GradedPolynomial::from_terms(ctx, [(mono, coeff)]).expect("valid term");
        acc = acc.checked_add(&term).expect("same context");
    }
    acc
}

/// Random nonzero homogeneous polynomial of the given total degree, or the
/// zero polynomial when no monomial of that degree exists.
pub fn homogeneous<C: Coefficient>(
    rng: &mut SplitMix64,
    ctx: &Arc<GradedContext>,
    degree: i64,
    max_exp: u32,
) -> GradedPolynomial<C> {
    let monos = monomials_of_degree(ctx, degree, max_exp);
    if monos.is_empty() {
        return GradedPolynomial::zero(ctx);
    }
    let picks = 1 + rng.usize_below(monos.len().min(3));
    let mut acc = GradedPolynomial::zero(ctx);
    for _ in 0..picks {
        let mono = monos[rng.usize_below(monos.len())].clone();
        let coeff: C = rng.nonzero_rational(3, 2);
        let term = GradedPolynomial::from_terms(ctx, [(mono, coeff)]).expect("valid term");
        acc = acc.checked_add(&term).expect("same context");
    }
    acc
}

/// Random homogeneous vector field of the given degree (components are
/// homogeneous of `deg(coord) + degree`, some possibly zero).
pub fn field<C: Coefficient>(
    rng: &mut SplitMix64,
    ctx: &Arc<GradedContext>,
    degree: i64,
    max_exp: u32,
) -> GradedVectorField<C> {
    let components: Vec<GradedPolynomial<C>> = (0..ctx.len())
        .map(|i| {
            if rng.chance(1, 3) {
                GradedPolynomial::zero(ctx)
            } else {
                homogeneous(rng, ctx, ctx.degree(i) as i64 + degree, max_exp)
            }
        })
        .collect();
    GradedVectorField::new(ctx, degree, components).expect("components are homogeneous")
}
