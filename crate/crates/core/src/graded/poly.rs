use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::context::{same_context, GradedContext};
use super::error::GradedError;
use crate::scalar::Coefficient;

/// Exponent vector aligned with the context's coordinate list.
pub type Monomial = Vec<u32>;

/// A polynomial over graded coordinates, stored in normal form:
///
/// * monomials are exponent vectors in context order, so the sign bookkeeping
///   of reordering odd factors happens once, at multiplication time;
/// * squares of odd-degree coordinates vanish and are never stored;
/// * sine powers `s^k`, `k >= 2`, of a trig pair are rewritten via
///   `s^2 = 1 - c^2`;
/// * zero coefficients are dropped (the zero polynomial has no terms).
///
/// Normal form makes equality and zero tests exact, which everything in the
/// crate's symbolic half depends on.
#[derive(Debug, Clone)]
pub struct GradedPolynomial<C> {
    ctx: Arc<GradedContext>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> GradedPolynomial<C> {
    pub fn zero(ctx: &Arc<GradedContext>) -> Self {
        Self { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<GradedContext>, c: C) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(vec![0; ctx.len()], c);
        }
        p
    }

    pub fn one(ctx: &Arc<GradedContext>) -> Self {
        Self::constant(ctx, C::one())
    }

    pub fn coordinate(ctx: &Arc<GradedContext>, idx: usize) -> Result<Self, GradedError> {
        if idx >= ctx.len() {
            return Err(GradedError::CoordinateOutOfRange(idx));
        }
        let mut mono = vec![0; ctx.len()];
        mono[idx] = 1;
        let mut p = Self::zero(ctx);
        p.insert_term(mono, C::one());
        Ok(p)
    }

    pub fn coordinate_named(ctx: &Arc<GradedContext>, name: &str) -> Result<Self, GradedError> {
        let idx = ctx
            .index_of(name)
            .ok_or_else(|| GradedError::UnknownCoordinate(name.to_string()))?;
        Self::coordinate(ctx, idx)
    }

    /// Build from raw `(monomial, coefficient)` pairs; the result is
    /// normalized (odd squares dropped, trig powers reduced, like terms
    /// merged).
    pub fn from_terms(
        ctx: &Arc<GradedContext>,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Result<Self, GradedError> {
        let mut p = Self::zero(ctx);
        for (mono, c) in terms {
            if mono.len() != ctx.len() {
                return Err(GradedError::DimensionMismatch {
                    expected: ctx.len(),
                    got: mono.len(),
                });
            }
            p.insert_term(mono, c);
        }
        Ok(p)
    }

    pub fn context(&self) -> &Arc<GradedContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has degree-0 support only in
    /// the empty monomial.
    pub fn constant_value(&self) -> Option<C> {
        if self.is_zero() {
            return Some(C::zero());
        }
        if self.terms.len() == 1 {
            let (mono, c) = self.terms.iter().next().unwrap();
            if mono.iter().all(|&e| e == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Total degree of the highest term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| self.ctx.monomial_degree(m)).max()
    }

    /// True when all terms share one degree (vacuously true for zero).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| self.ctx.monomial_degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Insert one term, normalizing as needed. Odd squares vanish; sine
    /// powers >= 2 are reduced; coefficients merging to zero are removed.
    fn insert_term(&mut self, mono: Monomial, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        for (i, &e) in mono.iter().enumerate() {
            if e >= 2 && self.ctx.is_odd(i) {
                return; // theta^2 = 0
            }
        }
        if let Some(sin_idx) = mono
            .iter()
            .enumerate()
            .position(|(i, &e)| e >= 2 && self.ctx.cosine_partner(i).is_some())
        {
            let cos_idx = self.ctx.cosine_partner(sin_idx).unwrap();
            // m s^k = m s^{k-2} - m s^{k-2} c^2
            let mut reduced = mono.clone();
            reduced[sin_idx] -= 2;
            let mut with_cos = reduced.clone();
            with_cos[cos_idx] += 2;
            self.insert_term(reduced, coeff.clone());
            self.insert_term(with_cos, -coeff);
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Product of two monomials with the Koszul sign from sorting the odd
    /// factors of `b` past those of `a`. `None` when an odd coordinate
    /// repeats.
    fn mul_mono(ctx: &GradedContext, a: &[u32], b: &[u32]) -> Option<(Monomial, bool)> {
        let n = ctx.len();
        // suffix_odd[i] = number of odd factors of `a` strictly after i
        let mut inversions: u32 = 0;
        let mut suffix_odd: u32 = 0;
        let mut suffix = vec![0u32; n + 1];
        for i in (0..n).rev() {
            suffix[i + 1] = suffix_odd;
            if ctx.is_odd(i) {
                suffix_odd += a[i];
            }
        }
        suffix[0] = suffix_odd;
        let mut out = vec![0u32; n];
        for i in 0..n {
            if ctx.is_odd(i) {
                if a[i] + b[i] >= 2 {
                    return None;
                }
                if b[i] == 1 {
                    inversions += suffix[i + 1];
                }
            }
            out[i] = a[i] + b[i];
        }
        Some((out, inversions % 2 == 1))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GradedError> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(GradedError::ContextMismatch);
        }
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.insert_term(mono.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, GradedError> {
        self.checked_add(&other.clone().negate())
    }

    /// Graded-commutative product: `f g = (-1)^{deg f deg g} g f` for
    /// homogeneous factors.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, GradedError> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(GradedError::ContextMismatch);
        }
        let mut out = Self::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((mono, negative)) = Self::mul_mono(&self.ctx, ma, mb) {
                    let c = ca.clone() * cb.clone();
                    out.insert_term(mono, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn negate(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.clone() * k.clone();
        }
        out
    }

    /// Left partial derivative by the coordinate at `idx`.
    ///
    /// Passing the derivation through the prefix of a monomial picks up
    /// `(-1)^{deg(coord) * deg(prefix)}`; for even coordinates this is the
    /// classical derivative.
    pub fn partial(&self, idx: usize) -> Result<Self, GradedError> {
        if idx >= self.ctx.len() {
            return Err(GradedError::CoordinateOutOfRange(idx));
        }
        let coord_deg = self.ctx.degree(idx) as i64;
        let mut out = Self::zero(&self.ctx);
        for (mono, c) in &self.terms {
            if mono[idx] == 0 {
                continue;
            }
            let prefix_deg: i64 = mono[..idx]
                .iter()
                .enumerate()
                .map(|(i, &e)| e as i64 * self.ctx.degree(i) as i64)
                .sum();
            let negative = (coord_deg * prefix_deg) % 2 != 0;
            let mut coeff = c.clone() * C::from_int(mono[idx] as i64);
            if negative {
                coeff = -coeff;
            }
            let mut m = mono.clone();
            m[idx] -= 1;
            out.insert_term(m, coeff);
        }
        Ok(out)
    }

    pub fn partial_named(&self, name: &str) -> Result<Self, GradedError> {
        let idx = self
            .ctx
            .index_of(name)
            .ok_or_else(|| GradedError::UnknownCoordinate(name.to_string()))?;
        self.partial(idx)
    }

    /// Evaluate at an assignment of the degree-0 coordinates. Errors if any
    /// term involves a coordinate of nonzero degree.
    pub fn eval_base(&self, vals: &[C]) -> Result<C, GradedError> {
        if vals.len() != self.ctx.len() {
            return Err(GradedError::DimensionMismatch {
                expected: self.ctx.len(),
                got: vals.len(),
            });
        }
        let mut acc = C::zero();
        for (mono, c) in &self.terms {
            let mut prod = c.clone();
            for (i, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if self.ctx.degree(i) != 0 {
                    return Err(GradedError::NotBaseFunction {
                        coordinate: self.ctx.name(i).to_string(),
                    });
                }
                for _ in 0..e {
                    prod = prod * vals[i].clone();
                }
            }
            acc = acc + prod;
        }
        Ok(acc)
    }

    /// Transplant into another context along an index map (`map[i]` is the
    /// target index of source coordinate `i`, `None` if unavailable). Errors
    /// if an unmapped coordinate actually occurs.
    pub fn remap(
        &self,
        target: &Arc<GradedContext>,
        map: &[Option<usize>],
    ) -> Result<GradedPolynomial<C>, GradedError> {
        let mut out = GradedPolynomial::zero(target);
        for (mono, c) in &self.terms {
            let mut m = vec![0u32; target.len()];
            for (i, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map.get(i).copied().flatten() {
                    Some(j) => m[j] = e,
                    None => {
                        return Err(GradedError::UnknownCoordinate(
                            self.ctx.name(i).to_string(),
                        ))
                    }
                }
            }
            out.insert_term(m, c.clone());
        }
        Ok(out)
    }
}

impl<C: PartialEq> PartialEq for GradedPolynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.terms == other.terms
    }
}

impl<C: Coefficient> Add for &GradedPolynomial<C> {
    type Output = GradedPolynomial<C>;
    fn add(self, rhs: Self) -> Self::Output {
        self.checked_add(rhs).expect("context mismatch in +")
    }
}

impl<C: Coefficient> Sub for &GradedPolynomial<C> {
    type Output = GradedPolynomial<C>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.checked_sub(rhs).expect("context mismatch in -")
    }
}

impl<C: Coefficient> Mul for &GradedPolynomial<C> {
    type Output = GradedPolynomial<C>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.checked_mul(rhs).expect("context mismatch in *")
    }
}

impl<C: Coefficient> Neg for GradedPolynomial<C> {
    type Output = GradedPolynomial<C>;
    fn neg(self) -> Self::Output {
        self.negate()
    }
}

impl<C: Coefficient> fmt::Display for GradedPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = C::one();
        for (k, (mono, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let factors: Vec<String> = mono
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.ctx.name(i).to_string()
                    } else {
                        format!("{}^{}", self.ctx.name(i), e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == one {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}
