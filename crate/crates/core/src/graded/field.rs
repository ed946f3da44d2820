use std::fmt;
use std::sync::Arc;

use super::context::{same_context, GradedContext};
use super::error::GradedError;
use super::poly::GradedPolynomial;
use crate::scalar::Coefficient;

/// A homogeneous graded vector field, i.e. a derivation with one component
/// polynomial per coordinate and a declared degree.
///
/// Homogeneity is enforced at construction: a nonzero component on `x^i`
/// must be homogeneous of degree `deg(x^i) + deg(v)`. The derivation acts by
/// `v(f) = sum_i v^i * (left) df/dx^i` and satisfies the graded Leibniz rule
/// `v(f g) = v(f) g + (-1)^{deg(v) deg(f)} f v(g)`.
#[derive(Debug, Clone)]
pub struct GradedVectorField<C> {
    ctx: Arc<GradedContext>,
    degree: i64,
    components: Vec<GradedPolynomial<C>>,
}

impl<C: Coefficient> GradedVectorField<C> {
    pub fn new(
        ctx: &Arc<GradedContext>,
        degree: i64,
        components: Vec<GradedPolynomial<C>>,
    ) -> Result<Self, GradedError> {
        if components.len() != ctx.len() {
            return Err(GradedError::DimensionMismatch {
                expected: ctx.len(),
                got: components.len(),
            });
        }
        for (i, comp) in components.iter().enumerate() {
            if !same_context(ctx, comp.context()) {
                return Err(GradedError::ContextMismatch);
            }
            if comp.is_zero() {
                continue;
            }
            let want = ctx.degree(i) as i64 + degree;
            if !comp.is_homogeneous() || comp.degree() != Some(want) {
                return Err(GradedError::NotHomogeneous { coordinate: ctx.name(i).to_string() });
            }
        }
        Ok(Self { ctx: ctx.clone(), degree, components })
    }

    /// Build from `(coordinate name, component)` pairs; missing components
    /// are zero.
    pub fn from_named(
        ctx: &Arc<GradedContext>,
        degree: i64,
        parts: impl IntoIterator<Item = (String, GradedPolynomial<C>)>,
    ) -> Result<Self, GradedError> {
        let mut components = vec![GradedPolynomial::zero(ctx); ctx.len()];
        for (name, poly) in parts {
            let idx = ctx
                .index_of(&name)
                .ok_or_else(|| GradedError::UnknownCoordinate(name.clone()))?;
            components[idx] = poly;
        }
        Self::new(ctx, degree, components)
    }

    pub fn zero(ctx: &Arc<GradedContext>, degree: i64) -> Self {
        Self {
            ctx: ctx.clone(),
            degree,
            components: vec![GradedPolynomial::zero(ctx); ctx.len()],
        }
    }

    pub fn context(&self) -> &Arc<GradedContext> {
        &self.ctx
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn component(&self, idx: usize) -> &GradedPolynomial<C> {
        &self.components[idx]
    }

    pub fn components(&self) -> &[GradedPolynomial<C>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Derivation action `v(f)`.
    pub fn apply(&self, f: &GradedPolynomial<C>) -> Result<GradedPolynomial<C>, GradedError> {
        if !same_context(&self.ctx, f.context()) {
            return Err(GradedError::ContextMismatch);
        }
        let mut acc = GradedPolynomial::zero(&self.ctx);
        for (i, comp) in self.components.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            let df = f.partial(i)?;
            if df.is_zero() {
                continue;
            }
            acc = acc.checked_add(&comp.checked_mul(&df)?)?;
        }
        Ok(acc)
    }

    /// Graded commutator `[v, w]^i = v(w^i) - (-1)^{deg v deg w} w(v^i)`.
    pub fn commutator(&self, other: &Self) -> Result<Self, GradedError> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(GradedError::ContextMismatch);
        }
        let sign_negative = (self.degree * other.degree) % 2 != 0;
        let mut components = Vec::with_capacity(self.ctx.len());
        for i in 0..self.ctx.len() {
            let a = self.apply(other.component(i))?;
            let b = other.apply(self.component(i))?;
            let b = if sign_negative { b } else { b.negate() };
            components.push(a.checked_add(&b)?);
        }
        Self::new(&self.ctx, self.degree + other.degree, components)
    }

    /// Q-structure verdict: degree 1 and `[v, v] = 0`.
    ///
    /// On failure the witness is the first nonzero component of `[v,v]/2`
    /// in context order.
    pub fn check_q_structure(&self) -> Result<QVerdict<C>, GradedError> {
        if self.degree != 1 {
            return Ok(QVerdict::WrongDegree { degree: self.degree });
        }
        let half = C::ratio(1, 2);
        let square = self.commutator(self)?;
        for (i, comp) in square.components().iter().enumerate() {
            if !comp.is_zero() {
                return Ok(QVerdict::NotNilpotent {
                    coordinate: self.ctx.name(i).to_string(),
                    witness: comp.scale(&half),
                });
            }
        }
        Ok(QVerdict::Yes)
    }
}

impl<C: PartialEq> PartialEq for GradedVectorField<C> {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx
            && self.degree == other.degree
            && self.components == other.components
    }
}

/// Outcome of the Q-structure check.
#[derive(Debug, Clone, PartialEq)]
pub enum QVerdict<C> {
    Yes,
    WrongDegree { degree: i64 },
    NotNilpotent { coordinate: String, witness: GradedPolynomial<C> },
}

impl<C> QVerdict<C> {
    pub fn is_yes(&self) -> bool {
        matches!(self, QVerdict::Yes)
    }
}

impl<C: Coefficient> fmt::Display for QVerdict<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QVerdict::Yes => write!(f, "yes"),
            QVerdict::WrongDegree { degree } => write!(f, "no (degree {degree}, expected 1)"),
            QVerdict::NotNilpotent { coordinate, witness } => {
                write!(f, "no ([Q,Q]/2 has component `{witness}` on {coordinate})")
            }
        }
    }
}

/// The de Rham differential as a degree-1 field on the shifted tangent
/// bundle: coordinates `s1..sd` of degree 0 and `th1..thd` of degree 1,
/// with components `s_mu -> th_mu`, `th_mu -> 0`.
pub fn de_rham_q<C: Coefficient>(
    dim: usize,
) -> (Arc<GradedContext>, GradedVectorField<C>) {
    let mut coords: Vec<(String, u32)> = (1..=dim).map(|i| (format!("s{i}"), 0)).collect();
    coords.extend((1..=dim).map(|i| (format!("th{i}"), 1)));
    let ctx = GradedContext::new(coords).expect("canonical names are valid");
    let mut components = vec![GradedPolynomial::zero(&ctx); 2 * dim];
    for i in 0..dim {
        components[i] = GradedPolynomial::coordinate(&ctx, dim + i).unwrap();
    }
    let field = GradedVectorField::new(&ctx, 1, components).expect("de Rham field is homogeneous");
    (ctx, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::parse_polynomial;
    use crate::{Poly, Rat, VectorField};

    fn classical_ctx() -> Arc<GradedContext> {
        GradedContext::new([("x", 0)]).unwrap()
    }

    #[test]
    fn derivation_action_examples() {
        let ctx = classical_ctx();
        let x = Poly::coordinate(&ctx, 0).unwrap();
        // (x d/dx)(x^2) = 2 x^2
        let v = VectorField::new(&ctx, 0, vec![x.clone()]).unwrap();
        let f = parse_polynomial::<Rat>(&ctx, "x^2").unwrap();
        assert_eq!(v.apply(&f).unwrap(), parse_polynomial::<Rat>(&ctx, "2*x^2").unwrap());
    }

    #[test]
    fn classical_commutator() {
        // [d/dx, x d/dx] = d/dx
        let ctx = classical_ctx();
        let one = Poly::one(&ctx);
        let x = Poly::coordinate(&ctx, 0).unwrap();
        let ddx = VectorField::new(&ctx, 0, vec![one.clone()]).unwrap();
        let xddx = VectorField::new(&ctx, 0, vec![x]).unwrap();
        assert_eq!(ddx.commutator(&xddx).unwrap(), ddx);
    }

    #[test]
    fn odd_field_squares_to_zero() {
        // v = th d/dx with deg(x)=0, deg(th)=1: [v,v] = 0
        let ctx = GradedContext::new([("x", 0), ("th", 1)]).unwrap();
        let th = Poly::coordinate(&ctx, 1).unwrap();
        let v = VectorField::new(&ctx, 1, vec![th, Poly::zero(&ctx)]).unwrap();
        assert!(v.commutator(&v).unwrap().is_zero());
        assert!(v.check_q_structure().unwrap().is_yes());
    }

    #[test]
    fn de_rham_is_q_structure() {
        for dim in 1..=5 {
            let (_, q) = de_rham_q::<Rat>(dim);
            assert_eq!(q.degree(), 1);
            assert!(q.check_q_structure().unwrap().is_yes(), "dim {dim}");
        }
    }

    #[test]
    fn de_rham_leibniz_example() {
        // Q(s1 s2) = th1 s2 + s1 th2 on dim 2
        let (ctx, q) = de_rham_q::<Rat>(2);
        let f = parse_polynomial::<Rat>(&ctx, "s1*s2").unwrap();
        let expect = parse_polynomial::<Rat>(&ctx, "s2*th1 + s1*th2").unwrap();
        assert_eq!(q.apply(&f).unwrap(), expect);
    }

    #[test]
    fn wrong_degree_is_rejected() {
        // x d/dth has degree -1
        let ctx = GradedContext::new([("x", 0), ("th", 1)]).unwrap();
        let x = Poly::coordinate(&ctx, 0).unwrap();
        let v = VectorField::new(&ctx, -1, vec![Poly::zero(&ctx), x]).unwrap();
        assert_eq!(
            v.check_q_structure().unwrap(),
            QVerdict::WrongDegree { degree: -1 }
        );
    }

    #[test]
    fn homogeneity_enforced() {
        let ctx = GradedContext::new([("x", 0), ("th", 1)]).unwrap();
        let bad = parse_polynomial::<Rat>(&ctx, "x + th").unwrap();
        assert!(matches!(
            VectorField::new(&ctx, 0, vec![bad, Poly::zero(&ctx)]),
            Err(GradedError::NotHomogeneous { .. })
        ));
    }
}
