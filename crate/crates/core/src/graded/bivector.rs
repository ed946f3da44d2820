use std::collections::BTreeMap;
use std::sync::Arc;

use super::context::GradedContext;
use super::error::GradedError;
use super::field::GradedVectorField;
use super::poly::GradedPolynomial;
use crate::scalar::Coefficient;

/// The shifted cotangent bundle of an n-dimensional base: coordinates
/// `x1..xn` of degree 0 and `p1..pn` of degree 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpace {
    ctx: Arc<GradedContext>,
    dim: usize,
}

impl PhaseSpace {
    pub fn new(dim: usize) -> Self {
        let mut coords: Vec<(String, u32)> = (1..=dim).map(|i| (format!("x{i}"), 0)).collect();
        coords.extend((1..=dim).map(|i| (format!("p{i}"), 1)));
        let ctx = GradedContext::new(coords).expect("canonical names are valid");
        Self { ctx, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn context(&self) -> &Arc<GradedContext> {
        &self.ctx
    }

    /// Context index of `x^{i+1}`.
    pub fn position(&self, i: usize) -> usize {
        i
    }

    /// Context index of `p_{i+1}`.
    pub fn momentum(&self, i: usize) -> usize {
        self.dim + i
    }

    /// Cotangent lift of a base vector field `X = X^i d/dx^i`:
    /// `lift(X) = X^i d/dx^i - (dX^j/dx^i) p_j d/dp_i`, a degree-0 field
    /// whose base components reproduce `X`.
    pub fn lift<C: Coefficient>(
        &self,
        base_components: &[GradedPolynomial<C>],
    ) -> Result<GradedVectorField<C>, GradedError> {
        if base_components.len() != self.dim {
            return Err(GradedError::DimensionMismatch {
                expected: self.dim,
                got: base_components.len(),
            });
        }
        for comp in base_components {
            check_base_only(self, comp)?;
        }
        let mut components = vec![GradedPolynomial::zero(&self.ctx); 2 * self.dim];
        for (i, comp) in base_components.iter().enumerate() {
            components[self.position(i)] = comp.clone();
        }
        for i in 0..self.dim {
            let mut acc = GradedPolynomial::zero(&self.ctx);
            for j in 0..self.dim {
                let dxj = base_components[j].partial(self.position(i))?;
                if dxj.is_zero() {
                    continue;
                }
                let pj = GradedPolynomial::coordinate(&self.ctx, self.momentum(j))?;
                acc = acc.checked_add(&dxj.checked_mul(&pj)?)?;
            }
            components[self.momentum(i)] = acc.negate();
        }
        GradedVectorField::new(&self.ctx, 0, components)
    }
}

fn check_base_only<C: Coefficient>(
    space: &PhaseSpace,
    poly: &GradedPolynomial<C>,
) -> Result<(), GradedError> {
    for (mono, _) in poly.terms() {
        for (idx, &e) in mono.iter().enumerate() {
            if e > 0 && idx >= space.dim {
                return Err(GradedError::NotBaseFunction {
                    coordinate: space.ctx.name(idx).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Jacobiator entries keyed by their (0-based) index triple `i < j < k`.
pub type JacobiResiduals<C> = Vec<((usize, usize, usize), GradedPolynomial<C>)>;

/// An antisymmetric bivector on an n-dimensional base, stored as its strict
/// upper triangle `pi^{ij}`, `i < j`, with components depending on the base
/// coordinates only. The full matrix is recovered by antisymmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct BivectorSpec<C> {
    space: PhaseSpace,
    upper: BTreeMap<(usize, usize), GradedPolynomial<C>>,
}

impl<C: Coefficient> BivectorSpec<C> {
    /// Build from strict-upper-triangle entries (0-based indices `i < j`).
    pub fn new(
        dim: usize,
        entries: impl IntoIterator<Item = ((usize, usize), GradedPolynomial<C>)>,
    ) -> Result<Self, GradedError> {
        let space = PhaseSpace::new(dim);
        let mut upper = BTreeMap::new();
        for ((i, j), poly) in entries {
            if i >= j || j >= dim {
                return Err(GradedError::CoordinateOutOfRange(j.max(i)));
            }
            if !crate::graded::context::same_context(space.context(), poly.context()) {
                return Err(GradedError::ContextMismatch);
            }
            check_base_only(&space, &poly)?;
            if !poly.is_zero() {
                upper.insert((i, j), poly);
            }
        }
        Ok(Self { space, upper })
    }

    /// Parse entries given as expression strings over `x1..xn`.
    pub fn parse(
        dim: usize,
        entries: &[((usize, usize), &str)],
    ) -> Result<Self, GradedError> {
        let space = PhaseSpace::new(dim);
        let mut parsed = Vec::new();
        for &((i, j), text) in entries {
            let poly = super::parse::parse_polynomial(space.context(), text)?;
            parsed.push(((i, j), poly));
        }
        Self::new(dim, parsed)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    /// Component `pi^{ij}` for any index pair, via antisymmetry.
    pub fn component(&self, i: usize, j: usize) -> GradedPolynomial<C> {
        let ctx = self.space.context();
        if i == j {
            return GradedPolynomial::zero(ctx);
        }
        if i < j {
            self.upper
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| GradedPolynomial::zero(ctx))
        } else {
            self.upper
                .get(&(j, i))
                .map(|p| p.clone().negate())
                .unwrap_or_else(|| GradedPolynomial::zero(ctx))
        }
    }

    pub fn upper_entries(&self) -> impl Iterator<Item = (&(usize, usize), &GradedPolynomial<C>)> {
        self.upper.iter()
    }

    /// Jacobiator components, one per triple `i < j < k`:
    /// `sum_l (dpi^{ij}/dx^l pi^{lk} + dpi^{ki}/dx^l pi^{lj} + dpi^{jk}/dx^l pi^{li})`.
    /// All zero exactly when the bivector is Poisson.
    pub fn jacobi_residuals(&self) -> Result<JacobiResiduals<C>, GradedError> {
        let n = self.dim();
        let ctx = self.space.context();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut acc = GradedPolynomial::zero(ctx);
                    for l in 0..n {
                        for &(a, b, c) in &[(i, j, k), (k, i, j), (j, k, i)] {
                            let d = self.component(a, b).partial(self.space.position(l))?;
                            if d.is_zero() {
                                continue;
                            }
                            let pi_lc = self.component(l, c);
                            if pi_lc.is_zero() {
                                continue;
                            }
                            acc = acc.checked_add(&d.checked_mul(&pi_lc)?)?;
                        }
                    }
                    out.push(((i, j, k), acc));
                }
            }
        }
        Ok(out)
    }

    /// The degree-1 Hamiltonian field of `H = pi^{ij} p_i p_j / 2` on the
    /// shifted cotangent bundle:
    /// `Q = pi^{ij} p_j d/dx^i - (dpi^{jk}/dx^i) p_k p_j / 2 d/dp_i`.
    /// It squares to zero exactly when the Jacobi residuals vanish (a
    /// property the tests check against the residual oracle).
    ///
    /// The quadratic momentum factor is contracted in the order compatible
    /// with this crate's left-derivative convention; with anticommuting
    /// momenta that order carries the sign of the usual display of the
    /// formula.
    pub fn to_q(&self) -> Result<GradedVectorField<C>, GradedError> {
        let n = self.dim();
        let ctx = self.space.context();
        let half = C::ratio(1, 2);
        let mut components = vec![GradedPolynomial::zero(ctx); 2 * n];
        for i in 0..n {
            let mut acc = GradedPolynomial::zero(ctx);
            for j in 0..n {
                let pi_ij = self.component(i, j);
                if pi_ij.is_zero() {
                    continue;
                }
                let pj = GradedPolynomial::coordinate(ctx, self.space.momentum(j))?;
                acc = acc.checked_add(&pi_ij.checked_mul(&pj)?)?;
            }
            components[self.space.position(i)] = acc;
        }
        for i in 0..n {
            let mut acc = GradedPolynomial::zero(ctx);
            for j in 0..n {
                for k in 0..n {
                    let d = self.component(j, k).partial(self.space.position(i))?;
                    if d.is_zero() {
                        continue;
                    }
                    let pj = GradedPolynomial::coordinate(ctx, self.space.momentum(j))?;
                    let pk = GradedPolynomial::coordinate(ctx, self.space.momentum(k))?;
                    let term = d.checked_mul(&pk)?.checked_mul(&pj)?;
                    acc = acc.checked_add(&term)?;
                }
            }
            components[self.space.momentum(i)] = acc.scale(&half).negate();
        }
        GradedVectorField::new(ctx, 1, components)
    }
}

/// Outcome of the bivector-preservation diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub enum PreservationVerdict<C> {
    Preserved,
    Broken { witnesses: Vec<(String, GradedPolynomial<C>)> },
}

impl<C> PreservationVerdict<C> {
    pub fn is_preserved(&self) -> bool {
        matches!(self, PreservationVerdict::Preserved)
    }
}

/// Cotangent lift of base components on the phase space of `pi`.
pub fn cotangent_lift<C: Coefficient>(
    space: &PhaseSpace,
    base_components: &[GradedPolynomial<C>],
) -> Result<GradedVectorField<C>, GradedError> {
    space.lift(base_components)
}

/// Does the flow of `X` preserve the bivector? Checks whether the cotangent
/// lift of `X` commutes with the bivector's degree-1 field; nonzero
/// commutator components are returned as witnesses.
pub fn poisson_preservation<C: Coefficient>(
    pi: &BivectorSpec<C>,
    base_components: &[GradedPolynomial<C>],
) -> Result<PreservationVerdict<C>, GradedError> {
    let lift = pi.space().lift(base_components)?;
    let q = pi.to_q()?;
    let bracket = lift.commutator(&q)?;
    let mut witnesses = Vec::new();
    for (i, comp) in bracket.components().iter().enumerate() {
        if !comp.is_zero() {
            witnesses.push((pi.space().context().name(i).to_string(), comp.clone()));
        }
    }
    if witnesses.is_empty() {
        Ok(PreservationVerdict::Preserved)
    } else {
        Ok(PreservationVerdict::Broken { witnesses })
    }
}
