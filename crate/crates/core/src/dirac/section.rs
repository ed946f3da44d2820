use super::error::DiracError;
use super::form::DifferentialForm;
use super::space::FormSpace;
use crate::graded::{GradedPolynomial, GradedVectorField};
use crate::scalar::Coefficient;

/// A vector field on the base of a form space: one base-function component
/// per base coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseVectorField<C> {
    space: FormSpace,
    components: Vec<GradedPolynomial<C>>,
}

impl<C: Coefficient> BaseVectorField<C> {
    pub fn new(
        space: &FormSpace,
        components: Vec<GradedPolynomial<C>>,
    ) -> Result<Self, DiracError> {
        if components.len() != space.dim() {
            return Err(DiracError::Graded(crate::graded::GradedError::DimensionMismatch {
                expected: space.dim(),
                got: components.len(),
            }));
        }
        for c in &components {
            if !crate::graded::same_context(space.context(), c.context()) {
                return Err(DiracError::SpaceMismatch);
            }
            if !space.is_base_function(c) {
                return Err(DiracError::NotBaseCoefficient);
            }
        }
        Ok(Self { space: space.clone(), components })
    }

    pub fn zero(space: &FormSpace) -> Self {
        Self { space: space.clone(), components: vec![space.zero(); space.dim()] }
    }

    /// The coordinate field `d/d<mu>`.
    pub fn unit(space: &FormSpace, mu: usize) -> Self {
        let mut components = vec![space.zero::<C>(); space.dim()];
        components[mu] = GradedPolynomial::one(space.context());
        Self { space: space.clone(), components }
    }

    pub fn space(&self) -> &FormSpace {
        &self.space
    }

    pub fn components(&self) -> &[GradedPolynomial<C>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Directional derivative of a base function.
    pub fn apply_fn(&self, f: &GradedPolynomial<C>) -> GradedPolynomial<C> {
        let mut acc = self.space.zero();
        for (mu, comp) in self.components.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            let df = self.space.base_partial(mu, f);
            acc = acc.checked_add(&comp.checked_mul(&df).expect("same context")).expect("same context");
        }
        acc
    }

    /// Lie bracket `[v, w]^mu = v(w^mu) - w(v^mu)`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self, DiracError> {
        if self.space != other.space {
            return Err(DiracError::SpaceMismatch);
        }
        let mut components = Vec::with_capacity(self.space.dim());
        for mu in 0..self.space.dim() {
            let a = self.apply_fn(&other.components[mu]);
            let b = other.apply_fn(&self.components[mu]);
            components.push(a.checked_sub(&b)?);
        }
        Ok(Self { space: self.space.clone(), components })
    }

    /// The contraction operator `i_v` as a degree(-1) graded field: it sends
    /// each differential to the matching component and kills the base.
    pub fn contraction_field(&self) -> GradedVectorField<C> {
        let ctx = self.space.context();
        let mut components = vec![GradedPolynomial::zero(ctx); ctx.len()];
        for (mu, coord) in self.space.base_coords().iter().enumerate() {
            components[coord.diff()] = self.components[mu].clone();
        }
        GradedVectorField::new(ctx, -1, components).expect("components are base functions")
    }
}

/// Interior product `i_v alpha`; lowers the form degree by one. On a 0-form
/// it returns the zero form (there is nothing to contract).
pub fn interior_product<C: Coefficient>(
    v: &BaseVectorField<C>,
    alpha: &DifferentialForm<C>,
) -> Result<DifferentialForm<C>, DiracError> {
    if v.space() != alpha.space() {
        return Err(DiracError::SpaceMismatch);
    }
    let poly = v.contraction_field().apply(alpha.poly())?;
    DifferentialForm::from_poly(alpha.space(), poly)
}

/// Lie derivative by the Cartan formula `L_v = i_v d + d i_v`; preserves the
/// form degree and commutes with `d`.
pub fn lie_derivative<C: Coefficient>(
    v: &BaseVectorField<C>,
    alpha: &DifferentialForm<C>,
) -> Result<DifferentialForm<C>, DiracError> {
    let a = interior_product(v, &alpha.d())?;
    let b = interior_product(v, alpha)?.d();
    a.add(&b)
}

/// A section `v ⊕ eta` of the Pontryagin bundle: a vector field paired with
/// a 1-form over the same base.
#[derive(Debug, Clone, PartialEq)]
pub struct PontryaginSection<C> {
    pub vector: BaseVectorField<C>,
    pub form: DifferentialForm<C>,
}

impl<C: Coefficient> PontryaginSection<C> {
    pub fn new(
        vector: BaseVectorField<C>,
        form: DifferentialForm<C>,
    ) -> Result<Self, DiracError> {
        if vector.space() != form.space() {
            return Err(DiracError::SpaceMismatch);
        }
        if !form.is_zero() && form.degree() != Some(1) {
            return Err(DiracError::WrongFormDegree { expected: 1, got: form.degree() });
        }
        Ok(Self { vector, form })
    }

    pub fn space(&self) -> &FormSpace {
        self.vector.space()
    }
}

/// The symmetric pairing `<v ⊕ eta, v' ⊕ eta'> = i_{v'} eta + i_v eta'`,
/// a function on the base.
pub fn pairing<C: Coefficient>(
    a: &PontryaginSection<C>,
    b: &PontryaginSection<C>,
) -> Result<GradedPolynomial<C>, DiracError> {
    let left = interior_product(&b.vector, &a.form)?;
    let right = interior_product(&a.vector, &b.form)?;
    Ok(left.add(&right)?.poly().clone())
}

/// The Courant–Dorfman bracket
/// `[v ⊕ eta, v' ⊕ eta'] = [v, v']_Lie ⊕ (L_v eta' - i_{v'} d eta)`.
pub fn courant_bracket<C: Coefficient>(
    a: &PontryaginSection<C>,
    b: &PontryaginSection<C>,
) -> Result<PontryaginSection<C>, DiracError> {
    let vector = a.vector.lie_bracket(&b.vector)?;
    let lie = lie_derivative(&a.vector, &b.form)?;
    let contracted = interior_product(&b.vector, &a.form.d())?;
    let form = lie.add(&contracted.negate())?;
    PontryaginSection::new(vector, form)
}
