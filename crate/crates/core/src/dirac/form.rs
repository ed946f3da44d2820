use std::fmt;

use super::error::DiracError;
use super::space::FormSpace;
use crate::graded::GradedPolynomial;
use crate::scalar::Coefficient;

/// A differential form realized as a graded polynomial on a [`FormSpace`],
/// homogeneous in the differentials. A p-form corresponds to a polynomial
/// of degree p; functions on the base are 0-forms.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialForm<C> {
    space: FormSpace,
    poly: GradedPolynomial<C>,
}

impl<C: Coefficient> DifferentialForm<C> {
    pub fn from_poly(space: &FormSpace, poly: GradedPolynomial<C>) -> Result<Self, DiracError> {
        if !crate::graded::same_context(space.context(), poly.context()) {
            return Err(DiracError::SpaceMismatch);
        }
        if !poly.is_homogeneous() {
            return Err(DiracError::NotAForm);
        }
        Ok(Self { space: space.clone(), poly })
    }

    /// Like [`from_poly`](Self::from_poly) but also checks the degree.
    pub fn with_degree(
        space: &FormSpace,
        poly: GradedPolynomial<C>,
        degree: usize,
    ) -> Result<Self, DiracError> {
        let form = Self::from_poly(space, poly)?;
        match form.degree() {
            None => Ok(form), // zero is a form of every degree
            Some(d) if d == degree => Ok(form),
            got => Err(DiracError::WrongFormDegree { expected: degree, got }),
        }
    }

    pub fn zero(space: &FormSpace) -> Self {
        Self { space: space.clone(), poly: space.zero() }
    }

    /// The differential `d<mu>` of base coordinate `mu` as a 1-form.
    pub fn coordinate_differential(space: &FormSpace, mu: usize) -> Self {
        Self { space: space.clone(), poly: space.differential(mu) }
    }

    pub fn space(&self) -> &FormSpace {
        &self.space
    }

    pub fn poly(&self) -> &GradedPolynomial<C> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Form degree; `None` for the zero form.
    pub fn degree(&self) -> Option<usize> {
        self.poly.degree().map(|d| d as usize)
    }

    /// Exterior derivative, i.e. the action of the de Rham field. Raises the
    /// degree by one and squares to zero.
    pub fn d(&self) -> Self {
        let q = self.space.de_rham::<C>();
        let poly = q.apply(&self.poly).expect("same context");
        Self { space: self.space.clone(), poly }
    }

    /// Wedge product (graded multiplication).
    pub fn wedge(&self, other: &Self) -> Result<Self, DiracError> {
        if self.space != other.space {
            return Err(DiracError::SpaceMismatch);
        }
        let poly = self.poly.checked_mul(&other.poly)?;
        Ok(Self { space: self.space.clone(), poly })
    }

    pub fn add(&self, other: &Self) -> Result<Self, DiracError> {
        if self.space != other.space {
            return Err(DiracError::SpaceMismatch);
        }
        let poly = self.poly.checked_add(&other.poly)?;
        Ok(Self { space: self.space.clone(), poly })
    }

    pub fn scale_fn(&self, f: &GradedPolynomial<C>) -> Result<Self, DiracError> {
        if !self.space.is_base_function(f) {
            return Err(DiracError::NotBaseCoefficient);
        }
        let poly = f.checked_mul(&self.poly)?;
        Ok(Self { space: self.space.clone(), poly })
    }

    pub fn negate(&self) -> Self {
        Self { space: self.space.clone(), poly: self.poly.clone().negate() }
    }

    /// Coefficient functions of a 1-form in the coordinate-differential
    /// basis: `eta = sum_mu eta_mu d<mu>`.
    pub fn one_form_coefficients(&self) -> Result<Vec<GradedPolynomial<C>>, DiracError> {
        if !self.is_zero() && self.degree() != Some(1) {
            return Err(DiracError::WrongFormDegree { expected: 1, got: self.degree() });
        }
        let mut out = Vec::with_capacity(self.space.dim());
        for coord in self.space.base_coords() {
            out.push(self.poly.partial(coord.diff())?);
        }
        Ok(out)
    }
}

impl<C: Coefficient> fmt::Display for DifferentialForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::space::CoordSpec;
    use crate::graded::parse_polynomial;
    use crate::Rat;

    fn r3() -> FormSpace {
        FormSpace::euclidean(&["x", "y", "z"]).unwrap()
    }

    fn form(space: &FormSpace, text: &str) -> DifferentialForm<Rat> {
        DifferentialForm::from_poly(space, parse_polynomial(space.context(), text).unwrap())
            .unwrap()
    }

    #[test]
    fn exterior_derivative_examples() {
        let space = r3();
        // d(x) = dx
        assert_eq!(form(&space, "x").d(), form(&space, "dx"));
        // d(x dy) = dx dy
        assert_eq!(form(&space, "x*dy").d(), form(&space, "dx*dy"));
        // constant-coefficient 2-form is closed
        assert!(form(&space, "dx*dy").d().is_zero());
        // d(x dy dz) = dx dy dz
        assert_eq!(form(&space, "x*dy*dz").d(), form(&space, "dx*dy*dz"));
    }

    #[test]
    fn d_squared_is_zero() {
        let space = r3();
        for text in ["x^2*y", "x*dy + y*dz", "x*y*z*dx*dy", "x^3*dz"] {
            assert!(form(&space, text).d().d().is_zero(), "d^2 != 0 on {text}");
        }
    }

    #[test]
    fn inhomogeneous_rejected() {
        let space = r3();
        let p = parse_polynomial::<Rat>(space.context(), "x + dx").unwrap();
        assert!(matches!(
            DifferentialForm::from_poly(&space, p),
            Err(DiracError::NotAForm)
        ));
    }

    #[test]
    fn one_form_coefficients_with_angle() {
        let space = FormSpace::build(&[
            CoordSpec::Plain("x".into()),
            CoordSpec::Angle { name: "th".into(), cos: "c".into(), sin: "s".into() },
        ])
        .unwrap();
        let eta = form(&space, "s*dx - c*dth");
        let coeffs = eta.one_form_coefficients().unwrap();
        assert_eq!(coeffs[0], parse_polynomial::<Rat>(space.context(), "s").unwrap());
        assert_eq!(coeffs[1], parse_polynomial::<Rat>(space.context(), "-c").unwrap());
    }
}
