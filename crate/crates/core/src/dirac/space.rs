use std::sync::Arc;

use super::error::DiracError;
use crate::graded::{GradedContext, GradedPolynomial, GradedVectorField};
use crate::sample::SplitMix64;
use crate::scalar::Coefficient;

/// One base coordinate of a form space, with the context indices of its
/// realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseCoord {
    /// An ordinary coordinate `x` with differential `dx`.
    Plain { name: String, var: usize, diff: usize },
    /// An angle: functions of it enter through the cosine/sine pair, its
    /// differential is `d<name>`, and the partial derivative along it is
    /// `cos d/dsin - sin d/dcos`.
    Angle { name: String, cos: usize, sin: usize, diff: usize },
}

impl BaseCoord {
    pub fn name(&self) -> &str {
        match self {
            BaseCoord::Plain { name, .. } | BaseCoord::Angle { name, .. } => name,
        }
    }

    pub fn diff(&self) -> usize {
        match self {
            BaseCoord::Plain { diff, .. } | BaseCoord::Angle { diff, .. } => *diff,
        }
    }
}

/// Declarative description of a base coordinate, used to build a space.
#[derive(Debug, Clone)]
pub enum CoordSpec {
    Plain(String),
    Angle { name: String, cos: String, sin: String },
}

/// The shifted tangent space of a base manifold chart: degree-0 coordinates
/// (plain variables and rationalized cosine/sine pairs) together with one
/// degree-1 differential per base coordinate. Forms, vector fields, and
/// Pontryagin sections all live over one of these.
#[derive(Debug, Clone, PartialEq)]
pub struct FormSpace {
    ctx: Arc<GradedContext>,
    base: Vec<BaseCoord>,
}

impl FormSpace {
    /// A purely Cartesian base: coordinates as named, differentials named
    /// `d<name>`.
    pub fn euclidean(names: &[&str]) -> Result<Self, DiracError> {
        let specs: Vec<CoordSpec> = names.iter().map(|n| CoordSpec::Plain(n.to_string())).collect();
        Self::build(&specs)
    }

    pub fn build(specs: &[CoordSpec]) -> Result<Self, DiracError> {
        let mut coords: Vec<(String, u32)> = Vec::new();
        let mut pairs: Vec<(String, String)> = Vec::new();
        // degree-0 block first, then the differentials in base order
        for spec in specs {
            match spec {
                CoordSpec::Plain(name) => coords.push((name.clone(), 0)),
                CoordSpec::Angle { cos, sin, .. } => {
                    coords.push((cos.clone(), 0));
                    coords.push((sin.clone(), 0));
                    pairs.push((cos.clone(), sin.clone()));
                }
            }
        }
        for spec in specs {
            let name = match spec {
                CoordSpec::Plain(name) => name,
                CoordSpec::Angle { name, .. } => name,
            };
            coords.push((format!("d{name}"), 1));
        }
        let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(c, s)| (c.as_str(), s.as_str())).collect();
        let ctx = GradedContext::with_trig_pairs(coords, &pair_refs)?;
        let mut base = Vec::new();
        for spec in specs {
            match spec {
                CoordSpec::Plain(name) => base.push(BaseCoord::Plain {
                    name: name.clone(),
                    var: ctx.index_of(name).unwrap(),
                    diff: ctx.index_of(&format!("d{name}")).unwrap(),
                }),
                CoordSpec::Angle { name, cos, sin } => base.push(BaseCoord::Angle {
                    name: name.clone(),
                    cos: ctx.index_of(cos).unwrap(),
                    sin: ctx.index_of(sin).unwrap(),
                    diff: ctx.index_of(&format!("d{name}")).unwrap(),
                }),
            }
        }
        Ok(Self { ctx, base })
    }

    pub fn context(&self) -> &Arc<GradedContext> {
        &self.ctx
    }

    /// Base dimension (number of base coordinates, angles counted once).
    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base_coords(&self) -> &[BaseCoord] {
        &self.base
    }

    pub fn zero<C: Coefficient>(&self) -> GradedPolynomial<C> {
        GradedPolynomial::zero(&self.ctx)
    }

    /// The differential of base coordinate `mu` as a polynomial.
    pub fn differential<C: Coefficient>(&self, mu: usize) -> GradedPolynomial<C> {
        GradedPolynomial::coordinate(&self.ctx, self.base[mu].diff()).expect("index valid")
    }

    /// Left partial derivative along base coordinate `mu`; for an angle this
    /// is `cos d/dsin - sin d/dcos`, which respects the circle relation.
    pub fn base_partial<C: Coefficient>(
        &self,
        mu: usize,
        f: &GradedPolynomial<C>,
    ) -> GradedPolynomial<C> {
        match &self.base[mu] {
            BaseCoord::Plain { var, .. } => f.partial(*var).expect("index valid"),
            BaseCoord::Angle { cos, sin, .. } => {
                let c = GradedPolynomial::<C>::coordinate(&self.ctx, *cos).expect("index valid");
                let s = GradedPolynomial::<C>::coordinate(&self.ctx, *sin).expect("index valid");
                let df_ds = f.partial(*sin).expect("index valid");
                let df_dc = f.partial(*cos).expect("index valid");
                &c.checked_mul(&df_ds).expect("same context")
                    - &s.checked_mul(&df_dc).expect("same context")
            }
        }
    }

    /// The de Rham field `sum_mu d<mu> * d/d<mu>` on this space.
    pub fn de_rham<C: Coefficient>(&self) -> GradedVectorField<C> {
        let mut components = vec![GradedPolynomial::zero(&self.ctx); self.ctx.len()];
        for coord in &self.base {
            match coord {
                BaseCoord::Plain { var, diff, .. } => {
                    components[*var] =
                        GradedPolynomial::coordinate(&self.ctx, *diff).expect("index valid");
                }
                BaseCoord::Angle { cos, sin, diff, .. } => {
                    let dtheta =
                        GradedPolynomial::<C>::coordinate(&self.ctx, *diff).expect("index valid");
                    let c = GradedPolynomial::<C>::coordinate(&self.ctx, *cos).expect("index valid");
                    let s = GradedPolynomial::<C>::coordinate(&self.ctx, *sin).expect("index valid");
                    components[*cos] = s.checked_mul(&dtheta).expect("same context").negate();
                    components[*sin] = c.checked_mul(&dtheta).expect("same context");
                }
            }
        }
        GradedVectorField::new(&self.ctx, 1, components).expect("de Rham field is homogeneous")
    }

    /// Whether `f` is a function on the base (no differentials).
    pub fn is_base_function<C: Coefficient>(&self, f: &GradedPolynomial<C>) -> bool {
        f.degree().unwrap_or(0) == 0
    }

    /// A random rational point of the base, as a full context assignment
    /// (differential slots are zero-filled and must not be read). Angle
    /// pairs are sampled exactly on the unit circle.
    pub fn sample_point<C: Coefficient>(&self, rng: &mut SplitMix64) -> Vec<C> {
        let mut vals = vec![C::zero(); self.ctx.len()];
        for coord in &self.base {
            match coord {
                BaseCoord::Plain { var, .. } => {
                    vals[*var] = rng.rational(4, 3);
                }
                BaseCoord::Angle { cos, sin, .. } => {
                    let (c, s) = rng.unit_circle();
                    vals[*cos] = c;
                    vals[*sin] = s;
                }
            }
        }
        vals
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::parse_polynomial;
    use crate::Rat;

    pub(crate) fn sleigh_space() -> FormSpace {
        FormSpace::build(&[
            CoordSpec::Plain("x".into()),
            CoordSpec::Plain("y".into()),
            CoordSpec::Angle { name: "th".into(), cos: "c".into(), sin: "s".into() },
        ])
        .unwrap()
    }

    #[test]
    fn de_rham_squares_to_zero_with_angles() {
        let space = sleigh_space();
        let q = space.de_rham::<Rat>();
        assert!(q.check_q_structure().unwrap().is_yes());
    }

    #[test]
    fn angle_partial_respects_relation() {
        let space = sleigh_space();
        let ctx = space.context();
        // d/dth (c^2 + s^2) = 0, d/dth(s) = c
        let unit = parse_polynomial::<Rat>(ctx, "c^2 + s^2").unwrap();
        assert!(space.base_partial(2, &unit).is_zero());
        let s = parse_polynomial::<Rat>(ctx, "s").unwrap();
        let c = parse_polynomial::<Rat>(ctx, "c").unwrap();
        assert_eq!(space.base_partial(2, &s), c);
    }

    #[test]
    fn euclidean_layout() {
        let space = FormSpace::euclidean(&["x", "y"]).unwrap();
        assert_eq!(space.dim(), 2);
        let ctx = space.context();
        assert_eq!(ctx.index_of("dx"), Some(2));
        assert_eq!(ctx.degree(2), 1);
    }
}
