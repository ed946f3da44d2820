use super::error::DiracError;
use super::form::DifferentialForm;
use super::kernel::{kernel_basis, rank_at_point};
use super::section::{interior_product, pairing, BaseVectorField, PontryaginSection};
use super::space::FormSpace;
use crate::graded::{BivectorSpec, GradedPolynomial};
use crate::sample::SplitMix64;
use crate::scalar::Coefficient;

/// Sampling configuration for the probabilistic rank check. Rejection is
/// sound (a failing point certifies rank deficiency); acceptance is
/// probabilistic over the seeded points.
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    pub seed: u64,
    pub points: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { seed: 0x00d1_5ac5, points: 32 }
    }
}

/// A generating description of an almost-Dirac candidate subbundle of
/// `TM ⊕ T*M`.
#[derive(Debug, Clone)]
pub enum DiracSpec<C> {
    /// The graph `{v ⊕ i_v omega}` of a 2-form.
    GraphOfForm(DifferentialForm<C>),
    /// The graph `{pi#(eta) ⊕ eta}` of a bivector.
    GraphOfBivector(BivectorSpec<C>),
    /// The kernel distribution of a set of annihilating 1-forms, together
    /// with those forms.
    Distribution { space: FormSpace, annihilators: Vec<DifferentialForm<C>> },
}

/// Outcome of the isotropy-and-rank check.
#[derive(Debug, Clone)]
pub enum AlmostDiracVerdict<C> {
    AlmostDirac,
    NotIsotropic { pair: (usize, usize), witness: GradedPolynomial<C> },
    RankDeficient { point: usize, rank: usize, expected: usize },
}

impl<C> AlmostDiracVerdict<C> {
    pub fn is_almost_dirac(&self) -> bool {
        matches!(self, AlmostDiracVerdict::AlmostDirac)
    }
}

/// Outcome of the integrability check.
#[derive(Debug, Clone)]
pub enum IntegrabilityVerdict<C> {
    Dirac,
    AlmostOnly(Obstruction<C>),
}

impl<C> IntegrabilityVerdict<C> {
    pub fn is_dirac(&self) -> bool {
        matches!(self, IntegrabilityVerdict::Dirac)
    }
}

/// Why integrability fails.
#[derive(Debug, Clone)]
pub enum Obstruction<C> {
    /// `d omega != 0`; carries the 3-form witness.
    NonClosed(DifferentialForm<C>),
    /// A nonzero Jacobi residual of the bivector (0-based triple).
    Jacobi { triple: (usize, usize, usize), residual: GradedPolynomial<C> },
    /// A commutator of kernel fields escapes the distribution: applying
    /// annihilator `annihilator` to `[v_i, v_j]` leaves `witness`.
    NonInvolutive { fields: (usize, usize), annihilator: usize, witness: GradedPolynomial<C> },
}

impl<C: Coefficient> DiracSpec<C> {
    /// The form space the structure lives over. For a bivector graph this is
    /// a Cartesian space built over the bivector's base coordinate names.
    pub fn form_space(&self) -> Result<FormSpace, DiracError> {
        match self {
            DiracSpec::GraphOfForm(omega) => Ok(omega.space().clone()),
            DiracSpec::Distribution { space, .. } => Ok(space.clone()),
            DiracSpec::GraphOfBivector(pi) => {
                let names: Vec<String> = (0..pi.dim())
                    .map(|i| pi.space().context().name(pi.space().position(i)).to_string())
                    .collect();
                let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                FormSpace::euclidean(&refs)
            }
        }
    }

    /// Generating sections of the candidate subbundle.
    ///
    /// * graph of a 2-form: `{d/dx^i ⊕ i_{d/dx^i} omega}`;
    /// * graph of a bivector: `{pi#(dx^i) ⊕ dx^i}` with `pi#(dx^i) = sum_j pi^{ij} d/dx^j`;
    /// * distribution: polynomial spanning fields of the kernel (paired with
    ///   the zero form) together with `0 ⊕ omega^a`.
    pub fn generators(&self) -> Result<Vec<PontryaginSection<C>>, DiracError> {
        let space = self.form_space()?;
        match self {
            DiracSpec::GraphOfForm(omega) => {
                let mut out = Vec::with_capacity(space.dim());
                for mu in 0..space.dim() {
                    let v = BaseVectorField::unit(&space, mu);
                    let eta = interior_product(&v, omega)?;
                    out.push(PontryaginSection::new(v, eta)?);
                }
                Ok(out)
            }
            DiracSpec::GraphOfBivector(pi) => {
                let phase_ctx = pi.space().context();
                // remap x-only polynomials onto the form space context
                let map: Vec<Option<usize>> = (0..phase_ctx.len())
                    .map(|idx| space.context().index_of(phase_ctx.name(idx)))
                    .collect();
                let mut out = Vec::with_capacity(pi.dim());
                for i in 0..pi.dim() {
                    let comps: Result<Vec<_>, _> = (0..pi.dim())
                        .map(|j| pi.component(i, j).remap(space.context(), &map))
                        .collect();
                    let v = BaseVectorField::new(&space, comps?)?;
                    let eta = DifferentialForm::coordinate_differential(&space, i);
                    out.push(PontryaginSection::new(v, eta)?);
                }
                Ok(out)
            }
            DiracSpec::Distribution { space, annihilators } => {
                if annihilators.is_empty() {
                    return Err(DiracError::EmptyGeneratorList);
                }
                let mut out = Vec::new();
                for v in self.kernel_fields()? {
                    out.push(PontryaginSection::new(v, DifferentialForm::zero(space))?);
                }
                for omega in annihilators {
                    out.push(PontryaginSection::new(BaseVectorField::zero(space), omega.clone())?);
                }
                Ok(out)
            }
        }
    }

    /// Polynomial spanning fields of the kernel of the annihilator forms.
    pub fn kernel_fields(&self) -> Result<Vec<BaseVectorField<C>>, DiracError> {
        let DiracSpec::Distribution { space, annihilators } = self else {
            return Ok(Vec::new());
        };
        let mut rows = Vec::with_capacity(annihilators.len());
        for omega in annihilators {
            rows.push(omega.one_form_coefficients()?);
        }
        let basis = kernel_basis(space.context(), &rows)?;
        basis
            .into_iter()
            .filter(|v| v.iter().any(|p| !p.is_zero()))
            .map(|comps| BaseVectorField::new(space, comps))
            .collect()
    }

    /// Symbolic isotropy of every generator pair plus a rank check at seeded
    /// rational sample points.
    pub fn check_almost_dirac(
        &self,
        cfg: &SampleConfig,
    ) -> Result<AlmostDiracVerdict<C>, DiracError> {
        let space = self.form_space()?;
        let gens = self.generators()?;
        for i in 0..gens.len() {
            for j in i..gens.len() {
                let p = pairing(&gens[i], &gens[j])?;
                if !p.is_zero() {
                    return Ok(AlmostDiracVerdict::NotIsotropic { pair: (i, j), witness: p });
                }
            }
        }
        // rank = dim M at sample points
        let n = space.dim();
        let mut rng = SplitMix64::new(cfg.seed);
        for point in 0..cfg.points {
            let vals = space.sample_point::<C>(&mut rng);
            let mut rows = Vec::with_capacity(gens.len());
            for g in &gens {
                let mut row = Vec::with_capacity(2 * n);
                for comp in g.vector.components() {
                    row.push(comp.eval_base(&vals)?);
                }
                for coeff in g.form.one_form_coefficients()? {
                    row.push(coeff.eval_base(&vals)?);
                }
                rows.push(row);
            }
            let rank = rank_at_point(&rows);
            if rank != n {
                return Ok(AlmostDiracVerdict::RankDeficient { point, rank, expected: n });
            }
        }
        Ok(AlmostDiracVerdict::AlmostDirac)
    }

    /// Closure under the Courant–Dorfman bracket, decided exactly:
    ///
    /// * graph of a 2-form: integrable iff `d omega = 0`;
    /// * graph of a bivector: integrable iff every Jacobi residual vanishes;
    /// * distribution: integrable iff the kernel is involutive (commutators
    ///   of the spanning fields are annihilated by every `omega^a`).
    pub fn check_integrability(&self) -> Result<IntegrabilityVerdict<C>, DiracError> {
        match self {
            DiracSpec::GraphOfForm(omega) => {
                let domega = omega.d();
                if domega.is_zero() {
                    Ok(IntegrabilityVerdict::Dirac)
                } else {
                    Ok(IntegrabilityVerdict::AlmostOnly(Obstruction::NonClosed(domega)))
                }
            }
            DiracSpec::GraphOfBivector(pi) => {
                for (triple, residual) in pi.jacobi_residuals()? {
                    if !residual.is_zero() {
                        return Ok(IntegrabilityVerdict::AlmostOnly(Obstruction::Jacobi {
                            triple,
                            residual,
                        }));
                    }
                }
                Ok(IntegrabilityVerdict::Dirac)
            }
            DiracSpec::Distribution { annihilators, .. } => {
                let fields = self.kernel_fields()?;
                for i in 0..fields.len() {
                    for j in (i + 1)..fields.len() {
                        let bracket = fields[i].lie_bracket(&fields[j])?;
                        for (a, omega) in annihilators.iter().enumerate() {
                            let obstruction =
                                interior_product(&bracket, omega)?.poly().clone();
                            if !obstruction.is_zero() {
                                return Ok(IntegrabilityVerdict::AlmostOnly(
                                    Obstruction::NonInvolutive {
                                        fields: (i, j),
                                        annihilator: a,
                                        witness: obstruction,
                                    },
                                ));
                            }
                        }
                    }
                }
                Ok(IntegrabilityVerdict::Dirac)
            }
        }
    }
}
