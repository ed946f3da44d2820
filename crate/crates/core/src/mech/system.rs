use std::collections::BTreeMap;
use std::sync::Arc;

use super::error::MechError;
use crate::expr::{Expression, VarSet};
use crate::scalar::Real;

/// Simulation state: time, positions, and the variant's second slot
/// (momenta for Hamiltonian systems, velocities for Lagrangian ones, empty
/// for port-Hamiltonian states, whose vector lives in `q`). `lambda` holds
/// the latest constraint multipliers and warm-starts the next implicit
/// solve.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    pub t: T,
    pub q: Vec<T>,
    pub pv: Vec<T>,
    pub lambda: Vec<T>,
}

impl<T: Real> State<T> {
    pub fn hamiltonian(t: T, q: Vec<T>, p: Vec<T>) -> Self {
        Self { t, q, pv: p, lambda: Vec::new() }
    }

    pub fn lagrangian(t: T, q: Vec<T>, v: Vec<T>) -> Self {
        Self { t, q, pv: v, lambda: Vec::new() }
    }

    pub fn port(t: T, x: Vec<T>) -> Self {
        Self { t, q: x, pv: Vec::new(), lambda: Vec::new() }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.q.iter().all(|v| v.is_finite())
            && self.pv.iter().all(|v| v.is_finite())
            && self.lambda.iter().all(|v| v.is_finite())
    }

    /// Values in system variable order `[q.., pv..]`.
    pub(crate) fn phase_vals(&self) -> Vec<T> {
        let mut vals = self.q.clone();
        vals.extend_from_slice(&self.pv);
        vals
    }
}

/// A one-form `sum_i c_i(q) dq^i` with expression coefficients over the
/// owning system's variable set.
#[derive(Debug, Clone)]
pub struct OneForm<T> {
    pub coeffs: Vec<Expression<T>>,
}

fn reindex<T: Real>(
    e: &Expression<T>,
    target: &Arc<VarSet>,
    map: &[usize],
) -> Expression<T> {
    let reps: Vec<Expression<T>> = map.iter().map(|&j| Expression::var(target, j)).collect();
    e.substitute(target, &reps).expect("reindex substitution is total")
}

fn substituted<T: Real>(
    e: &Expression<T>,
    target: &Arc<VarSet>,
    reps: &[Expression<T>],
) -> Expression<T> {
    e.substitute(target, reps).expect("substitution list is total")
}

/// Borrowed residual system: its variable set, residual expressions, and
/// dense Jacobian expressions.
pub(crate) type ResidualParts<'a, T> =
    (&'a Arc<VarSet>, &'a [Expression<T>], &'a [Vec<Expression<T>>]);

// ---------------------------------------------------------------------------
// canonical Hamiltonian systems
// ---------------------------------------------------------------------------

/// `H(q, p)` over variables `q1..qn, p1..pn`.
#[derive(Debug, Clone)]
pub struct HamiltonianSystem<T> {
    n: usize,
    vars: Arc<VarSet>,
    h: Expression<T>,
    dh_dq: Vec<Expression<T>>,
    dh_dp: Vec<Expression<T>>,
    hq_depends_p: bool,
    hp_depends_q: bool,
    imp_vars: Arc<VarSet>,
    imp_resid: Vec<Expression<T>>,
    imp_jac: Vec<Vec<Expression<T>>>,
}

impl<T: Real> HamiltonianSystem<T> {
    /// Canonical variable set `q1..qn, p1..pn`.
    pub fn canonical_vars(n: usize) -> Arc<VarSet> {
        let mut names: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
        names.extend((1..=n).map(|i| format!("p{i}")));
        VarSet::new(names)
    }

    pub fn new(n: usize, h: Expression<T>) -> Result<Self, MechError> {
        let vars = Self::canonical_vars(n);
        if h.vars().len() != 2 * n {
            return Err(MechError::DimensionMismatch { expected: 2 * n, got: h.vars().len() });
        }
        let h = reindex(&h, &vars, &(0..2 * n).collect::<Vec<_>>());
        let dh_dq: Vec<_> = (0..n).map(|i| h.diff(i)).collect();
        let dh_dp: Vec<_> = (0..n).map(|i| h.diff(n + i)).collect();
        let hq_depends_p = dh_dq.iter().any(|e| (0..n).any(|j| e.depends_on(n + j)));
        let hp_depends_q = dh_dp.iter().any(|e| (0..n).any(|j| e.depends_on(j)));

        // implicit momentum update over [q(n), p(n), pp(n), h]:
        // G_i = pp_i - p_i + h * dH/dq_i(q, pp)
        let mut names: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
        names.extend((1..=n).map(|i| format!("p{i}")));
        names.extend((1..=n).map(|i| format!("pp{i}")));
        names.push("h".into());
        let imp_vars = VarSet::new(names);
        let hvar = Expression::var(&imp_vars, 3 * n);
        let mut reps: Vec<Expression<T>> =
            (0..n).map(|j| Expression::var(&imp_vars, j)).collect();
        reps.extend((0..n).map(|j| Expression::var(&imp_vars, 2 * n + j)));
        let mut imp_resid = Vec::with_capacity(n);
        for i in 0..n {
            let grad_new = substituted(&dh_dq[i], &imp_vars, &reps);
            let pp = Expression::var(&imp_vars, 2 * n + i);
            let p = Expression::var(&imp_vars, n + i);
            imp_resid.push(pp.sub(&p).add(&hvar.mul(&grad_new)));
        }
        let imp_jac = imp_resid
            .iter()
            .map(|r| (0..n).map(|j| r.diff(2 * n + j)).collect())
            .collect();
        Ok(Self {
            n,
            vars,
            h,
            dh_dq,
            dh_dp,
            hq_depends_p,
            hp_depends_q,
            imp_vars,
            imp_resid,
            imp_jac,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn hamiltonian(&self) -> &Expression<T> {
        &self.h
    }

    pub fn grad_q(&self) -> &[Expression<T>] {
        &self.dh_dq
    }

    pub fn grad_p(&self) -> &[Expression<T>] {
        &self.dh_dp
    }

    /// H = T(p) + V(q) structurally.
    pub fn is_separable(&self) -> bool {
        !self.hq_depends_p && !self.hp_depends_q
    }

    /// dH/dq independent of p, which makes the symplectic-Euler momentum
    /// update explicit.
    pub fn momentum_update_explicit(&self) -> bool {
        !self.hq_depends_p
    }

    pub fn energy(&self, s: &State<T>) -> T {
        self.h.eval(&s.phase_vals())
    }

    pub(crate) fn implicit_parts(&self) -> ResidualParts<'_, T> {
        (&self.imp_vars, &self.imp_resid, &self.imp_jac)
    }
}

// ---------------------------------------------------------------------------
// constrained Lagrangian systems
// ---------------------------------------------------------------------------

/// `L(q, v)` over variables `q1..qn, v1..vn`, with `m` linear-in-velocity
/// constraints `omega^a(q) . v = 0`.
#[derive(Debug, Clone)]
pub struct LagrangianSystem<T> {
    n: usize,
    m: usize,
    vars: Arc<VarSet>,
    l: Expression<T>,
    constraints: Vec<OneForm<T>>,
    dl_dq: Vec<Expression<T>>,
    dl_dv: Vec<Expression<T>>,
    d1_vars: Arc<VarSet>,
    d1_resid: Vec<Expression<T>>,
    d1_jac: Vec<Vec<Expression<T>>>,
}

impl<T: Real> LagrangianSystem<T> {
    /// Canonical variable set `q1..qn, v1..vn`.
    pub fn canonical_vars(n: usize) -> Arc<VarSet> {
        let mut names: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
        names.extend((1..=n).map(|i| format!("v{i}")));
        VarSet::new(names)
    }

    pub fn new(
        n: usize,
        l: Expression<T>,
        constraints: Vec<OneForm<T>>,
    ) -> Result<Self, MechError> {
        let vars = Self::canonical_vars(n);
        if l.vars().len() != 2 * n {
            return Err(MechError::DimensionMismatch { expected: 2 * n, got: l.vars().len() });
        }
        let l = reindex(&l, &vars, &(0..2 * n).collect::<Vec<_>>());
        let mut forms = Vec::with_capacity(constraints.len());
        for form in constraints {
            if form.coeffs.len() != n {
                return Err(MechError::DimensionMismatch { expected: n, got: form.coeffs.len() });
            }
            let coeffs: Vec<Expression<T>> = form
                .coeffs
                .iter()
                .map(|c| reindex(c, &vars, &(0..2 * n).collect::<Vec<_>>()))
                .collect();
            if coeffs.iter().any(|c| (0..n).any(|j| c.depends_on(n + j))) {
                return Err(MechError::ConstraintDependsOnVelocity);
            }
            forms.push(OneForm { coeffs });
        }
        let m = forms.len();
        if m > 0 {
            check_constraint_independence(n, &forms)?;
        }
        let dl_dq: Vec<_> = (0..n).map(|i| l.diff(i)).collect();
        let dl_dv: Vec<_> = (0..n).map(|i| l.diff(n + i)).collect();

        // first-order Lagrange–Dirac residual over [q(n), v(n), w(n), lam(m), h]:
        //   R_i = dL/dv_i(q + h w, w) - dL/dv_i(q, v)
        //         - h (dL/dq_i(q, w) + sum_a lam_a omega^a_i(q))
        //   R_{n+a} = omega^a(q + h w) . w
        let mut names: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
        names.extend((1..=n).map(|i| format!("v{i}")));
        names.extend((1..=n).map(|i| format!("w{i}")));
        names.extend((1..=m).map(|a| format!("lam{a}")));
        names.push("h".into());
        let d1_vars = VarSet::new(names);
        let dv = &d1_vars;
        let hvar = Expression::var(dv, 3 * n + m);
        let q_new: Vec<Expression<T>> = (0..n)
            .map(|j| {
                Expression::var(dv, j).add(&hvar.mul(&Expression::var(dv, 2 * n + j)))
            })
            .collect();
        let w: Vec<Expression<T>> = (0..n).map(|j| Expression::var(dv, 2 * n + j)).collect();
        // substitution lists over [q, v] source vars
        let mut reps_new: Vec<Expression<T>> = q_new.clone();
        reps_new.extend(w.iter().cloned());
        let mut reps_old: Vec<Expression<T>> = (0..n).map(|j| Expression::var(dv, j)).collect();
        reps_old.extend((0..n).map(|j| Expression::var(dv, n + j)));
        let mut reps_mid: Vec<Expression<T>> = (0..n).map(|j| Expression::var(dv, j)).collect();
        reps_mid.extend(w.iter().cloned());

        let mut d1_resid = Vec::with_capacity(n + m);
        for i in 0..n {
            let p_new = substituted(&dl_dv[i], dv, &reps_new);
            let p_old = substituted(&dl_dv[i], dv, &reps_old);
            let force = substituted(&dl_dq[i], dv, &reps_mid);
            let mut rhs = force;
            for (a, form) in forms.iter().enumerate() {
                let lam = Expression::var(dv, 3 * n + a);
                let coeff = substituted(&form.coeffs[i], dv, &reps_old);
                rhs = rhs.add(&lam.mul(&coeff));
            }
            d1_resid.push(p_new.sub(&p_old).sub(&hvar.mul(&rhs)));
        }
        for form in &forms {
            let mut acc = Expression::constant(dv, T::zero());
            for i in 0..n {
                let coeff_new = substituted(&form.coeffs[i], dv, &reps_new);
                acc = acc.add(&coeff_new.mul(&w[i]));
            }
            d1_resid.push(acc);
        }
        let d1_jac = d1_resid
            .iter()
            .map(|r| {
                (0..n + m)
                    .map(|j| r.diff(if j < n { 2 * n + j } else { 3 * n + (j - n) }))
                    .collect()
            })
            .collect();

        Ok(Self { n, m, vars, l, constraints: forms, dl_dq, dl_dv, d1_vars, d1_resid, d1_jac })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn constraint_count(&self) -> usize {
        self.m
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn lagrangian(&self) -> &Expression<T> {
        &self.l
    }

    pub fn constraints(&self) -> &[OneForm<T>] {
        &self.constraints
    }

    pub fn grad_q(&self) -> &[Expression<T>] {
        &self.dl_dq
    }

    pub fn grad_v(&self) -> &[Expression<T>] {
        &self.dl_dv
    }

    /// Generalized energy `E = v . dL/dv - L`.
    pub fn energy(&self, s: &State<T>) -> T {
        let vals = s.phase_vals();
        let mut acc = -self.l.eval(&vals);
        for i in 0..self.n {
            acc = acc + s.pv[i] * self.dl_dv[i].eval(&vals);
        }
        acc
    }

    /// `max_a |omega^a(q) . v|`.
    pub fn constraint_residual(&self, s: &State<T>) -> T {
        let vals = s.phase_vals();
        let mut worst = T::zero();
        for form in &self.constraints {
            let mut acc = T::zero();
            for i in 0..self.n {
                acc = acc + form.coeffs[i].eval(&vals) * s.pv[i];
            }
            worst = worst.max(acc.abs());
        }
        worst
    }

    pub(crate) fn dirac1_parts(&self) -> ResidualParts<'_, T> {
        (&self.d1_vars, &self.d1_resid, &self.d1_jac)
    }
}

/// Numeric rank check of the constraint coefficient matrix at seeded sample
/// configurations; the one-forms must stay independent.
fn check_constraint_independence<T: Real>(
    n: usize,
    forms: &[OneForm<T>],
) -> Result<(), MechError> {
    let m = forms.len();
    let mut rng = crate::sample::SplitMix64::new(0xC0_57_A1);
    for _ in 0..8 {
        let vals: Vec<T> = (0..2 * n)
            .map(|i| if i < n { T::of(rng.int_in(-20, 20) as f64 / 10.0) } else { T::zero() })
            .collect();
        let mut rows: Vec<Vec<T>> = forms
            .iter()
            .map(|f| f.coeffs.iter().map(|c| c.eval(&vals)).collect())
            .collect();
        // Gaussian elimination rank with a fixed pivot threshold
        let mut rank = 0;
        for col in 0..n {
            if rank >= m {
                break;
            }
            let pivot = (rank..m)
                .max_by(|&a, &b| {
                    rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap()
                })
                .unwrap();
            if rows[pivot][col].abs() <= T::of(1e-9) {
                continue;
            }
            rows.swap(rank, pivot);
            for r in (rank + 1)..m {
                let factor = rows[r][col] / rows[rank][col];
                for c in col..n {
                    let delta = factor * rows[rank][c];
                    rows[r][c] = rows[r][c] - delta;
                }
            }
            rank += 1;
        }
        if rank < m {
            return Err(MechError::DependentConstraints);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// port-Hamiltonian systems
// ---------------------------------------------------------------------------

/// `x' = (J(x) - R(x)) dH/dx + g(x) f(t)` over variables `x1..xn, t`.
/// J is stored as its strict upper triangle (antisymmetry structural), R as
/// its upper triangle (symmetry structural), g sparsely by `(row, port)`.
#[derive(Debug, Clone)]
pub struct PortSystem<T> {
    n: usize,
    ports: usize,
    vars: Arc<VarSet>,
    h: Expression<T>,
    grad_h: Vec<Expression<T>>,
    j_upper: BTreeMap<(usize, usize), Expression<T>>,
    r_upper: BTreeMap<(usize, usize), Expression<T>>,
    g: BTreeMap<(usize, usize), Expression<T>>,
    f: Vec<Expression<T>>,
    mid_vars: Arc<VarSet>,
    mid_resid: Vec<Expression<T>>,
    mid_jac: Vec<Vec<Expression<T>>>,
}

impl<T: Real> PortSystem<T> {
    /// Canonical variable set `x1..xn, t`.
    pub fn canonical_vars(n: usize) -> Arc<VarSet> {
        let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        names.push("t".into());
        VarSet::new(names)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        ports: usize,
        h: Expression<T>,
        j_upper: BTreeMap<(usize, usize), Expression<T>>,
        r_upper: BTreeMap<(usize, usize), Expression<T>>,
        g: BTreeMap<(usize, usize), Expression<T>>,
        f: Vec<Expression<T>>,
    ) -> Result<Self, MechError> {
        let vars = Self::canonical_vars(n);
        let full = (0..=n).collect::<Vec<_>>();
        let re = |e: &Expression<T>| reindex(e, &vars, &full);
        if h.vars().len() != n + 1 {
            return Err(MechError::DimensionMismatch { expected: n + 1, got: h.vars().len() });
        }
        let h = re(&h);
        if h.depends_on(n) {
            return Err(MechError::BadDependence { what: "H" });
        }
        for &(i, j) in j_upper.keys() {
            if i >= j || j >= n {
                return Err(MechError::DimensionMismatch { expected: n, got: j });
            }
        }
        for &(i, j) in r_upper.keys() {
            if i > j || j >= n {
                return Err(MechError::DimensionMismatch { expected: n, got: j });
            }
        }
        if f.len() != ports {
            return Err(MechError::DimensionMismatch { expected: ports, got: f.len() });
        }
        let j_upper: BTreeMap<_, _> = j_upper.iter().map(|(&k, e)| (k, re(e))).collect();
        let r_upper: BTreeMap<_, _> = r_upper.iter().map(|(&k, e)| (k, re(e))).collect();
        let g: BTreeMap<_, _> = g.iter().map(|(&k, e)| (k, re(e))).collect();
        let f: Vec<_> = f.iter().map(re).collect();
        for e in j_upper.values().chain(r_upper.values()).chain(g.values()) {
            if e.depends_on(n) {
                return Err(MechError::BadDependence { what: "a J/R/g entry" });
            }
        }
        for e in &f {
            if (0..n).any(|i| e.depends_on(i)) {
                return Err(MechError::BadDependence { what: "an input signal" });
            }
        }
        let grad_h: Vec<_> = (0..n).map(|i| h.diff(i)).collect();

        // midpoint residual over [x(n), xp(n), t, h]:
        // F_i = xp_i - x_i - h [ (J-R)(xm) gradH(xm) + g(xm) f(t + h/2) ]_i
        let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        names.extend((1..=n).map(|i| format!("xp{i}")));
        names.push("t".into());
        names.push("h".into());
        let mid_vars = VarSet::new(names);
        let mv = &mid_vars;
        let hvar = Expression::var(mv, 2 * n + 1);
        let tvar = Expression::var(mv, 2 * n);
        let half = Expression::constant(mv, T::of(0.5));
        let mut reps_mid: Vec<Expression<T>> = (0..n)
            .map(|i| {
                Expression::var(mv, i).add(&Expression::var(mv, n + i)).mul(&half)
            })
            .collect();
        let t_mid = tvar.add(&hvar.mul(&half));
        reps_mid.push(t_mid);

        let subst = |e: &Expression<T>| substituted(e, mv, &reps_mid);
        let lookup_j = |i: usize, j: usize| -> Option<(bool, &Expression<T>)> {
            if i < j {
                j_upper.get(&(i, j)).map(|e| (false, e))
            } else if j < i {
                j_upper.get(&(j, i)).map(|e| (true, e))
            } else {
                None
            }
        };
        let lookup_r = |i: usize, j: usize| -> Option<&Expression<T>> {
            r_upper.get(&(i.min(j), i.max(j)))
        };

        let mut mid_resid = Vec::with_capacity(n);
        for i in 0..n {
            let mut flow = Expression::constant(mv, T::zero());
            for jcol in 0..n {
                let mut entry = Expression::constant(mv, T::zero());
                if let Some((negated, e)) = lookup_j(i, jcol) {
                    let e = subst(e);
                    entry = if negated { entry.sub(&e) } else { entry.add(&e) };
                }
                if let Some(e) = lookup_r(i, jcol) {
                    entry = entry.sub(&subst(e));
                }
                if entry.is_const_zero() {
                    continue;
                }
                flow = flow.add(&entry.mul(&subst(&grad_h[jcol])));
            }
            for (k, fk) in f.iter().enumerate() {
                if let Some(ge) = g.get(&(i, k)) {
                    flow = flow.add(&subst(ge).mul(&subst(fk)));
                }
            }
            let xp = Expression::var(mv, n + i);
            let x = Expression::var(mv, i);
            mid_resid.push(xp.sub(&x).sub(&hvar.mul(&flow)));
        }
        let mid_jac = mid_resid
            .iter()
            .map(|r| (0..n).map(|j| r.diff(n + j)).collect())
            .collect();

        Ok(Self {
            n,
            ports,
            vars,
            h,
            grad_h,
            j_upper,
            r_upper,
            g,
            f,
            mid_vars,
            mid_resid,
            mid_jac,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn port_count(&self) -> usize {
        self.ports
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn hamiltonian(&self) -> &Expression<T> {
        &self.h
    }

    /// Strict-upper-triangle entries of the interconnection matrix.
    pub fn j_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Expression<T>)> {
        self.j_upper.iter()
    }

    pub fn energy(&self, s: &State<T>) -> T {
        let mut vals = s.q.clone();
        vals.push(s.t);
        self.h.eval(&vals)
    }

    /// Power supplied/dissipated along the flow:
    /// `-gradH^T R gradH + gradH^T g f`, evaluated at `(x, t)`.
    pub fn power_rate(&self, x: &[T], t: T) -> T {
        let mut vals = x.to_vec();
        vals.push(t);
        let grad: Vec<T> = self.grad_h.iter().map(|e| e.eval(&vals)).collect();
        let mut acc = T::zero();
        for (&(i, j), e) in &self.r_upper {
            let rij = e.eval(&vals);
            if i == j {
                acc = acc - grad[i] * rij * grad[i];
            } else {
                // symmetric off-diagonal contributes twice
                acc = acc - (grad[i] * rij * grad[j] + grad[j] * rij * grad[i]);
            }
        }
        let fvals: Vec<T> = self.f.iter().map(|e| e.eval(&vals)).collect();
        for (&(i, k), e) in &self.g {
            acc = acc + grad[i] * e.eval(&vals) * fvals[k];
        }
        acc
    }

    pub(crate) fn midpoint_parts(&self) -> ResidualParts<'_, T> {
        (&self.mid_vars, &self.mid_resid, &self.mid_jac)
    }
}

// ---------------------------------------------------------------------------

/// A mechanical system of any supported variant.
#[derive(Debug, Clone)]
pub enum MechSystem<T> {
    Hamiltonian(HamiltonianSystem<T>),
    Lagrangian(LagrangianSystem<T>),
    Port(PortSystem<T>),
}

impl<T: Real> MechSystem<T> {
    pub fn dim(&self) -> usize {
        match self {
            MechSystem::Hamiltonian(s) => s.dim(),
            MechSystem::Lagrangian(s) => s.dim(),
            MechSystem::Port(s) => s.dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MechSystem::Hamiltonian(_) => "Hamiltonian",
            MechSystem::Lagrangian(_) => "Lagrangian",
            MechSystem::Port(_) => "port-Hamiltonian",
        }
    }

    pub fn energy(&self, s: &State<T>) -> T {
        match self {
            MechSystem::Hamiltonian(sys) => sys.energy(s),
            MechSystem::Lagrangian(sys) => sys.energy(s),
            MechSystem::Port(sys) => sys.energy(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator() -> HamiltonianSystem<f64> {
        let vars = HamiltonianSystem::<f64>::canonical_vars(1);
        let h = Expression::parse(&vars, "(q1^2 + p1^2)/2").unwrap();
        HamiltonianSystem::new(1, h).unwrap()
    }

    #[test]
    fn oscillator_structure() {
        let sys = oscillator();
        assert!(sys.is_separable());
        assert!(sys.momentum_update_explicit());
        let s = State::hamiltonian(0.0, vec![1.0], vec![0.0]);
        assert_eq!(sys.energy(&s), 0.5);
        assert_eq!(sys.grad_q()[0].eval(&[3.0, 0.0]), 3.0);
    }

    #[test]
    fn nonseparable_detected() {
        let vars = HamiltonianSystem::<f64>::canonical_vars(1);
        let h: Expression<f64> = Expression::parse(&vars, "q1*p1 + p1^2/2").unwrap();
        let sys = HamiltonianSystem::new(1, h).unwrap();
        assert!(!sys.is_separable());
        assert!(!sys.momentum_update_explicit());
    }

    #[test]
    fn lagrangian_energy_and_residual() {
        // free particle in 2d with constraint dq2
        let vars = LagrangianSystem::<f64>::canonical_vars(2);
        let l: Expression<f64> = Expression::parse(&vars, "(v1^2 + v2^2)/2").unwrap();
        let omega = OneForm {
            coeffs: vec![
                Expression::constant(&vars, 0.0),
                Expression::constant(&vars, 1.0),
            ],
        };
        let sys = LagrangianSystem::new(2, l, vec![omega]).unwrap();
        let s = State::lagrangian(0.0, vec![0.0, 0.0], vec![1.0, 0.25]);
        // E = v.p - L = v^2/2 for a pure kinetic Lagrangian
        assert!((sys.energy(&s) - (1.0 + 0.0625) / 2.0).abs() < 1e-15);
        assert_eq!(sys.constraint_residual(&s), 0.25);
    }

    #[test]
    fn constraint_must_not_depend_on_velocity() {
        let vars = LagrangianSystem::<f64>::canonical_vars(1);
        let l: Expression<f64> = Expression::parse(&vars, "v1^2/2").unwrap();
        let bad = OneForm { coeffs: vec![Expression::<f64>::parse(&vars, "v1").unwrap()] };
        assert!(matches!(
            LagrangianSystem::new(1, l, vec![bad]),
            Err(MechError::ConstraintDependsOnVelocity)
        ));
    }

    #[test]
    fn port_power_rate_conservative_case() {
        // J = [[0,1],[-1,0]], R = 0, no ports: power rate identically zero
        let vars = PortSystem::<f64>::canonical_vars(2);
        let h = Expression::parse(&vars, "(x1^2 + x2^2)/2").unwrap();
        let mut j = BTreeMap::new();
        j.insert((0, 1), Expression::constant(&vars, 1.0));
        let sys =
            PortSystem::new(2, 0, h, j, BTreeMap::new(), BTreeMap::new(), vec![]).unwrap();
        assert_eq!(sys.power_rate(&[1.0, 2.0], 0.0), 0.0);
        let s = State::port(0.0, vec![1.0, 2.0]);
        assert_eq!(sys.energy(&s), 2.5);
    }
}
