//! Mechanical system specification files.
//!
//! Sectioned text, one system per file; blank lines and `#` comments are
//! ignored:
//!
//! ```text
//! [hamiltonian] n=1
//! H = (q1^2 + p1^2)/2
//! ```
//!
//! ```text
//! [lagrangian] n=3
//! L = (v1^2 + v2^2)/2 + v3^2/2
//! constraint: sin(q3)*dq1 - cos(q3)*dq2
//! ```
//!
//! ```text
//! [port] n=2
//! H = (x1^2 + x2^2)/2
//! J 1 2 = 1
//! R 2 2 = 0.1
//! g 1 1 = 1
//! f 1 = sin(t)
//! ```
//!
//! Hamiltonians use variables `q1..qn, p1..pn`; Lagrangians `q1..qn, v1..vn`
//! with constraint one-forms written in the differentials `dq1..dqn` and
//! position-dependent coefficients; port systems use `x1..xn` and time `t`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::error::MechError;
use super::system::{HamiltonianSystem, LagrangianSystem, MechSystem, OneForm, PortSystem};
use crate::expr::{Expression, VarSet};
use crate::scalar::Real;

fn err(line: usize, msg: impl Into<String>) -> MechError {
    MechError::Parse { line, msg: msg.into() }
}

struct Cleaned<'a> {
    no: usize,
    text: &'a str,
}

pub fn parse_system_file<T: Real>(text: &str) -> Result<MechSystem<T>, MechError> {
    let lines: Vec<Cleaned> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Cleaned { no: i + 1, text: l.split('#').next().unwrap_or("").trim() })
        .filter(|l| !l.text.is_empty())
        .collect();
    let header = lines.first().ok_or_else(|| err(0, "empty system file"))?;
    let (section, rest) = header
        .text
        .split_once(']')
        .map(|(a, b)| (a.trim_start_matches('['), b.trim()))
        .ok_or_else(|| err(header.no, "expected `[section] n=..`"))?;
    let n: usize = rest
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v| v >= 1)
        .ok_or_else(|| err(header.no, "expected `n=<positive integer>`"))?;
    let body = &lines[1..];
    match section {
        "hamiltonian" => parse_hamiltonian(n, body).map(MechSystem::Hamiltonian),
        "lagrangian" => parse_lagrangian(n, body).map(MechSystem::Lagrangian),
        "port" => parse_port(n, body).map(MechSystem::Port),
        other => Err(err(header.no, format!("unknown section `{other}`"))),
    }
}

fn expect_assignment<'a>(l: &Cleaned<'a>, key: &str) -> Result<&'a str, MechError> {
    l.text
        .strip_prefix(key)
        .and_then(|rest| rest.trim_start().strip_prefix('='))
        .map(str::trim)
        .ok_or_else(|| err(l.no, format!("expected `{key} = <expression>`")))
}

fn parse_hamiltonian<T: Real>(
    n: usize,
    body: &[Cleaned],
) -> Result<HamiltonianSystem<T>, MechError> {
    let [line] = body else {
        return Err(err(body.first().map(|l| l.no).unwrap_or(0), "expected a single `H = ...` line"));
    };
    let expr_text = expect_assignment(line, "H")?;
    let vars = HamiltonianSystem::<T>::canonical_vars(n);
    let h = Expression::parse(&vars, expr_text).map_err(|e| err(line.no, e.to_string()))?;
    HamiltonianSystem::new(n, h)
}

fn parse_lagrangian<T: Real>(
    n: usize,
    body: &[Cleaned],
) -> Result<LagrangianSystem<T>, MechError> {
    let vars = LagrangianSystem::<T>::canonical_vars(n);
    let mut l: Option<Expression<T>> = None;
    let mut constraints = Vec::new();
    for line in body {
        if let Some(rest) = line.text.strip_prefix("constraint:") {
            constraints.push(parse_one_form(n, &vars, rest.trim(), line.no)?);
        } else {
            let expr_text = expect_assignment(line, "L")?;
            if l.is_some() {
                return Err(err(line.no, "duplicate `L = ...`"));
            }
            l = Some(Expression::parse(&vars, expr_text).map_err(|e| err(line.no, e.to_string()))?);
        }
    }
    let l = l.ok_or_else(|| err(0, "missing `L = ...`"))?;
    LagrangianSystem::new(n, l, constraints)
}

/// Parse `sum_i c_i(q) dq^i` written as an expression over `q1.., dq1..`;
/// coefficients are extracted by differentiation and checked for linearity.
fn parse_one_form<T: Real>(
    n: usize,
    sys_vars: &Arc<VarSet>,
    text: &str,
    lineno: usize,
) -> Result<OneForm<T>, MechError> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
    names.extend((1..=n).map(|i| format!("dq{i}")));
    let form_vars = VarSet::new(names);
    let expr = Expression::parse(&form_vars, text).map_err(|e| err(lineno, e.to_string()))?;
    let mut coeffs_on_sys = Vec::with_capacity(n);
    // substitution q_i -> q_i, dq_i -> 0 over the system variables
    let mut to_sys: Vec<Expression<T>> =
        (0..n).map(|i| Expression::var(sys_vars, i)).collect();
    to_sys.extend((0..n).map(|_| Expression::constant(sys_vars, T::zero())));
    for i in 0..n {
        let coeff = expr.diff(n + i);
        if (0..n).any(|j| coeff.depends_on(n + j)) {
            return Err(MechError::NotAOneForm);
        }
        coeffs_on_sys.push(coeff.substitute(sys_vars, &to_sys)?);
    }
    // the dq-free remainder must vanish identically
    let remainder = expr.substitute(sys_vars, &to_sys)?;
    match remainder.const_value() {
        Some(v) if v == T::zero() => {}
        _ => return Err(MechError::NotAOneForm),
    }
    Ok(OneForm { coeffs: coeffs_on_sys })
}

fn parse_port<T: Real>(n: usize, body: &[Cleaned]) -> Result<PortSystem<T>, MechError> {
    let vars = PortSystem::<T>::canonical_vars(n);
    let mut h: Option<Expression<T>> = None;
    let mut j_upper: BTreeMap<(usize, usize), Expression<T>> = BTreeMap::new();
    let mut r_upper: BTreeMap<(usize, usize), Expression<T>> = BTreeMap::new();
    let mut g: BTreeMap<(usize, usize), Expression<T>> = BTreeMap::new();
    let mut f: BTreeMap<usize, Expression<T>> = BTreeMap::new();
    let mut ports = 0usize;

    for line in body {
        let (head, expr_text) = line
            .text
            .split_once('=')
            .map(|(a, b)| (a.trim(), b.trim()))
            .ok_or_else(|| err(line.no, "expected `<entry> = <expression>`"))?;
        let expr =
            Expression::parse(&vars, expr_text).map_err(|e| err(line.no, e.to_string()))?;
        let fields: Vec<&str> = head.split_whitespace().collect();
        let idx = |s: &str| -> Result<usize, MechError> {
            s.parse::<usize>()
                .ok()
                .filter(|&v| v >= 1 && v <= n)
                .map(|v| v - 1)
                .ok_or_else(|| err(line.no, format!("index `{s}` out of range 1..={n}")))
        };
        match fields.as_slice() {
            ["H"] => {
                if h.replace(expr).is_some() {
                    return Err(err(line.no, "duplicate `H = ...`"));
                }
            }
            ["J", i, j] => {
                let (i, j) = (idx(i)?, idx(j)?);
                if i >= j {
                    return Err(err(line.no, "J entries use the strict upper triangle (i < j)"));
                }
                if j_upper.insert((i, j), expr).is_some() {
                    return Err(err(line.no, "duplicate J entry"));
                }
            }
            ["R", i, j] => {
                let (i, j) = (idx(i)?, idx(j)?);
                let key = (i.min(j), i.max(j));
                if r_upper.insert(key, expr).is_some() {
                    return Err(err(line.no, "duplicate R entry"));
                }
            }
            ["g", i, k] => {
                let i = idx(i)?;
                let k: usize = k
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| err(line.no, "port index must be >= 1"))?;
                ports = ports.max(k);
                if g.insert((i, k - 1), expr).is_some() {
                    return Err(err(line.no, "duplicate g entry"));
                }
            }
            ["f", k] => {
                let k: usize = k
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| err(line.no, "port index must be >= 1"))?;
                ports = ports.max(k);
                if f.insert(k - 1, expr).is_some() {
                    return Err(err(line.no, "duplicate f entry"));
                }
            }
            _ => return Err(err(line.no, format!("unrecognized entry `{head}`"))),
        }
    }
    let h = h.ok_or_else(|| err(0, "missing `H = ...`"))?;
    let f_vec: Vec<Expression<T>> = (0..ports)
        .map(|k| f.remove(&k).unwrap_or_else(|| Expression::constant(&vars, T::zero())))
        .collect();
    PortSystem::new(n, ports, h, j_upper, r_upper, g, f_vec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mech::{simulate, Method, NewtonCfg, State};

    #[test]
    fn parses_hamiltonian_file() {
        let sys = parse_system_file::<f64>("[hamiltonian] n=1\nH = (q1^2 + p1^2)/2\n").unwrap();
        let MechSystem::Hamiltonian(h) = &sys else { panic!("wrong variant") };
        assert_eq!(h.dim(), 1);
        assert!(h.is_separable());
    }

    #[test]
    fn parses_lagrangian_with_constraint() {
        let text = "\
[lagrangian] n=3
L = (v1^2 + v2^2 + v3^2)/2
constraint: sin(q3)*dq1 - cos(q3)*dq2
";
        let sys = parse_system_file::<f64>(text).unwrap();
        let MechSystem::Lagrangian(l) = &sys else { panic!("wrong variant") };
        assert_eq!(l.constraint_count(), 1);
        // coefficients at q3 = 0: (0, -1, 0)
        let vals = [0.0; 6];
        let coeffs: Vec<f64> =
            l.constraints()[0].coeffs.iter().map(|c| c.eval(&vals)).collect();
        assert_eq!(coeffs, vec![0.0, -1.0, 0.0]);
    }

    #[test]
    fn rejects_nonlinear_constraint() {
        let text = "[lagrangian] n=1\nL = v1^2/2\nconstraint: dq1^2\n";
        assert!(matches!(parse_system_file::<f64>(text), Err(MechError::NotAOneForm)));
        let text = "[lagrangian] n=1\nL = v1^2/2\nconstraint: dq1 + q1\n";
        assert!(matches!(parse_system_file::<f64>(text), Err(MechError::NotAOneForm)));
    }

    #[test]
    fn parses_port_file_and_runs() {
        let text = "\
[port] n=1
H = x1^2/2
R 1 1 = 1
g 1 1 = 1
f 1 = sin(t)
";
        let sys = parse_system_file::<f64>(text).unwrap();
        let s0 = State::port(0.0, vec![1.0]);
        let rec = simulate(&sys, Method::Midpoint, &s0, 0.01, 1.0, 10, &NewtonCfg::default())
            .unwrap();
        assert_eq!(rec.samples().len(), 11);
    }

    #[test]
    fn rejects_bad_headers() {
        assert!(parse_system_file::<f64>("").is_err());
        assert!(parse_system_file::<f64>("[hamiltonian] n=0\nH = 1\n").is_err());
        assert!(parse_system_file::<f64>("[what] n=1\nH = 1\n").is_err());
        assert!(parse_system_file::<f64>("[port] n=2\nH = x1\nJ 2 1 = 1\n").is_err());
    }
}
