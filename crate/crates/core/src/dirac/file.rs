//! Dirac structure specification files.
//!
//! Sectioned text format:
//!
//! ```text
//! [base] 3
//! trigpair 3 c s          # base coordinate 3 is an angle entering via c, s
//! [distribution]
//! 1: s*dx1 - c*dx2
//! ```
//!
//! `[base] n` declares an n-dimensional base with coordinates `x1..xn` and
//! differentials `dx1..dxn`. A `trigpair i c s` line turns coordinate `i`
//! into an angle: functions of it are written in the named cosine/sine pair
//! (subject to `c^2 + s^2 = 1`) and its differential stays `dx<i>`. Exactly
//! one structure section follows:
//!
//! * `[form]` with lines `i j = <expr>` for the 2-form `sum expr dx^i dx^j`;
//! * `[bivector]` with lines `i j = <expr>` for the upper triangle of `pi`
//!   (plain polynomial base only);
//! * `[distribution]` with lines `a: <one-form expr>`.
//!
//! Blank lines and `#` comments are ignored.

use super::error::DiracError;
use super::form::DifferentialForm;
use super::space::{CoordSpec, FormSpace};
use super::structure::DiracSpec;
use crate::graded::{parse_polynomial, BivectorSpec};
use crate::scalar::Coefficient;

/// A parsed structure specification.
#[derive(Debug, Clone)]
pub struct ParsedDirac<C> {
    pub spec: DiracSpec<C>,
}

fn err(line: usize, msg: impl Into<String>) -> DiracError {
    DiracError::Parse { line, msg: msg.into() }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

pub fn parse_dirac_file<C: Coefficient>(text: &str) -> Result<ParsedDirac<C>, DiracError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line { no: i + 1, text: l.split('#').next().unwrap_or("").trim() })
        .filter(|l| !l.text.is_empty())
        .collect();
    let mut it = lines.into_iter().peekable();

    // [base] n
    let base_line = it.next().ok_or_else(|| err(0, "empty specification"))?;
    let dim: usize = base_line
        .text
        .strip_prefix("[base]")
        .map(str::trim)
        .and_then(|rest| rest.parse().ok())
        .ok_or_else(|| err(base_line.no, "expected `[base] n`"))?;
    if dim == 0 {
        return Err(err(base_line.no, "base dimension must be positive"));
    }

    // trigpair declarations before the structure section
    let mut angles: Vec<(usize, String, String)> = Vec::new();
    while let Some(l) = it.peek() {
        let Some(rest) = l.text.strip_prefix("trigpair") else { break };
        let no = l.no;
        let parts: Vec<&str> = rest.split_whitespace().collect();
        let [idx, cos, sin] = parts.as_slice() else {
            return Err(err(no, "expected `trigpair <coordinate> <cos> <sin>`"));
        };
        let i: usize = idx
            .parse()
            .ok()
            .filter(|&i| i >= 1 && i <= dim)
            .ok_or_else(|| err(no, format!("coordinate index `{idx}` out of range 1..={dim}")))?;
        if angles.iter().any(|(j, _, _)| *j == i) {
            return Err(err(no, format!("coordinate {i} already declared as an angle")));
        }
        angles.push((i, cos.to_string(), sin.to_string()));
        it.next();
    }

    let specs: Vec<CoordSpec> = (1..=dim)
        .map(|i| match angles.iter().find(|(j, _, _)| *j == i) {
            Some((_, c, s)) => CoordSpec::Angle {
                name: format!("x{i}"),
                cos: c.clone(),
                sin: s.clone(),
            },
            None => CoordSpec::Plain(format!("x{i}")),
        })
        .collect();
    let space = FormSpace::build(&specs)?;

    // structure section
    let section = it.next().ok_or_else(|| err(0, "missing structure section"))?;
    match section.text {
        "[form]" => {
            let mut omega = DifferentialForm::zero(&space);
            for l in it {
                let (i, j, expr) = parse_indexed_entry(l.no, l.text, dim)?;
                let coeff = parse_polynomial::<C>(space.context(), expr)
                    .map_err(|e| err(l.no, e.to_string()))?;
                if !space.is_base_function(&coeff) {
                    return Err(err(l.no, "form coefficient must be a base function"));
                }
                let term = DifferentialForm::from_poly(
                    &space,
                    coeff
                        .checked_mul(&space.differential::<C>(i - 1))
                        .map_err(DiracError::from)?
                        .checked_mul(&space.differential::<C>(j - 1))
                        .map_err(DiracError::from)?,
                )?;
                omega = omega.add(&term)?;
            }
            let omega = DifferentialForm::with_degree(&space, omega.poly().clone(), 2)?;
            Ok(ParsedDirac { spec: DiracSpec::GraphOfForm(omega) })
        }
        "[bivector]" => {
            if !angles.is_empty() {
                return Err(err(
                    section.no,
                    "bivector specifications require a plain polynomial base",
                ));
            }
            let phase = crate::graded::PhaseSpace::new(dim);
            let mut entries = Vec::new();
            for l in it {
                let (i, j, expr) = parse_indexed_entry(l.no, l.text, dim)?;
                let poly = parse_polynomial::<C>(phase.context(), expr)
                    .map_err(|e| err(l.no, e.to_string()))?;
                entries.push(((i - 1, j - 1), poly));
            }
            let pi = BivectorSpec::new(dim, entries)?;
            Ok(ParsedDirac { spec: DiracSpec::GraphOfBivector(pi) })
        }
        "[distribution]" => {
            let mut annihilators = Vec::new();
            for l in it {
                let (_, expr) = l
                    .text
                    .split_once(':')
                    .ok_or_else(|| err(l.no, "expected `a: <one-form expression>`"))?;
                let poly = parse_polynomial::<C>(space.context(), expr.trim())
                    .map_err(|e| err(l.no, e.to_string()))?;
                annihilators.push(DifferentialForm::with_degree(&space, poly, 1)?);
            }
            if annihilators.is_empty() {
                return Err(err(section.no, "distribution needs at least one one-form"));
            }
            Ok(ParsedDirac { spec: DiracSpec::Distribution { space, annihilators } })
        }
        other => Err(err(section.no, format!("unknown section `{other}`"))),
    }
}

fn parse_indexed_entry(
    no: usize,
    text: &str,
    dim: usize,
) -> Result<(usize, usize, &str), DiracError> {
    let (head, expr) = text
        .split_once('=')
        .ok_or_else(|| err(no, "expected `i j = <expression>`"))?;
    let idx: Vec<&str> = head.split_whitespace().collect();
    let [i, j] = idx.as_slice() else {
        return Err(err(no, "expected two indices before `=`"));
    };
    let parse_idx = |s: &str| -> Result<usize, DiracError> {
        s.parse()
            .ok()
            .filter(|&v| v >= 1 && v <= dim)
            .ok_or_else(|| err(no, format!("index `{s}` out of range 1..={dim}")))
    };
    let (i, j) = (parse_idx(i)?, parse_idx(j)?);
    if i >= j {
        return Err(err(no, "indices must satisfy i < j"));
    }
    Ok((i, j, expr.trim()))
}
