use std::io::{self, Write};

use super::error::MechError;
use super::system::{PortSystem, State};
use crate::scalar::Real;

/// Which system variant produced a record; fixes the CSV column layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    Hamiltonian,
    Lagrangian,
    Port,
}

/// One recorded state with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<T> {
    pub state: State<T>,
    pub energy: T,
    pub constraint_residual: Option<T>,
    pub power_residual: Option<T>,
}

/// A time-ordered series of samples with energy, constraint, and power
/// diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    kind: RecordKind,
    n: usize,
    samples: Vec<Sample<T>>,
}

impl<T: Real> TrajectoryRecord<T> {
    pub fn new(kind: RecordKind, n: usize) -> Self {
        Self { kind, n, samples: Vec::new() }
    }

    pub fn kind(&self) -> RecordKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[Sample<T>] {
        &self.samples
    }

    pub fn push(&mut self, sample: Sample<T>) {
        debug_assert!(
            self.samples.last().map(|s| s.state.t < sample.state.t).unwrap_or(true),
            "sample times must be strictly increasing"
        );
        self.samples.push(sample);
    }

    pub fn last_state(&self) -> Option<&State<T>> {
        self.samples.last().map(|s| &s.state)
    }

    pub fn max_energy_deviation(&self) -> T {
        let Some(first) = self.samples.first() else { return T::zero() };
        self.samples
            .iter()
            .fold(T::zero(), |acc, s| acc.max((s.energy - first.energy).abs()))
    }

    pub fn max_constraint_residual(&self) -> T {
        self.samples
            .iter()
            .filter_map(|s| s.constraint_residual)
            .fold(T::zero(), |acc, r| acc.max(r.abs()))
    }

    fn column_names(&self) -> Vec<String> {
        let mut cols = vec!["t".to_string()];
        match self.kind {
            RecordKind::Hamiltonian => {
                cols.extend((1..=self.n).map(|i| format!("q{i}")));
                cols.extend((1..=self.n).map(|i| format!("p{i}")));
            }
            RecordKind::Lagrangian => {
                cols.extend((1..=self.n).map(|i| format!("q{i}")));
                cols.extend((1..=self.n).map(|i| format!("v{i}")));
            }
            RecordKind::Port => {
                cols.extend((1..=self.n).map(|i| format!("x{i}")));
            }
        }
        cols.push("energy".into());
        cols.push("constraint_residual".into());
        cols.push("power_residual".into());
        cols
    }

    /// Emit as CSV with 17-significant-digit scientific notation, a trailing
    /// newline, and empty cells for non-applicable diagnostics.
    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{}", self.column_names().join(","))?;
        for s in &self.samples {
            let mut cells: Vec<String> = Vec::new();
            cells.push(format_sig17(s.state.t));
            for &v in &s.state.q {
                cells.push(format_sig17(v));
            }
            if self.kind != RecordKind::Port {
                for &v in &s.state.pv {
                    cells.push(format_sig17(v));
                }
            }
            cells.push(format_sig17(s.energy));
            cells.push(s.constraint_residual.map(format_sig17).unwrap_or_default());
            cells.push(s.power_residual.map(format_sig17).unwrap_or_default());
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("csv is ascii")
    }

    /// Parse a CSV produced by [`write_csv`](Self::write_csv). Multipliers
    /// are not part of the format, so `lambda` comes back empty.
    pub fn from_csv(text: &str) -> Result<Self, MechError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or(MechError::Parse { line: 1, msg: "empty csv".into() })?;
        let cols: Vec<&str> = header.split(',').collect();
        let (kind, n) = infer_kind(&cols).ok_or(MechError::Parse {
            line: 1,
            msg: format!("unrecognized header `{header}`"),
        })?;
        let mut rec = Self::new(kind, n);
        let state_w = if kind == RecordKind::Port { n } else { 2 * n };
        for (lineno, line) in lines {
            if line.is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != cols.len() {
                return Err(MechError::Parse {
                    line: lineno + 1,
                    msg: format!("expected {} cells, got {}", cols.len(), cells.len()),
                });
            }
            let num = |s: &str, lineno: usize| -> Result<T, MechError> {
                s.parse::<f64>().map(T::of).map_err(|_| MechError::Parse {
                    line: lineno + 1,
                    msg: format!("bad number `{s}`"),
                })
            };
            let opt = |s: &str, lineno: usize| -> Result<Option<T>, MechError> {
                if s.is_empty() { Ok(None) } else { num(s, lineno).map(Some) }
            };
            let t = num(cells[0], lineno)?;
            let q: Result<Vec<T>, _> = cells[1..=n].iter().map(|c| num(c, lineno)).collect();
            let pv: Result<Vec<T>, _> = if kind == RecordKind::Port {
                Ok(Vec::new())
            } else {
                cells[n + 1..=2 * n].iter().map(|c| num(c, lineno)).collect()
            };
            let energy = num(cells[state_w + 1], lineno)?;
            let constraint_residual = opt(cells[state_w + 2], lineno)?;
            let power_residual = opt(cells[state_w + 3], lineno)?;
            rec.samples.push(Sample {
                state: State { t, q: q?, pv: pv?, lambda: Vec::new() },
                energy,
                constraint_residual,
                power_residual,
            });
        }
        Ok(rec)
    }
}

fn infer_kind(cols: &[&str]) -> Option<(RecordKind, usize)> {
    if cols.first() != Some(&"t") || cols.len() < 4 {
        return None;
    }
    let body = &cols[1..cols.len() - 3];
    if cols[cols.len() - 3..] != ["energy", "constraint_residual", "power_residual"] {
        return None;
    }
    if body.is_empty() {
        return None;
    }
    if body[0].starts_with('x') {
        return Some((RecordKind::Port, body.len()));
    }
    if !body.len().is_multiple_of(2) {
        return None;
    }
    let n = body.len() / 2;
    if body[n].starts_with('v') {
        Some((RecordKind::Lagrangian, n))
    } else if body[n].starts_with('p') {
        Some((RecordKind::Hamiltonian, n))
    } else {
        None
    }
}

/// 17 significant decimal digits: enough to round-trip any f64.
fn format_sig17<T: Real>(v: T) -> String {
    format!("{:.16e}", v)
}

/// Per-interval power-balance defects of a recorded port-Hamiltonian
/// trajectory: `H_k - H_{k-1} - dt * (-gradH' R gradH + gradH' g f)` with
/// the rate evaluated by midpoint quadrature. One entry per interval.
pub fn power_balance_residual<T: Real>(
    sys: &PortSystem<T>,
    rec: &TrajectoryRecord<T>,
) -> Vec<T> {
    let mut out = Vec::new();
    for pair in rec.samples().windows(2) {
        out.push(super::step::power_defect(sys, &pair[0].state, &pair[1].state));
    }
    out
}
