use std::fmt;
use std::sync::Arc;

use super::error::GradedError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
    pub name: String,
    pub degree: u32,
}

/// A cosine/sine pair of degree-0 coordinates subject to `c^2 + s^2 = 1`.
///
/// Polynomials in a context carrying such a pair are normalized into the
/// quotient by that relation: powers `s^k` with `k >= 2` are rewritten via
/// `s^2 = 1 - c^2`, leaving the free module basis `{c^k, c^k s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrigPair {
    pub cos: usize,
    pub sin: usize,
}

/// An ordered list of graded coordinates. Immutable after creation; every
/// polynomial holds a shared reference to exactly one context.
#[derive(Debug, PartialEq, Eq)]
pub struct GradedContext {
    coords: Vec<Coordinate>,
    trig: Vec<TrigPair>,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GradedContext {
    /// Context from `(name, degree)` pairs. Names must be unique identifiers.
    pub fn new<S: Into<String>>(
        coords: impl IntoIterator<Item = (S, u32)>,
    ) -> Result<Arc<Self>, GradedError> {
        Self::with_trig_pairs(coords, &[])
    }

    /// Context with cosine/sine pairs named by coordinate name.
    pub fn with_trig_pairs<S: Into<String>>(
        coords: impl IntoIterator<Item = (S, u32)>,
        pairs: &[(&str, &str)],
    ) -> Result<Arc<Self>, GradedError> {
        let coords: Vec<Coordinate> = coords
            .into_iter()
            .map(|(name, degree)| Coordinate { name: name.into(), degree })
            .collect();
        for (i, c) in coords.iter().enumerate() {
            if !valid_identifier(&c.name) {
                return Err(GradedError::BadCoordinateName(c.name.clone()));
            }
            if coords[..i].iter().any(|d| d.name == c.name) {
                return Err(GradedError::DuplicateCoordinate(c.name.clone()));
            }
        }
        let mut trig = Vec::new();
        for &(c, s) in pairs {
            let find = |n: &str| coords.iter().position(|x| x.name == n);
            let (ci, si) = match (find(c), find(s)) {
                (Some(ci), Some(si)) => (ci, si),
                _ => return Err(GradedError::BadTrigPair(format!("{c}/{s}"))),
            };
            if ci == si || coords[ci].degree != 0 || coords[si].degree != 0 {
                return Err(GradedError::BadTrigPair(format!("{c}/{s}")));
            }
            if trig.iter().any(|p: &TrigPair| {
                p.cos == ci || p.sin == ci || p.cos == si || p.sin == si
            }) {
                return Err(GradedError::BadTrigPair(format!("{c}/{s}")));
            }
            trig.push(TrigPair { cos: ci, sin: si });
        }
        Ok(Arc::new(Self { coords, trig }))
    }

    /// Parse a context file: one `name degree` line per coordinate.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Arc<Self>, GradedError> {
        let mut coords = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (name, deg) = match (it.next(), it.next(), it.next()) {
                (Some(n), Some(d), None) => (n, d),
                _ => {
                    return Err(GradedError::Parse {
                        pos: lineno + 1,
                        msg: format!("expected `name degree`, got `{line}`"),
                    })
                }
            };
            let degree: u32 = deg.parse().map_err(|_| GradedError::Parse {
                pos: lineno + 1,
                msg: format!("degree `{deg}` must be a non-negative integer"),
            })?;
            coords.push((name.to_string(), degree));
        }
        Self::new(coords)
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.coords[idx].name
    }

    pub fn degree(&self, idx: usize) -> u32 {
        self.coords[idx].degree
    }

    /// Degree parity decides commutation: odd coordinates anticommute.
    pub fn is_odd(&self, idx: usize) -> bool {
        self.coords[idx].degree % 2 == 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }

    pub fn coords(&self) -> impl Iterator<Item = (&str, u32)> {
        self.coords.iter().map(|c| (c.name.as_str(), c.degree))
    }

    pub fn trig_pairs(&self) -> &[TrigPair] {
        &self.trig
    }

    /// If `idx` is the sine of a trig pair, the index of its cosine.
    pub fn cosine_partner(&self, idx: usize) -> Option<usize> {
        self.trig.iter().find(|p| p.sin == idx).map(|p| p.cos)
    }

    /// Total degree of an exponent vector.
    pub fn monomial_degree(&self, mono: &[u32]) -> i64 {
        mono.iter()
            .enumerate()
            .map(|(i, &e)| e as i64 * self.degree(i) as i64)
            .sum()
    }
}

/// Contexts compare by content; the pointer check is just a fast path.
pub fn same_context(a: &Arc<GradedContext>, b: &Arc<GradedContext>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl fmt::Display for GradedContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.coords {
            writeln!(f, "{} {}", c.name, c.degree)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert!(matches!(
            GradedContext::new([("x", 0), ("x", 1)]),
            Err(GradedError::DuplicateCoordinate(_))
        ));
        assert!(matches!(
            GradedContext::new([("1x", 0)]),
            Err(GradedError::BadCoordinateName(_))
        ));
    }

    #[test]
    fn parses_context_file() {
        let ctx = GradedContext::parse("x 0\nth 1 # differential\n\n").unwrap();
        assert_eq!(ctx.len(), 2);
        assert_eq!(ctx.degree(1), 1);
        assert!(ctx.is_odd(1));
    }

    #[test]
    fn rejects_negative_degree_in_file() {
        assert!(GradedContext::parse("x -1").is_err());
    }

    #[test]
    fn trig_pair_must_be_degree_zero() {
        assert!(GradedContext::with_trig_pairs([("c", 0), ("s", 1)], &[("c", "s")]).is_err());
        let ctx = GradedContext::with_trig_pairs([("c", 0), ("s", 0)], &[("c", "s")]).unwrap();
        assert_eq!(ctx.cosine_partner(1), Some(0));
        assert_eq!(ctx.cosine_partner(0), None);
    }
}
