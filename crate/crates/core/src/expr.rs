//! Scalar expression trees for numeric systems.
//!
//! Expressions are built over a fixed ordered variable list and are closed
//! under symbolic differentiation and substitution. Construction applies
//! light simplification (constant folding, additive/multiplicative
//! identities), which keeps derivative trees small. Evaluation walks the
//! tree in a fixed order, so identical inputs give bit-identical results.
//!
//! Grammar accepted by [`Expression::parse`]: identifiers from the variable
//! list; decimal/integer literals; `+ - * / ^` with `^` taking a literal
//! integer exponent and binding tightest; unary minus; parentheses;
//! `sin(..)` and `cos(..)`.

use std::fmt;
use std::sync::Arc;

use crate::scalar::Real;

/// Ordered variable list shared by a family of expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Self> {
        Arc::new(Self { names: names.into_iter().map(Into::into).collect() })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Debug)]
enum Node<T> {
    Const(T),
    Var(usize),
    Add(R<T>, R<T>),
    Sub(R<T>, R<T>),
    Mul(R<T>, R<T>),
    Div(R<T>, R<T>),
    Pow(R<T>, i32),
    Neg(R<T>),
    Sin(R<T>),
    Cos(R<T>),
}

type R<T> = Arc<Node<T>>;

/// An expression over a shared variable set.
#[derive(Debug, Clone)]
pub struct Expression<T> {
    vars: Arc<VarSet>,
    node: R<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprError {
    UnknownVariable(String),
    Parse { pos: usize, msg: String },
    NonIntegerExponent { pos: usize },
    VarSetMismatch,
    BadSubstitution { expected: usize, got: usize },
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::UnknownVariable(n) => write!(f, "unknown variable `{n}`"),
            ExprError::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            ExprError::NonIntegerExponent { pos } => {
                write!(f, "exponent at byte {pos} must be an integer literal")
            }
            ExprError::VarSetMismatch => write!(f, "expressions use different variable sets"),
            ExprError::BadSubstitution { expected, got } => {
                write!(f, "substitution needs {expected} replacements, got {got}")
            }
        }
    }
}

impl std::error::Error for ExprError {}

// smart constructors with local simplification
fn node_const<T: Real>(v: T) -> R<T> {
    Arc::new(Node::Const(v))
}

fn as_const<T: Real>(n: &R<T>) -> Option<T> {
    match **n {
        Node::Const(v) => Some(v),
        _ => None,
    }
}

fn node_add<T: Real>(a: R<T>, b: R<T>) -> R<T> {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => node_const(x + y),
        (Some(x), _) if x == T::zero() => b,
        (_, Some(y)) if y == T::zero() => a,
        _ => Arc::new(Node::Add(a, b)),
    }
}

fn node_sub<T: Real>(a: R<T>, b: R<T>) -> R<T> {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => node_const(x - y),
        (_, Some(y)) if y == T::zero() => a,
        (Some(x), _) if x == T::zero() => node_neg(b),
        _ => Arc::new(Node::Sub(a, b)),
    }
}

fn node_mul<T: Real>(a: R<T>, b: R<T>) -> R<T> {
    // normalize constants to the left so nested constant products fold
    let (a, b) = if as_const(&b).is_some() && as_const(&a).is_none() { (b, a) } else { (a, b) };
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => node_const(x * y),
        (Some(x), _) if x == T::zero() => node_const(T::zero()),
        (Some(x), _) if x == T::one() => b,
        (Some(x), _) => {
            if let Node::Mul(ref c, ref rest) = *b {
                if let Some(y) = as_const(c) {
                    return node_mul(node_const(x * y), rest.clone());
                }
            }
            Arc::new(Node::Mul(a, b))
        }
        _ => Arc::new(Node::Mul(a, b)),
    }
}

fn node_div<T: Real>(a: R<T>, b: R<T>) -> R<T> {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) if y != T::zero() => node_const(x / y),
        (Some(x), _) if x == T::zero() => node_const(T::zero()),
        (_, Some(y)) if y == T::one() => a,
        _ => Arc::new(Node::Div(a, b)),
    }
}

fn node_pow<T: Real>(a: R<T>, k: i32) -> R<T> {
    match k {
        0 => node_const(T::one()),
        1 => a,
        _ => match as_const(&a) {
            Some(x) => node_const(x.powi(k)),
            None => Arc::new(Node::Pow(a, k)),
        },
    }
}

fn node_neg<T: Real>(a: R<T>) -> R<T> {
    match *a {
        Node::Const(v) => node_const(-v),
        Node::Neg(ref inner) => inner.clone(),
        _ => Arc::new(Node::Neg(a)),
    }
}

fn node_sin<T: Real>(a: R<T>) -> R<T> {
    match as_const(&a) {
        Some(x) => node_const(x.sin()),
        None => Arc::new(Node::Sin(a)),
    }
}

fn node_cos<T: Real>(a: R<T>) -> R<T> {
    match as_const(&a) {
        Some(x) => node_const(x.cos()),
        None => Arc::new(Node::Cos(a)),
    }
}

impl<T: Real> Expression<T> {
    pub fn constant(vars: &Arc<VarSet>, v: T) -> Self {
        Self { vars: vars.clone(), node: node_const(v) }
    }

    pub fn var(vars: &Arc<VarSet>, idx: usize) -> Self {
        assert!(idx < vars.len(), "variable index out of range");
        Self { vars: vars.clone(), node: Arc::new(Node::Var(idx)) }
    }

    pub fn var_named(vars: &Arc<VarSet>, name: &str) -> Result<Self, ExprError> {
        let idx = vars.index_of(name).ok_or_else(|| ExprError::UnknownVariable(name.into()))?;
        Ok(Self::var(vars, idx))
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    fn wrap(&self, node: R<T>) -> Self {
        Self { vars: self.vars.clone(), node }
    }

    fn check(&self, other: &Self) -> Result<(), ExprError> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(ExprError::VarSetMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other).expect("variable set mismatch");
        self.wrap(node_add(self.node.clone(), other.node.clone()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other).expect("variable set mismatch");
        self.wrap(node_sub(self.node.clone(), other.node.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other).expect("variable set mismatch");
        self.wrap(node_mul(self.node.clone(), other.node.clone()))
    }

    pub fn div(&self, other: &Self) -> Self {
        self.check(other).expect("variable set mismatch");
        self.wrap(node_div(self.node.clone(), other.node.clone()))
    }

    pub fn powi(&self, k: i32) -> Self {
        self.wrap(node_pow(self.node.clone(), k))
    }

    pub fn neg(&self) -> Self {
        self.wrap(node_neg(self.node.clone()))
    }

    pub fn sin(&self) -> Self {
        self.wrap(node_sin(self.node.clone()))
    }

    pub fn cos(&self) -> Self {
        self.wrap(node_cos(self.node.clone()))
    }

    pub fn scale(&self, k: T) -> Self {
        self.wrap(node_mul(node_const(k), self.node.clone()))
    }

    pub fn is_const_zero(&self) -> bool {
        matches!(*self.node, Node::Const(v) if v == T::zero())
    }

    pub fn const_value(&self) -> Option<T> {
        as_const(&self.node)
    }

    /// Evaluate at `vals` (one value per variable, in variable-set order).
    pub fn eval(&self, vals: &[T]) -> T {
        debug_assert_eq!(vals.len(), self.vars.len());
        fn go<T: Real>(n: &Node<T>, vals: &[T]) -> T {
            match n {
                Node::Const(v) => *v,
                Node::Var(i) => vals[*i],
                Node::Add(a, b) => go(a, vals) + go(b, vals),
                Node::Sub(a, b) => go(a, vals) - go(b, vals),
                Node::Mul(a, b) => go(a, vals) * go(b, vals),
                Node::Div(a, b) => go(a, vals) / go(b, vals),
                Node::Pow(a, k) => go(a, vals).powi(*k),
                Node::Neg(a) => -go(a, vals),
                Node::Sin(a) => go(a, vals).sin(),
                Node::Cos(a) => go(a, vals).cos(),
            }
        }
        go(&self.node, vals)
    }

    /// Symbolic partial derivative with respect to variable `idx`.
    pub fn diff(&self, idx: usize) -> Self {
        fn go<T: Real>(n: &R<T>, idx: usize) -> R<T> {
            match &**n {
                Node::Const(_) => node_const(T::zero()),
                Node::Var(i) => node_const(if *i == idx { T::one() } else { T::zero() }),
                Node::Add(a, b) => node_add(go(a, idx), go(b, idx)),
                Node::Sub(a, b) => node_sub(go(a, idx), go(b, idx)),
                Node::Mul(a, b) => node_add(
                    node_mul(go(a, idx), b.clone()),
                    node_mul(a.clone(), go(b, idx)),
                ),
                Node::Div(a, b) => {
                    // (a' b - a b') / b^2
                    let num = node_sub(
                        node_mul(go(a, idx), b.clone()),
                        node_mul(a.clone(), go(b, idx)),
                    );
                    node_div(num, node_pow(b.clone(), 2))
                }
                Node::Pow(a, k) => {
                    let factor = node_mul(node_const(T::of(*k as f64)), node_pow(a.clone(), k - 1));
                    node_mul(factor, go(a, idx))
                }
                Node::Neg(a) => node_neg(go(a, idx)),
                Node::Sin(a) => node_mul(node_cos(a.clone()), go(a, idx)),
                Node::Cos(a) => node_neg(node_mul(node_sin(a.clone()), go(a, idx))),
            }
        }
        self.wrap(go(&self.node, idx))
    }

    /// Replace every variable with the corresponding expression over a new
    /// variable set.
    pub fn substitute(
        &self,
        target: &Arc<VarSet>,
        replacements: &[Expression<T>],
    ) -> Result<Self, ExprError> {
        if replacements.len() != self.vars.len() {
            return Err(ExprError::BadSubstitution {
                expected: self.vars.len(),
                got: replacements.len(),
            });
        }
        for r in replacements {
            if !(Arc::ptr_eq(&r.vars, target) || *r.vars == **target) {
                return Err(ExprError::VarSetMismatch);
            }
        }
        fn go<T: Real>(n: &R<T>, reps: &[Expression<T>]) -> R<T> {
            match &**n {
                Node::Const(v) => node_const(*v),
                Node::Var(i) => reps[*i].node.clone(),
                Node::Add(a, b) => node_add(go(a, reps), go(b, reps)),
                Node::Sub(a, b) => node_sub(go(a, reps), go(b, reps)),
                Node::Mul(a, b) => node_mul(go(a, reps), go(b, reps)),
                Node::Div(a, b) => node_div(go(a, reps), go(b, reps)),
                Node::Pow(a, k) => node_pow(go(a, reps), *k),
                Node::Neg(a) => node_neg(go(a, reps)),
                Node::Sin(a) => node_sin(go(a, reps)),
                Node::Cos(a) => node_cos(go(a, reps)),
            }
        }
        Ok(Expression { vars: target.clone(), node: go(&self.node, replacements) })
    }

    /// Structural dependence on a variable (after simplification).
    pub fn depends_on(&self, idx: usize) -> bool {
        fn go<T>(n: &Node<T>, idx: usize) -> bool {
            match n {
                Node::Const(_) => false,
                Node::Var(i) => *i == idx,
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    go(a, idx) || go(b, idx)
                }
                Node::Pow(a, _) | Node::Neg(a) | Node::Sin(a) | Node::Cos(a) => go(a, idx),
            }
        }
        go(&self.node, idx)
    }

    /// Parse an expression over the given variables.
    pub fn parse(vars: &Arc<VarSet>, text: &str) -> Result<Self, ExprError> {
        parse_expression(vars, text)
    }
}

/// Symbolic gradient of `e` with respect to the listed variables.
pub fn gradient<T: Real>(e: &Expression<T>, vars: &[usize]) -> Vec<Expression<T>> {
    vars.iter().map(|&i| e.diff(i)).collect()
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Int(i64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let src = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < src.len() {
        let c = src[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                let mut end = pos;
                let mut is_int = true;
                while end < src.len() && src[end].is_ascii_digit() {
                    end += 1;
                }
                if end < src.len() && src[end] == b'.' {
                    is_int = false;
                    end += 1;
                    while end < src.len() && src[end].is_ascii_digit() {
                        end += 1;
                    }
                }
                if end < src.len() && (src[end] == b'e' || src[end] == b'E') {
                    let mut probe = end + 1;
                    if probe < src.len() && (src[probe] == b'+' || src[probe] == b'-') {
                        probe += 1;
                    }
                    if probe < src.len() && src[probe].is_ascii_digit() {
                        is_int = false;
                        end = probe;
                        while end < src.len() && src[end].is_ascii_digit() {
                            end += 1;
                        }
                    }
                }
                let s = std::str::from_utf8(&src[pos..end]).unwrap();
                pos = end;
                let tok = if is_int {
                    match s.parse::<i64>() {
                        Ok(v) => Tok::Int(v),
                        Err(_) => Tok::Num(s.parse::<f64>().map_err(|_| ExprError::Parse {
                            pos: start,
                            msg: format!("bad numeric literal `{s}`"),
                        })?),
                    }
                } else {
                    Tok::Num(s.parse::<f64>().map_err(|_| ExprError::Parse {
                        pos: start,
                        msg: format!("bad numeric literal `{s}`"),
                    })?)
                };
                out.push((start, tok));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = pos;
                while end < src.len() && (src[end].is_ascii_alphanumeric() || src[end] == b'_') {
                    end += 1;
                }
                let s = std::str::from_utf8(&src[pos..end]).unwrap().to_string();
                pos = end;
                out.push((start, Tok::Ident(s)));
                continue;
            }
            other => {
                return Err(ExprError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        out.push((start, tok));
        pos += 1;
    }
    Ok(out)
}

struct P<'a, T> {
    vars: &'a Arc<VarSet>,
    toks: Vec<(usize, Tok)>,
    cursor: usize,
    end: usize,
    _m: std::marker::PhantomData<T>,
}

impl<'a, T: Real> P<'a, T> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cursor).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.cursor).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.cursor).map(|(_, t)| t.clone());
        self.cursor += 1;
        t
    }

    fn expr(&mut self) -> Result<R<T>, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = node_add(acc, self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = node_sub(acc, self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<R<T>, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = node_mul(acc, self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    acc = node_div(acc, self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<R<T>, ExprError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(node_neg(self.factor()?))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<R<T>, ExprError> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(v)) => {
                let k = if negative { -v } else { v };
                let k: i32 = k.try_into().map_err(|_| ExprError::NonIntegerExponent { pos })?;
                Ok(node_pow(base, k))
            }
            _ => Err(ExprError::NonIntegerExponent { pos }),
        }
    }

    fn primary(&mut self) -> Result<R<T>, ExprError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(node_const(T::of(v as f64))),
            Some(Tok::Num(v)) => Ok(node_const(T::of(v))),
            Some(Tok::Ident(name)) => {
                let is_call =
                    self.peek() == Some(&Tok::LParen) && (name == "sin" || name == "cos");
                if is_call {
                    self.bump();
                    let arg = self.expr()?;
                    match self.bump() {
                        Some(Tok::RParen) => {}
                        _ => {
                            return Err(ExprError::Parse {
                                pos: self.pos(),
                                msg: "expected `)`".into(),
                            })
                        }
                    }
                    Ok(if name == "sin" { node_sin(arg) } else { node_cos(arg) })
                } else {
                    let idx =
                        self.vars.index_of(&name).ok_or(ExprError::UnknownVariable(name))?;
                    Ok(Arc::new(Node::Var(idx)))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ExprError::Parse { pos: self.pos(), msg: "expected `)`".into() }),
                }
            }
            _ => Err(ExprError::Parse { pos, msg: "expected value".into() }),
        }
    }
}

fn parse_expression<T: Real>(vars: &Arc<VarSet>, text: &str) -> Result<Expression<T>, ExprError> {
    let toks = lex(text)?;
    let mut p = P::<T> { vars, toks, cursor: 0, end: text.len(), _m: std::marker::PhantomData };
    let node = p.expr()?;
    if p.cursor != p.toks.len() {
        return Err(ExprError::Parse {
            pos: p.pos(),
            msg: "trailing input after expression".into(),
        });
    }
    Ok(Expression { vars: vars.clone(), node })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::SplitMix64;

    fn vars() -> Arc<VarSet> {
        VarSet::new(["q", "p"])
    }

    fn e(text: &str) -> Expression<f64> {
        Expression::parse(&vars(), text).unwrap()
    }

    #[test]
    fn eval_and_precedence() {
        assert_eq!(e("q + p*2").eval(&[1.0, 3.0]), 7.0);
        assert_eq!(e("(q + p)*2").eval(&[1.0, 3.0]), 8.0);
        assert_eq!(e("q^2/2").eval(&[3.0, 0.0]), 4.5);
        assert_eq!(e("-q^2").eval(&[2.0, 0.0]), -4.0);
        assert_eq!(e("3/4").eval(&[0.0, 0.0]), 0.75);
        assert_eq!(e("2*q^-1").eval(&[4.0, 0.0]), 0.5);
        assert_eq!(e("sin(q)").eval(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn derivative_examples() {
        // d/dq q^2 at q=3 is 6
        assert_eq!(e("q^2").diff(0).eval(&[3.0, 0.0]), 6.0);
        // d/dq sin q at 0 is 1
        assert_eq!(e("sin(q)").diff(0).eval(&[0.0, 0.0]), 1.0);
        assert_eq!(e("q*p").diff(1).eval(&[5.0, 2.0]), 5.0);
        assert_eq!(e("q/p").diff(0).eval(&[1.0, 2.0]), 0.5);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let tests = [
            "q^3 - 2*q*p + sin(q)*cos(p)",
            "q/(1 + p^2)",
            "sin(q*p) + q^2*p^3",
            "cos(q)^2 + sin(p)^2",
        ];
        let mut rng = SplitMix64::new(9);
        for text in tests {
            let f = e(text);
            for var in 0..2 {
                let g = f.diff(var);
                for _ in 0..25 {
                    let q = rng.int_in(-20, 20) as f64 / 10.0;
                    let p = rng.int_in(-20, 20) as f64 / 10.0;
                    let h = 1e-5;
                    let mut lo = [q, p];
                    let mut hi = [q, p];
                    lo[var] -= h;
                    hi[var] += h;
                    let fd = (f.eval(&hi) - f.eval(&lo)) / (2.0 * h);
                    let sym = g.eval(&[q, p]);
                    let scale = 1.0_f64.max(sym.abs());
                    assert!(
                        (fd - sym).abs() <= 1e-6 * scale,
                        "{text} d/d{var} at ({q},{p}): fd={fd} sym={sym}"
                    );
                }
            }
        }
    }

    #[test]
    fn substitution() {
        let target = VarSet::new(["a"]);
        let a = Expression::<f64>::var(&target, 0);
        // q -> a, p -> a^2 in q + p gives a + a^2
        let f = e("q + p");
        let sub = f.substitute(&target, &[a.clone(), a.powi(2)]).unwrap();
        assert_eq!(sub.eval(&[3.0]), 12.0);
    }

    #[test]
    fn dependence_tracking() {
        assert!(e("q^2 + 1").depends_on(0));
        assert!(!e("q^2 + 1").depends_on(1));
        // 0 * p simplifies away
        assert!(!e("0*p + q").depends_on(1));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Expression::<f64>::parse(&vars(), "z + 1"),
            Err(ExprError::UnknownVariable(_))
        ));
        assert!(matches!(
            Expression::<f64>::parse(&vars(), "q^p"),
            Err(ExprError::NonIntegerExponent { .. })
        ));
        assert!(Expression::<f64>::parse(&vars(), "q +").is_err());
        assert!(Expression::<f64>::parse(&vars(), "sin q").is_err());
    }
}
