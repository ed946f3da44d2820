//! Expression parser for graded polynomials.
//!
//! Grammar: identifiers `[a-zA-Z][a-zA-Z0-9_]*`; integer and rational
//! literals (`3`, `3/4`); operators `+ - * ^` with `^` binding tightest,
//! then `*`, then `+`/`-`; parentheses; whitespace insignificant. Unary
//! minus is accepted at the start of any factor. Printing a polynomial and
//! re-parsing it reproduces the same normal form.

use std::sync::Arc;

use super::context::GradedContext;
use super::error::GradedError;
use super::poly::GradedPolynomial;
use crate::scalar::Coefficient;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<Option<(usize, Tok)>, GradedError> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                if end < self.src.len() && (self.src[end] == b'.' || self.src[end] == b'e') {
                    return Err(GradedError::Parse {
                        pos: start,
                        msg: "only integer and rational literals are allowed".into(),
                    });
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                let v: i64 = text.parse().map_err(|_| GradedError::Parse {
                    pos: start,
                    msg: format!("integer literal `{text}` out of range"),
                })?;
                self.pos = end;
                return Ok(Some((start, Tok::Int(v))));
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                return Ok(Some((start, Tok::Ident(text))));
            }
            other => {
                return Err(GradedError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        self.pos += 1;
        Ok(Some((start, tok)))
    }
}

struct Parser<C> {
    ctx: Arc<GradedContext>,
    toks: Vec<(usize, Tok)>,
    cursor: usize,
    end: usize,
    _marker: std::marker::PhantomData<C>,
}

impl<C: Coefficient> Parser<C> {
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

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), GradedError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            _ => Err(GradedError::Parse { pos, msg: format!("expected {what}") }),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<GradedPolynomial<C>, GradedError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.checked_add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.checked_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<GradedPolynomial<C>, GradedError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = acc.checked_mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    // factor := ('-'|'+')* power
    fn factor(&mut self) -> Result<GradedPolynomial<C>, GradedError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(self.factor()?.negate())
            }
            Some(Tok::Plus) => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    // power := primary ('^' INT)?
    fn power(&mut self) -> Result<GradedPolynomial<C>, GradedError> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let exp = match self.bump() {
            Some(Tok::Int(v)) if v >= 0 => v as u32,
            _ => return Err(GradedError::NonIntegerExponent { pos }),
        };
        let mut acc = GradedPolynomial::one(base.context());
        for _ in 0..exp {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }

    // primary := IDENT | INT ('/' INT)? | '(' expr ')'
    fn primary(&mut self) -> Result<GradedPolynomial<C>, GradedError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(name)) => GradedPolynomial::coordinate_named(&self.ctx, &name),
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) if d != 0 => {
                            Ok(GradedPolynomial::constant(&self.ctx, C::ratio(n, d)))
                        }
                        _ => Err(GradedError::Parse {
                            pos: dpos,
                            msg: "expected nonzero integer denominator".into(),
                        }),
                    }
                } else {
                    Ok(GradedPolynomial::constant(&self.ctx, C::from_int(n)))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(GradedError::Parse { pos, msg: "expected identifier, number, or `(`".into() }),
        }
    }
}

/// Parse `text` into the normal form over `ctx`.
pub fn parse_polynomial<C: Coefficient>(
    ctx: &Arc<GradedContext>,
    text: &str,
) -> Result<GradedPolynomial<C>, GradedError> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next()? {
        toks.push(t);
    }
    let end = text.len();
    let mut parser = Parser::<C> {
        ctx: ctx.clone(),
        toks,
        cursor: 0,
        end,
        _marker: std::marker::PhantomData,
    };
    let poly = parser.expr()?;
    if parser.cursor != parser.toks.len() {
        return Err(GradedError::Parse {
            pos: parser.pos(),
            msg: "trailing input after expression".into(),
        });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Poly, Rat};

    fn ctx() -> Arc<GradedContext> {
        GradedContext::new([("x", 0), ("th1", 1), ("th2", 1)]).unwrap()
    }

    fn p(text: &str) -> Poly {
        parse_polynomial::<Rat>(&ctx(), text).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        // already normal
        let f = p("th1*th2 + x^2");
        assert_eq!(f.num_terms(), 2);
        // one odd transposition picks up a sign
        assert_eq!(p("th2*th1"), p("-th1*th2"));
        // odd squares vanish
        assert!(p("th1*th1").is_zero());
        assert!(p("th1^2").is_zero());
    }

    #[test]
    fn rational_literals_and_precedence() {
        assert_eq!(p("3/4*x"), p("x*3/4"));
        assert_eq!(p("2*x^2 - x^2 - x^2"), Poly::zero(&ctx()));
        // ^ binds tighter than *
        assert_eq!(p("2*x^2"), p("2*(x^2)"));
    }

    #[test]
    fn print_parse_round_trip() {
        for text in ["th1*th2 + x^2", "-3/4*x + th1", "x^3 - 2*x*th1*th2", "0"] {
            let f = p(text);
            let g = p(&f.to_string());
            assert_eq!(f, g, "round trip failed for `{text}` printed as `{f}`");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_polynomial::<Rat>(&ctx(), "y + 1"),
            Err(GradedError::UnknownCoordinate(_))
        ));
        assert!(matches!(
            parse_polynomial::<Rat>(&ctx(), "x^(1/2)"),
            Err(GradedError::NonIntegerExponent { .. })
        ));
        assert!(matches!(
            parse_polynomial::<Rat>(&ctx(), "x^-1"),
            Err(GradedError::NonIntegerExponent { .. })
        ));
        assert!(parse_polynomial::<Rat>(&ctx(), "x +").is_err());
        assert!(parse_polynomial::<Rat>(&ctx(), "x x").is_err());
        assert!(parse_polynomial::<Rat>(&ctx(), "x / 2").is_err());
    }

    #[test]
    fn trig_reduction_in_parse() {
        let ctx = GradedContext::with_trig_pairs([("c", 0), ("s", 0)], &[("c", "s")]).unwrap();
        let f: Poly = parse_polynomial(&ctx, "s^2 + c^2").unwrap();
        assert_eq!(f, Poly::one(&ctx));
        let g: Poly = parse_polynomial(&ctx, "s^3").unwrap();
        assert_eq!(g, parse_polynomial(&ctx, "s - s*c^2").unwrap());
    }
}
