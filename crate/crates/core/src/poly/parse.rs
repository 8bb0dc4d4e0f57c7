//! Text parser for polynomial expressions in `x, y, z, w`.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := [ '+' | '-' ] term { ( '+' | '-' ) term }
//! term   := factor { ( '*' | '/' ) factor }
//! factor := atom [ '^' nat ]
//! atom   := nat | var | 'sqrt' '(' int ')' | '(' expr ')'
//! var    := 'x' | 'y' | 'z' | 'w'
//! int    := [ '-' ] nat
//! ```
//!
//! Coefficients are exact: integers, fractions like `10/3`, and quadratic
//! surds like `sqrt(7)` or `2-sqrt(-1)` are all accepted, so expressions can
//! mix a single surd index with rational arithmetic. Division is only
//! defined by non-zero constants. The result is a [`MultiPoly`] over
//! [`SurdRational`]; reduction to a finite field happens at embedding time,
//! not at parse time.

use crate::field::{Coeff, FieldError, SurdRational};
use crate::poly::MultiPoly;
use thiserror::Error;

/// Parse failure with the byte offset of the offending token.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Var(usize),
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'x' => Tok::Var(0),
            'y' => Tok::Var(1),
            'z' => Tok::Var(2),
            'w' => Tok::Var(3),
            's' => {
                if src[i..].starts_with("sqrt") {
                    toks.push((i, Tok::Sqrt));
                    i += 4;
                    continue;
                }
                return Err(ParseError::new(i, "unknown identifier (expected sqrt)"));
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u64 = src[start..i]
                    .parse()
                    .map_err(|_| ParseError::new(start, "integer literal too large"))?;
                toks.push((start, Tok::Num(n)));
                continue;
            }
            other => {
                return Err(ParseError::new(i, format!("unexpected character '{other}'")));
            }
        };
        toks.push((i, tok));
        i += 1;
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
}

type SPoly = MultiPoly<SurdRational>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<SPoly, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.at += 1;
            }
            Some(Tok::Plus) => {
                self.at += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let f = self.factor()?;
                    let c = constant_of(&f).ok_or_else(|| {
                        ParseError::new(pos, "division is only defined by constants")
                    })?;
                    let inv = c
                        .try_inv()
                        .ok_or_else(|| ParseError::new(pos, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                // juxtaposition such as `3x` or `x y` is rejected on purpose:
                // a following atom without an operator falls through and the
                // caller reports the stray token
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<SPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Num(n)) if n <= 64 => Ok(base.pow(n as u16)),
                Some(Tok::Num(_)) => Err(ParseError::new(pos, "exponent too large (max 64)")),
                _ => Err(ParseError::new(pos, "expected exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<SPoly, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(MultiPoly::constant(SurdRational::from_int(n as i64))),
            Some(Tok::Var(v)) => Ok(MultiPoly::variable(SurdRational::from_int(1), v)),
            Some(Tok::Sqrt) => {
                self.expect(Tok::LParen, "'(' after sqrt")?;
                let neg = if self.peek() == Some(&Tok::Minus) {
                    self.at += 1;
                    true
                } else {
                    false
                };
                let dpos = self.pos();
                let d = match self.bump() {
                    Some(Tok::Num(n)) if n <= i64::MAX as u64 => n as i64,
                    _ => return Err(ParseError::new(dpos, "expected integer inside sqrt")),
                };
                let d = if neg { -d } else { d };
                self.expect(Tok::RParen, "')' after sqrt argument")?;
                let s = SurdRational::sqrt_of(d).map_err(|e| match e {
                    FieldError::NotSquareFree(v) => {
                        ParseError::new(dpos, format!("sqrt argument {v} must be square-free and not 1"))
                    }
                    other => ParseError::new(dpos, other.to_string()),
                })?;
                Ok(MultiPoly::constant(s))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing ')'")?;
                Ok(inner)
            }
            Some(other) => Err(ParseError::new(pos, format!("unexpected token {other:?}"))),
            None => Err(ParseError::new(pos, "unexpected end of input")),
        }
    }
}

fn constant_of(p: &SPoly) -> Option<SurdRational> {
    if p.is_zero() {
        return Some(p.unit().zero_like());
    }
    if p.total_degree() == Some(0) {
        return Some(p.coeff([0; 4]));
    }
    None
}

/// Parse an expression into an exact polynomial.
pub fn parse_poly(src: &str) -> Result<MultiPoly<SurdRational>, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let mut p = Parser { toks: &toks, at: 0, end: src.len() };
    let poly = p.expr()?;
    if p.at != toks.len() {
        return Err(ParseError::new(p.pos(), "trailing input after expression"));
    }
    Ok(poly)
}
