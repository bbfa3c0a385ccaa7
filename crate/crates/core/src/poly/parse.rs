//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace-insensitive, no implicit multiplication):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := integer | variable | '(' expr ')'
//! ```
//!
//! Integers are arbitrary precision; exponents must fit in 32 bits and
//! overflow is reported, never wrapped.

use super::{PolyError, Polynomial, VarSet};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let n: BigInt = lit.parse().expect("digit run parses as integer");
                out.push((Tok::Int(n), start));
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(PolyError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", &text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a VarSet,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
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
                    self.bump();
                    let t = self.term()?;
                    acc = acc.try_add(&t)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.try_sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = acc.try_mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    if n.is_zero() {
                        return Ok(Polynomial::one(self.vars));
                    }
                    let e = u32::try_from(&n).map_err(|_| PolyError::ExponentOverflow)?;
                    return base.try_pow(e);
                }
                _ => {
                    return Err(PolyError::Syntax {
                        pos,
                        msg: "expected a non-negative integer exponent after `^`".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial, PolyError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Polynomial::constant(self.vars, n)),
            Some(Tok::Ident(name)) => match self.vars.index_of(&name) {
                Some(i) => Ok(Polynomial::variable(self.vars, i)),
                None => Err(PolyError::UnknownVariable { pos, name }),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let pos = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(PolyError::Syntax { pos, msg: "expected `)`".into() }),
                }
            }
            other => Err(PolyError::Syntax {
                pos,
                msg: match other {
                    None => "unexpected end of input".into(),
                    Some(_) => "expected an integer, variable or `(`".into(),
                },
            }),
        }
    }
}

pub fn parse_polynomial(text: &str, vars: &VarSet) -> Result<Polynomial, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, vars, end: text.len() };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(PolyError::Syntax {
            pos: p.here(),
            msg: "trailing input after expression".into(),
        });
    }
    Ok(poly)
}
