//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! IDENT  := [a-zA-Z][a-zA-Z0-9_]*
//! ```
//!
//! `^` binds tightest, then `*`, then `+`/`-`. Implicit multiplication is
//! rejected. `a/b` is accepted only between two integer literals, as a
//! rational coefficient.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::polynomial::Poly;
use crate::poly::ring::RingCtx;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '^' => out.push((Tok::Caret, start)),
            '/' => out.push((Tok::Slash, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{other}`") })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    ctx: &'a Arc<RingCtx>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return self.err("implicit multiplication is not allowed; use `*`")
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e = n.to_u32().ok_or(Error::Syntax { pos, msg: "exponent too large".into() })?;
                    if self.peek() == Some(&Tok::Caret) {
                        return self.err("chained exponents are ambiguous; use parentheses");
                    }
                    Ok(base.pow(e))
                }
                _ => Err(Error::Syntax { pos, msg: "expected a nonnegative integer exponent".into() }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let field = self.ctx.field();
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) => Ok(Poly::constant(self.ctx, field.fraction(n, d)?)),
                        _ => Err(Error::Syntax { pos: dpos, msg: "expected an integer denominator".into() }),
                    }
                } else {
                    Ok(Poly::constant(self.ctx, field.from_bigint(n)))
                }
            }
            Some(Tok::Ident(name)) => match self.ctx.var_index(&name) {
                Some(i) => Ok(Poly::var_at(self.ctx, i)),
                None => Err(Error::UnknownVariable { name, pos }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Syntax { pos: self.toks.get(self.at - 1).map(|t| t.1).unwrap_or(self.end), msg: "expected `)`".into() }),
                }
            }
            Some(Tok::Slash) => Err(Error::Syntax { pos, msg: "`/` only joins two integer literals".into() }),
            Some(t) => Err(Error::Syntax { pos, msg: format!("unexpected token {t:?}") }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses `text` into a canonical polynomial of `ctx`.
pub fn parse_poly(text: &str, ctx: &Arc<RingCtx>) -> Result<Poly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), ctx };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let out = p.expr()?;
    if p.at < p.toks.len() {
        if p.peek() == Some(&Tok::Slash) {
            return p.err("`/` only joins two integer literals");
        }
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::field::Field;
    use crate::poly::ring::MonomialOrder;

    fn q() -> Arc<RingCtx> {
        RingCtx::rational(&["x", "y"])
    }

    #[test]
    fn denotation() {
        let ctx = q();
        let p = parse_poly("x^2*y - 3*y", &ctx).unwrap();
        let f = ctx.field();
        assert_eq!(p.terms(), &[(vec![2, 1], f.from_int(1)), (vec![0, 1], f.from_int(-3))]);
        assert_eq!(parse_poly("x + x", &ctx).unwrap(), parse_poly("2*x", &ctx).unwrap());
        assert_eq!(
            parse_poly("(x+y)^2", &ctx).unwrap(),
            parse_poly("x^2 + 2*x*y + y^2", &ctx).unwrap()
        );
    }

    #[test]
    fn precedence() {
        let ctx = q();
        assert_eq!(parse_poly("-x^2", &ctx).unwrap(), -&parse_poly("x*x", &ctx).unwrap());
        assert_eq!(parse_poly("2*x^2", &ctx).unwrap(), parse_poly("x^2 + x^2", &ctx).unwrap());
        assert_eq!(parse_poly("1 - x - y", &ctx).unwrap(), parse_poly("1 - (x + y)", &ctx).unwrap());
        assert_eq!(parse_poly("-3", &ctx).unwrap(), Poly::from_int(&ctx, -3));
    }

    #[test]
    fn errors_carry_positions() {
        let ctx = q();
        assert!(matches!(parse_poly("x +", &ctx), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("2x", &ctx), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("x + z", &ctx), Err(Error::UnknownVariable { pos: 4, .. })));
        assert!(matches!(parse_poly("x^y", &ctx), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("(x", &ctx), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x $ y", &ctx), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x/2", &ctx), Err(Error::Syntax { .. })));
        assert!(parse_poly("", &ctx).is_err());
    }

    #[test]
    fn unrepresentable_coefficient() {
        let ctx = RingCtx::new(Field::Prime(5), &["x"], MonomialOrder::DegRevLex).unwrap();
        assert!(matches!(parse_poly("1/5*x", &ctx), Err(Error::Unrepresentable { .. })));
        assert_eq!(parse_poly("1/2", &ctx).unwrap(), Poly::from_int(&ctx, 3));
        assert_eq!(parse_poly("7*x", &ctx).unwrap(), parse_poly("2*x", &ctx).unwrap());
    }

    #[test]
    fn print_parse_fixed_point() {
        let ctx = q();
        for s in ["x^2*y - 3*y", "-1/2*x + 7", "(x - y)^3", "0", "-x*y^4 + 2/3"] {
            let p = parse_poly(s, &ctx).unwrap();
            let printed = p.to_string();
            let again = parse_poly(&printed, &ctx).unwrap();
            assert_eq!(p, again);
            assert_eq!(printed, again.to_string());
        }
    }
}
