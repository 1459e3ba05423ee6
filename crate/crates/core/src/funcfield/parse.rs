//! Text syntax for elements of `F_q(t)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? int)?
//! atom   := int | 't' | 'X' | 'a' | '(' expr ')'
//! ```
//!
//! Integer literals are reduced mod `p`. The letter `a` names the modulus
//! root of a non-prime field.

use super::RationalFunction;
use crate::error::{Error, Result};
use crate::galois::{Fq, Poly};

pub fn parse_rational(field: &Fq, s: &str) -> Result<RationalFunction> {
    let mut p = Parser {
        field,
        src: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    field: &'a Fq,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|_| Error::parse(at, "division by zero"))?;
                }
                Some(c) if c.is_ascii_digit() || c == b'(' || c == b't' || c == b'X' || c == b'a' => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let at = self.pos;
            let e = self.uint()?;
            let e = i64::try_from(e).map_err(|_| Error::parse(at, "exponent too large"))?;
            return base
                .pow(if neg { -e } else { e })
                .map_err(|_| Error::parse(at, "negative power of zero"));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u128> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "integer too large"))
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        let f = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b't') | Some(b'X') => {
                self.pos += 1;
                Ok(RationalFunction::t(f))
            }
            Some(b'a') if !f.is_prime_field() => {
                self.pos += 1;
                Ok(RationalFunction::constant(f, f.generator()))
            }
            Some(c) if c.is_ascii_digit() => {
                // reduce digit by digit so literals of any length are accepted
                let p = f.characteristic() as u128;
                let mut v: u128 = 0;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    v = (v * 10 + (self.src[self.pos] - b'0') as u128) % p;
                    self.pos += 1;
                }
                Ok(RationalFunction::from_poly(Poly::constant(f, v as u32)))
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected `{}`", c as char))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}
