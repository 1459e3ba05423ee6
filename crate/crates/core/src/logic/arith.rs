//! The infix syntax for `(N; 0, 1, +, |_p, <=)` sentences and a bounded
//! brute-force evaluator.
//!
//! ```text
//! sentence := 'E' var '.' sentence | disj
//! disj     := conj ('|' conj)*
//! conj     := atom ('&' atom)*
//! atom     := '(' sentence ')' | 'E' var '.' sentence | term rel term
//! rel      := '=' | '<=' | 'divp' | 'sdivp'
//! term     := summand ('+' summand)*
//! summand  := '0' | '1' | var
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::ast::{ArithAtom, ArithSentence, ArithTerm, Summand};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Plus,
    Eq,
    Le,
    DivP,
    SDivP,
    And,
    Or,
    Dot,
    Exists,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let cs: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < cs.len() {
        let (pos, c) = cs[i];
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '+' => Tok::Plus,
            '=' => Tok::Eq,
            '&' => Tok::And,
            '|' => Tok::Or,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '<' => {
                if cs.get(i).map(|x| x.1) != Some('=') {
                    return Err(Error::parse(pos, "expected '<='"));
                }
                i += 1;
                Tok::Le
            }
            '0' | '1' if !cs.get(i).is_some_and(|x| x.1.is_ascii_alphanumeric()) => {
                if c == '0' {
                    Tok::Zero
                } else {
                    Tok::One
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = c.to_string();
                while i < cs.len() && (cs[i].1.is_ascii_alphanumeric() || cs[i].1 == '_') {
                    s.push(cs[i].1);
                    i += 1;
                }
                match s.as_str() {
                    "E" => Tok::Exists,
                    "divp" => Tok::DivP,
                    "sdivp" => Tok::SDivP,
                    _ => Tok::Ident(s),
                }
            }
            _ => return Err(Error::parse(pos, format!("unexpected character '{c}'"))),
        };
        out.push((tok, pos));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.1).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|t| t.0.clone());
        self.i += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::parse(pos, format!("expected {what}"))),
        }
    }

    fn sentence(&mut self) -> Result<ArithSentence> {
        if self.peek() == Some(&Tok::Exists) {
            return self.exists();
        }
        self.disj()
    }

    fn exists(&mut self) -> Result<ArithSentence> {
        self.expect(Tok::Exists, "'E'")?;
        let pos = self.pos();
        let v = match self.bump() {
            Some(Tok::Ident(v)) => v,
            _ => return Err(Error::parse(pos, "expected a variable after 'E'")),
        };
        self.expect(Tok::Dot, "'.'")?;
        Ok(ArithSentence::Exists(v, Box::new(self.sentence()?)))
    }

    fn disj(&mut self) -> Result<ArithSentence> {
        let mut xs = vec![self.conj()?];
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            xs.push(self.conj()?);
        }
        Ok(if xs.len() == 1 { xs.pop().unwrap() } else { ArithSentence::Or(xs) })
    }

    fn conj(&mut self) -> Result<ArithSentence> {
        let mut xs = vec![self.atom()?];
        while self.peek() == Some(&Tok::And) {
            self.bump();
            xs.push(self.atom()?);
        }
        Ok(if xs.len() == 1 { xs.pop().unwrap() } else { ArithSentence::And(xs) })
    }

    fn atom(&mut self) -> Result<ArithSentence> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.bump();
                let s = self.sentence()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(s)
            }
            Some(Tok::Exists) => self.exists(),
            _ => {
                let l = self.term()?;
                let pos = self.pos();
                let op = self.bump();
                let r = self.term()?;
                Ok(ArithSentence::Atom(match op {
                    Some(Tok::Eq) => ArithAtom::Eq(l, r),
                    Some(Tok::Le) => ArithAtom::Le(l, r),
                    Some(Tok::DivP) => ArithAtom::DivP(l, r),
                    Some(Tok::SDivP) => ArithAtom::StrictDivP(l, r),
                    _ => return Err(Error::parse(pos, "expected '=', '<=', 'divp' or 'sdivp'")),
                }))
            }
        }
    }

    fn term(&mut self) -> Result<ArithTerm> {
        let mut xs = vec![self.summand()?];
        while self.peek() == Some(&Tok::Plus) {
            self.bump();
            xs.push(self.summand()?);
        }
        Ok(ArithTerm(xs))
    }

    fn summand(&mut self) -> Result<Summand> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Zero) => Ok(Summand::Zero),
            Some(Tok::One) => Ok(Summand::One),
            Some(Tok::Ident(v)) => Ok(Summand::Var(v)),
            _ => Err(Error::parse(pos, "expected 0, 1 or a variable")),
        }
    }
}

/// Parse a sentence; free variables are rejected.
pub fn parse_arith(text: &str) -> Result<ArithSentence> {
    let mut p = Parser { toks: lex(text)?, i: 0, end: text.len() };
    let s = p.sentence()?;
    if p.i < p.toks.len() {
        return Err(Error::parse(p.pos(), "trailing input"));
    }
    if let Some(v) = s.free_vars().into_iter().next() {
        return Err(Error::UnboundVariable(v));
    }
    Ok(s)
}

impl fmt::Display for ArithTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| match s {
                Summand::Zero => "0".to_string(),
                Summand::One => "1".to_string(),
                Summand::Var(v) => v.clone(),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for ArithSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithSentence::Atom(a) => {
                let op = match a {
                    ArithAtom::Eq(..) => "=",
                    ArithAtom::Le(..) => "<=",
                    ArithAtom::DivP(..) => "divp",
                    ArithAtom::StrictDivP(..) => "sdivp",
                };
                let (l, r) = a.sides();
                write!(f, "{l} {op} {r}")
            }
            ArithSentence::And(xs) | ArithSentence::Or(xs) => {
                let is_and = matches!(self, ArithSentence::And(_));
                let parts: Vec<String> = xs
                    .iter()
                    .map(|x| match x {
                        ArithSentence::Atom(_) => x.to_string(),
                        ArithSentence::And(_) if !is_and => x.to_string(),
                        _ => format!("({x})"),
                    })
                    .collect();
                write!(f, "{}", parts.join(if is_and { " & " } else { " | " }))
            }
            ArithSentence::Exists(v, b) => write!(f, "E {v}. {b}"),
        }
    }
}

/// Expand `a sdivp b` into `a divp b & a <= b`.
pub fn derive_strict_div(s: &ArithSentence) -> ArithSentence {
    match s {
        ArithSentence::Atom(ArithAtom::StrictDivP(a, b)) => ArithSentence::And(vec![
            ArithSentence::Atom(ArithAtom::DivP(a.clone(), b.clone())),
            ArithSentence::Atom(ArithAtom::Le(a.clone(), b.clone())),
        ]),
        ArithSentence::Atom(_) => s.clone(),
        ArithSentence::And(xs) => ArithSentence::And(xs.iter().map(derive_strict_div).collect()),
        ArithSentence::Or(xs) => ArithSentence::Or(xs.iter().map(derive_strict_div).collect()),
        ArithSentence::Exists(v, b) => ArithSentence::Exists(v.clone(), Box::new(derive_strict_div(b))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ArithOutcome {
    True { witnesses: BTreeMap<String, u64> },
    /// No witnesses up to the bound; inconclusive.
    FalseAtBound,
}

impl ArithOutcome {
    pub fn is_true(&self) -> bool {
        matches!(self, ArithOutcome::True { .. })
    }
}

/// `a |_p b`: `b = p^s a` or `a = p^s b` for some `s >= 0`.
pub fn divides_p(a: u64, b: u64, p: u64) -> bool {
    if a == 0 || b == 0 {
        return a == b;
    }
    let (mut big, small) = if a >= b { (a, b) } else { (b, a) };
    if big % small != 0 {
        return false;
    }
    big /= small;
    while big % p == 0 {
        big /= p;
    }
    big == 1
}

fn term_value(t: &ArithTerm, env: &[(String, u64)]) -> u64 {
    t.0.iter()
        .map(|s| match s {
            Summand::Zero => 0,
            Summand::One => 1,
            Summand::Var(v) => env.iter().rev().find(|(n, _)| n == v).map(|(_, x)| *x).expect("bound variable"),
        })
        .sum()
}

fn eval(s: &ArithSentence, p: u64, bound: u64, env: &mut Vec<(String, u64)>, wit: &mut BTreeMap<String, u64>) -> bool {
    match s {
        ArithSentence::Atom(a) => {
            let (l, r) = a.sides();
            let (x, y) = (term_value(l, env), term_value(r, env));
            match a {
                ArithAtom::Eq(..) => x == y,
                ArithAtom::Le(..) => x <= y,
                ArithAtom::DivP(..) => divides_p(x, y, p),
                ArithAtom::StrictDivP(..) => divides_p(x, y, p) && x <= y,
            }
        }
        ArithSentence::And(xs) => xs.iter().all(|x| eval(x, p, bound, env, wit)),
        ArithSentence::Or(xs) => xs.iter().any(|x| eval(x, p, bound, env, wit)),
        ArithSentence::Exists(v, body) => {
            for n in 0..=bound {
                env.push((v.clone(), n));
                let ok = eval(body, p, bound, env, wit);
                env.pop();
                if ok {
                    wit.insert(v.clone(), n);
                    return true;
                }
            }
            false
        }
    }
}

/// Search witnesses in `0..=bound` for every quantifier.
pub fn eval_arith(s: &ArithSentence, p: u64, bound: u64) -> Result<ArithOutcome> {
    if let Some(v) = s.free_vars().into_iter().next() {
        return Err(Error::UnboundVariable(v));
    }
    let mut witnesses = BTreeMap::new();
    Ok(if eval(s, p, bound, &mut Vec::new(), &mut witnesses) {
        ArithOutcome::True { witnesses }
    } else {
        ArithOutcome::FalseAtBound
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let s = parse_arith("E x. x + x = 1 + 1").unwrap();
        assert_eq!(s.to_string(), "E x. x + x = 1 + 1");
        let s = parse_arith("E x. E y. x divp y & x <= y").unwrap();
        assert!(matches!(&s, ArithSentence::Exists(_, b) if matches!(&**b, ArithSentence::Exists(_, c) if matches!(&**c, ArithSentence::And(xs) if xs.len() == 2))));
        assert_eq!(parse_arith("x = 1"), Err(Error::UnboundVariable("x".into())));
        assert!(matches!(parse_arith("E x. x = = 1"), Err(Error::Parse { pos: 9, .. })));
    }

    #[test]
    fn evaluation() {
        let s = parse_arith("E x. x + 1 = 1 + 1").unwrap();
        assert_eq!(eval_arith(&s, 3, 5).unwrap(), ArithOutcome::True { witnesses: [("x".to_string(), 1)].into() });
        let s = parse_arith("E x. x + x = 1").unwrap();
        assert_eq!(eval_arith(&s, 3, 10).unwrap(), ArithOutcome::FalseAtBound);
        let s = parse_arith("E x. 1 divp x & x = 1 + 1 + 1").unwrap();
        assert!(eval_arith(&s, 3, 5).unwrap().is_true());
        assert!(divides_p(9, 1, 3) && divides_p(2, 6, 3) && !divides_p(2, 4, 3) && divides_p(0, 0, 5) && !divides_p(0, 5, 5));
    }

    #[test]
    fn strict_div_macro() {
        let s = parse_arith("E x. E y. x sdivp y").unwrap();
        let d = derive_strict_div(&s);
        assert_eq!(d.to_string(), "E x. E y. x divp y & x <= y");
        let plain = parse_arith("E x. x = x").unwrap();
        assert_eq!(derive_strict_div(&plain), plain);
    }
}
