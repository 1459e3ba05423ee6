//! S-expression printing and parsing for both formula languages.
//!
//! Ring terms: symbols, integers, `t`, `(+ ..)`, `(* ..)`, `(^ a k)`.
//! Ring atoms: `(= a b)`, `(F a)`, `(B a)`, `(den x y)`,
//! `(ints num den param)`, `(sq a)`, `(char p)`, negated as `(not atom)`.
//! Arithmetic atoms: `(= s t)`, `(divp s t)`, `(<= s t)`, `(sdivp s t)` over
//! `0`, `1`, symbols and `(+ ..)`. Both use `(and ..)`, `(or ..)` and
//! `(exists (x ..) body)`.

use std::fmt::Write;

use super::ast::{ArithAtom, ArithSentence, ArithTerm, RingAtom, RingFormula, Summand, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Sx {
    Sym(String, usize),
    List(Vec<Sx>, usize),
}

impl Sx {
    fn pos(&self) -> usize {
        match self {
            Sx::Sym(_, p) | Sx::List(_, p) => *p,
        }
    }
}

fn read(text: &str) -> Result<Sx> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let out = read_one(&bytes, &mut i, text.len())?;
    skip_ws(&bytes, &mut i);
    if i < bytes.len() {
        return Err(Error::parse(bytes[i].0, "trailing input"));
    }
    Ok(out)
}

fn skip_ws(b: &[(usize, char)], i: &mut usize) {
    while *i < b.len() && b[*i].1.is_whitespace() {
        *i += 1;
    }
}

fn read_one(b: &[(usize, char)], i: &mut usize, end: usize) -> Result<Sx> {
    skip_ws(b, i);
    let Some(&(pos, c)) = b.get(*i) else {
        return Err(Error::parse(end, "unexpected end of input"));
    };
    match c {
        '(' => {
            *i += 1;
            let mut items = Vec::new();
            loop {
                skip_ws(b, i);
                match b.get(*i) {
                    None => return Err(Error::parse(end, "unclosed parenthesis")),
                    Some((_, ')')) => {
                        *i += 1;
                        return Ok(Sx::List(items, pos));
                    }
                    _ => items.push(read_one(b, i, end)?),
                }
            }
        }
        ')' => Err(Error::parse(pos, "unexpected ')'")),
        _ => {
            let mut s = String::new();
            while *i < b.len() && !b[*i].1.is_whitespace() && b[*i].1 != '(' && b[*i].1 != ')' {
                s.push(b[*i].1);
                *i += 1;
            }
            Ok(Sx::Sym(s, pos))
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '#')
}

fn head(items: &[Sx], pos: usize) -> Result<&str> {
    match items.first() {
        Some(Sx::Sym(s, _)) => Ok(s),
        _ => Err(Error::parse(pos, "expected an operator symbol")),
    }
}

fn arity(items: &[Sx], n: usize, pos: usize, op: &str) -> Result<()> {
    if items.len() != n + 1 {
        return Err(Error::parse(pos, format!("'{op}' takes {n} arguments")));
    }
    Ok(())
}

fn var_list(sx: &Sx) -> Result<Vec<String>> {
    match sx {
        Sx::List(items, _) => items
            .iter()
            .map(|v| match v {
                Sx::Sym(s, _) if is_ident(s) && s != "t" => Ok(s.clone()),
                other => Err(Error::parse(other.pos(), "expected a variable name")),
            })
            .collect(),
        Sx::Sym(_, p) => Err(Error::parse(*p, "expected a variable list")),
    }
}

// ---------- ring language ----------

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Int(i) => write!(out, "{i}").unwrap(),
        Term::T => out.push('t'),
        Term::Add(xs) | Term::Mul(xs) => {
            out.push_str(if matches!(t, Term::Add(_)) { "(+" } else { "(*" });
            for x in xs {
                out.push(' ');
                write_term(out, x);
            }
            out.push(')');
        }
        Term::Pow(b, e) => {
            out.push_str("(^ ");
            write_term(out, b);
            write!(out, " {e})").unwrap();
        }
    }
}

fn write_atom(out: &mut String, a: &RingAtom) {
    let (op, args): (&str, Vec<&Term>) = match a {
        RingAtom::Eq(x, y) => ("=", vec![x, y]),
        RingAtom::Nonconst(x) => ("F", vec![x]),
        RingAtom::Behaved(x) => ("B", vec![x]),
        RingAtom::Den(x, y) => ("den", vec![x, y]),
        RingAtom::Ints { num, den, param } => ("ints", vec![num, den, param]),
        RingAtom::Sq(x) => ("sq", vec![x]),
        RingAtom::Char(p) => {
            write!(out, "(char {p})").unwrap();
            return;
        }
    };
    out.push('(');
    out.push_str(op);
    for x in args {
        out.push(' ');
        write_term(out, x);
    }
    out.push(')');
}

fn write_formula(out: &mut String, f: &RingFormula) {
    match f {
        RingFormula::Atom(a) => write_atom(out, a),
        RingFormula::Not(a) => {
            out.push_str("(not ");
            write_atom(out, a);
            out.push(')');
        }
        RingFormula::And(xs) | RingFormula::Or(xs) => {
            out.push_str(if matches!(f, RingFormula::And(_)) { "(and" } else { "(or" });
            for x in xs {
                out.push(' ');
                write_formula(out, x);
            }
            out.push(')');
        }
        RingFormula::Exists(vs, body) => {
            write!(out, "(exists ({}) ", vs.join(" ")).unwrap();
            write_formula(out, body);
            out.push(')');
        }
    }
}

pub fn print_ring(f: &RingFormula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f);
    s
}

pub fn parse_ring(text: &str) -> Result<RingFormula> {
    ring_formula(&read(text)?)
}

pub fn parse_term(text: &str) -> Result<Term> {
    term(&read(text)?)
}

fn term(sx: &Sx) -> Result<Term> {
    match sx {
        Sx::Sym(s, p) => {
            if s == "t" {
                Ok(Term::T)
            } else if let Ok(i) = s.parse::<i64>() {
                Ok(Term::Int(i))
            } else if is_ident(s) {
                Ok(Term::Var(s.clone()))
            } else {
                Err(Error::parse(*p, format!("bad term '{s}'")))
            }
        }
        Sx::List(items, p) => match head(items, *p)? {
            "+" => Ok(Term::Add(items[1..].iter().map(term).collect::<Result<_>>()?)),
            "*" => Ok(Term::Mul(items[1..].iter().map(term).collect::<Result<_>>()?)),
            "^" => {
                arity(items, 2, *p, "^")?;
                let e = match &items[2] {
                    Sx::Sym(s, q) => s.parse::<u32>().map_err(|_| Error::parse(*q, "bad exponent"))?,
                    other => return Err(Error::parse(other.pos(), "bad exponent")),
                };
                Ok(Term::Pow(Box::new(term(&items[1])?), e))
            }
            op => Err(Error::parse(*p, format!("unknown term operator '{op}'"))),
        },
    }
}

fn ring_atom(sx: &Sx) -> Result<RingAtom> {
    let Sx::List(items, p) = sx else {
        return Err(Error::parse(sx.pos(), "expected an atom"));
    };
    let p = *p;
    let op = head(items, p)?;
    let args = |n: usize| -> Result<Vec<Term>> {
        arity(items, n, p, op)?;
        items[1..].iter().map(term).collect()
    };
    Ok(match op {
        "=" => {
            let mut a = args(2)?;
            let y = a.pop().unwrap();
            RingAtom::Eq(a.pop().unwrap(), y)
        }
        "den" => {
            let mut a = args(2)?;
            let y = a.pop().unwrap();
            RingAtom::Den(a.pop().unwrap(), y)
        }
        "F" => RingAtom::Nonconst(args(1)?.pop().unwrap()),
        "B" => RingAtom::Behaved(args(1)?.pop().unwrap()),
        "sq" => RingAtom::Sq(args(1)?.pop().unwrap()),
        "ints" => {
            let mut a = args(3)?;
            let param = a.pop().unwrap();
            let den = a.pop().unwrap();
            RingAtom::Ints { num: a.pop().unwrap(), den, param }
        }
        "char" => {
            arity(items, 1, p, op)?;
            match &items[1] {
                Sx::Sym(s, q) => RingAtom::Char(s.parse().map_err(|_| Error::parse(*q, "bad characteristic"))?),
                other => return Err(Error::parse(other.pos(), "bad characteristic")),
            }
        }
        _ => return Err(Error::parse(p, format!("unknown atom '{op}'"))),
    })
}

fn ring_formula(sx: &Sx) -> Result<RingFormula> {
    let Sx::List(items, p) = sx else {
        return Err(Error::parse(sx.pos(), "expected a formula"));
    };
    match head(items, *p)? {
        "and" => Ok(RingFormula::And(items[1..].iter().map(ring_formula).collect::<Result<_>>()?)),
        "or" => Ok(RingFormula::Or(items[1..].iter().map(ring_formula).collect::<Result<_>>()?)),
        "not" => {
            arity(items, 1, *p, "not")?;
            Ok(RingFormula::Not(ring_atom(&items[1])?))
        }
        "exists" => {
            arity(items, 2, *p, "exists")?;
            Ok(RingFormula::Exists(var_list(&items[1])?, Box::new(ring_formula(&items[2])?)))
        }
        _ => Ok(RingFormula::Atom(ring_atom(sx)?)),
    }
}

// ---------- arithmetic language ----------

fn write_summand(out: &mut String, s: &Summand) {
    match s {
        Summand::Zero => out.push('0'),
        Summand::One => out.push('1'),
        Summand::Var(v) => out.push_str(v),
    }
}

fn write_arith_term(out: &mut String, t: &ArithTerm) {
    if t.0.len() == 1 {
        write_summand(out, &t.0[0]);
        return;
    }
    out.push_str("(+");
    for s in &t.0 {
        out.push(' ');
        write_summand(out, s);
    }
    out.push(')');
}

fn write_arith(out: &mut String, s: &ArithSentence) {
    match s {
        ArithSentence::Atom(a) => {
            let op = match a {
                ArithAtom::Eq(..) => "=",
                ArithAtom::DivP(..) => "divp",
                ArithAtom::Le(..) => "<=",
                ArithAtom::StrictDivP(..) => "sdivp",
            };
            let (l, r) = a.sides();
            write!(out, "({op} ").unwrap();
            write_arith_term(out, l);
            out.push(' ');
            write_arith_term(out, r);
            out.push(')');
        }
        ArithSentence::And(xs) | ArithSentence::Or(xs) => {
            out.push_str(if matches!(s, ArithSentence::And(_)) { "(and" } else { "(or" });
            for x in xs {
                out.push(' ');
                write_arith(out, x);
            }
            out.push(')');
        }
        ArithSentence::Exists(v, body) => {
            write!(out, "(exists ({v}) ").unwrap();
            write_arith(out, body);
            out.push(')');
        }
    }
}

pub fn print_arith(s: &ArithSentence) -> String {
    let mut out = String::new();
    write_arith(&mut out, s);
    out
}

pub fn parse_arith_sexpr(text: &str) -> Result<ArithSentence> {
    arith(&read(text)?)
}

fn summand(sx: &Sx) -> Result<Summand> {
    match sx {
        Sx::Sym(s, _) if s == "0" => Ok(Summand::Zero),
        Sx::Sym(s, _) if s == "1" => Ok(Summand::One),
        Sx::Sym(s, _) if is_ident(s) => Ok(Summand::Var(s.clone())),
        other => Err(Error::parse(other.pos(), "expected 0, 1 or a variable")),
    }
}

fn arith_term(sx: &Sx) -> Result<ArithTerm> {
    match sx {
        Sx::List(items, p) => {
            if head(items, *p)? != "+" {
                return Err(Error::parse(*p, "expected '+'"));
            }
            Ok(ArithTerm(items[1..].iter().map(summand).collect::<Result<_>>()?))
        }
        _ => Ok(ArithTerm(vec![summand(sx)?])),
    }
}

fn arith(sx: &Sx) -> Result<ArithSentence> {
    let Sx::List(items, p) = sx else {
        return Err(Error::parse(sx.pos(), "expected a formula"));
    };
    let p = *p;
    let op = head(items, p)?;
    let pair = || -> Result<(ArithTerm, ArithTerm)> {
        arity(items, 2, p, op)?;
        Ok((arith_term(&items[1])?, arith_term(&items[2])?))
    };
    Ok(match op {
        "and" => ArithSentence::And(items[1..].iter().map(arith).collect::<Result<_>>()?),
        "or" => ArithSentence::Or(items[1..].iter().map(arith).collect::<Result<_>>()?),
        "exists" => {
            arity(items, 2, p, op)?;
            let vs = var_list(&items[1])?;
            if vs.is_empty() {
                return Err(Error::parse(items[1].pos(), "empty variable list"));
            }
            let mut body = arith(&items[2])?;
            for v in vs.into_iter().rev() {
                body = ArithSentence::Exists(v, Box::new(body));
            }
            body
        }
        "=" => {
            let (a, b) = pair()?;
            ArithSentence::Atom(ArithAtom::Eq(a, b))
        }
        "divp" => {
            let (a, b) = pair()?;
            ArithSentence::Atom(ArithAtom::DivP(a, b))
        }
        "<=" => {
            let (a, b) = pair()?;
            ArithSentence::Atom(ArithAtom::Le(a, b))
        }
        "sdivp" => {
            let (a, b) = pair()?;
            ArithSentence::Atom(ArithAtom::StrictDivP(a, b))
        }
        _ => return Err(Error::parse(p, format!("unknown operator '{op}'"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_round_trip() {
        let text = "(exists (z_a z_b) (and (= z_a (* z_b z_c)) (not (F (+ x -3))) (ints z_a 1 t) (char 5) (= (^ y 2) t)))";
        let f = parse_ring(text).unwrap();
        assert_eq!(print_ring(&f), text);
        let eq = RingFormula::Atom(RingAtom::Eq(
            Term::var("z_a"),
            Term::Mul(vec![Term::var("z_b"), Term::var("z_c")]),
        ));
        assert_eq!(print_ring(&eq), "(= z_a (* z_b z_c))");
    }

    #[test]
    fn arith_round_trip() {
        let text = "(exists (x) (or (= (+ x x) (+ 1 1)) (and (divp x 1) (<= 0 x))))";
        let s = parse_arith_sexpr(text).unwrap();
        assert_eq!(print_arith(&s), text);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_ring("(and (= x y) (foo x))") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 13),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_ring("(and"), Err(Error::Parse { .. })));
    }
}
