//! Compile arithmetic sentences into ring formulas over `F_q(t)`.
//!
//! A natural number `a` is represented by a nonzero `z_a` whose order along
//! the behaved factor of the parameter is `a`. Sums become products, `<=`
//! becomes an `Ints` ratio test and `|_p` goes through `Den`.

use serde::Serialize;

use super::ast::{ArithAtom, ArithSentence, ArithTerm, RingAtom, RingFormula, Summand, Term};
use super::arith::derive_strict_div;
use crate::error::Result;
use crate::power::phi_uniform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranslateMode {
    /// Keep `Den` atoms.
    Abstract,
    /// Replace each `Den` atom by the uniform square formula.
    ExpandDenp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamPolicy {
    /// The parameter is the constant `t`.
    FixedT,
    /// The parameter is the free variable `u`.
    FreeU,
    /// `E u. (B u & ..)`.
    QuantifiedBl,
}

/// Name of the free parameter variable.
pub const PARAM: &str = "u";

struct Ctx {
    mode: TranslateMode,
    genus: u64,
    param: Term,
    den_count: usize,
    phi_count: usize,
}

impl Ctx {
    fn product(&self, t: &ArithTerm) -> Term {
        let factors: Vec<Term> = t
            .0
            .iter()
            .filter_map(|s| match s {
                Summand::Zero => None,
                Summand::One => Some(self.param.clone()),
                Summand::Var(v) => Some(Term::Var(z_name(v))),
            })
            .collect();
        Term::product(factors)
    }

    fn ints(&self, num: Term, den: Term) -> RingFormula {
        RingFormula::atom(RingAtom::Ints { num, den, param: self.param.clone() })
    }

    fn den(&mut self, x: Term, y: Term) -> Result<RingFormula> {
        match self.mode {
            TranslateMode::Abstract => Ok(RingFormula::atom(RingAtom::Den(x, y))),
            TranslateMode::ExpandDenp => {
                self.phi_count += 1;
                let k = self.phi_count;
                let (px, py) = (Term::var("x"), Term::var("y"));
                let phi = phi_uniform(self.genus, &px, &py)?.rename_bound(&mut |v: &str| format!("{v}_phi{k}"));
                Ok(phi.substitute(&|name: &str| match name {
                    "x" => Some(x.clone()),
                    "y" => Some(y.clone()),
                    _ => None,
                }))
            }
        }
    }

    fn atom(&mut self, a: &ArithAtom) -> Result<RingFormula> {
        Ok(match a {
            ArithAtom::Eq(l, r) => RingFormula::atom(RingAtom::Eq(self.product(l), self.product(r))),
            // ord(b) - ord(a) >= 0
            ArithAtom::Le(l, r) => self.ints(self.product(r), self.product(l)),
            ArithAtom::DivP(l, r) => {
                self.den_count += 1;
                let w = format!("dp{}", self.den_count);
                let (zl, zr, zw) = (self.product(l), self.product(r), Term::var(&w));
                let body = RingFormula::And(vec![
                    self.den(zw.clone(), zl)?,
                    self.ints(zw.clone(), zr.clone()),
                    self.ints(zr, zw),
                ]);
                RingFormula::exists(vec![w], body)
            }
            ArithAtom::StrictDivP(..) => unreachable!("macro expanded before translation"),
        })
    }

    fn sentence(&mut self, s: &ArithSentence) -> Result<RingFormula> {
        Ok(match s {
            ArithSentence::Atom(a) => self.atom(a)?,
            ArithSentence::And(xs) => RingFormula::And(xs.iter().map(|x| self.sentence(x)).collect::<Result<_>>()?),
            ArithSentence::Or(xs) => RingFormula::Or(xs.iter().map(|x| self.sentence(x)).collect::<Result<_>>()?),
            ArithSentence::Exists(v, body) => {
                let z = z_name(v);
                let nz = format!("n{z}");
                let zt = Term::var(&z);
                // z has nonnegative order and is invertible
                let member = self.ints(zt.clone(), Term::Int(1));
                let nonzero = RingFormula::exists(
                    vec![nz.clone()],
                    RingFormula::atom(RingAtom::Eq(Term::Mul(vec![zt, Term::var(&nz)]), Term::Int(1))),
                );
                RingFormula::exists(vec![z], RingFormula::And(vec![member, nonzero, self.sentence(body)?]))
            }
        })
    }
}

fn z_name(v: &str) -> String {
    format!("z_{v}")
}

/// Translate a sentence. The output does not depend on the characteristic.
pub fn translate(s: &ArithSentence, mode: TranslateMode, genus: u64, policy: ParamPolicy) -> Result<RingFormula> {
    if let Some(v) = s.free_vars().into_iter().next() {
        return Err(crate::error::Error::UnboundVariable(v));
    }
    let s = derive_strict_div(s);
    let param = match policy {
        ParamPolicy::FixedT => Term::T,
        ParamPolicy::FreeU | ParamPolicy::QuantifiedBl => Term::var(PARAM),
    };
    let mut ctx = Ctx { mode, genus, param, den_count: 0, phi_count: 0 };
    let body = ctx.sentence(&s)?;
    Ok(match policy {
        ParamPolicy::QuantifiedBl => RingFormula::exists(
            vec![PARAM.to_string()],
            RingFormula::And(vec![RingFormula::atom(RingAtom::Behaved(Term::var(PARAM))), body]),
        ),
        _ => body,
    })
}

/// Pretty-print `A u. (psi_C(u) | body[u := u/(u^2+1)])` with `psi_C`
/// spelled out for the nonsquare `alpha`. Display only: the universal
/// quantifier and the division are outside the existential fragment.
pub fn wrap_universal_psi_c(body: &RingFormula, alpha: i64) -> String {
    let v = |s: &str| Term::var(s);
    let sq = |s: &str| Term::Pow(Box::new(v(s)), 2);
    let form = |a: &str, b: &str| Term::Add(vec![sq(a), Term::Mul(vec![Term::Int(-alpha), sq(b)])]);
    let nonzero = |s: &str| RingFormula::exists(
        vec![format!("i{s}")],
        RingFormula::atom(RingAtom::Eq(Term::Mul(vec![v(s), v(&format!("i{s}"))]), Term::Int(1))),
    );
    let psi = RingFormula::exists(
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
        RingFormula::And(vec![
            RingFormula::Or(vec![nonzero("a"), nonzero("b"), nonzero("c"), nonzero("d")]),
            RingFormula::atom(RingAtom::Eq(form("a", "b"), Term::Mul(vec![v(PARAM), form("c", "d")]))),
        ]),
    );
    let inner = replace_symbol(&super::sexpr::print_ring(body), PARAM, "(/ u (+ (^ u 2) 1))");
    format!("(forall (u) (or {} {}))", super::sexpr::print_ring(&psi), inner)
}

fn replace_symbol(text: &str, sym: &str, by: &str) -> String {
    let mut out = String::new();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        out.push_str(if word == sym { by } else { word });
        word.clear();
    };
    for c in text.chars() {
        if c.is_whitespace() || c == '(' || c == ')' {
            flush(&mut word, &mut out);
            out.push(c);
        } else {
            word.push(c);
        }
    }
    flush(&mut word, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::arith::parse_arith;
    use crate::logic::sexpr::print_ring;

    #[test]
    fn atoms() {
        let s = parse_arith("E a. E b. E c. a = b + c").unwrap();
        let f = translate(&s, TranslateMode::Abstract, 0, ParamPolicy::FixedT).unwrap();
        let text = print_ring(&f);
        assert!(text.contains("(= z_a (* z_b z_c))"), "{text}");
        let s = parse_arith("E a. E b. a <= b").unwrap();
        let text = print_ring(&translate(&s, TranslateMode::Abstract, 0, ParamPolicy::FixedT).unwrap());
        assert!(text.contains("(ints z_b z_a t)"), "{text}");
        let s = parse_arith("E a. E b. a divp b").unwrap();
        let text = print_ring(&translate(&s, TranslateMode::Abstract, 0, ParamPolicy::FreeU).unwrap());
        assert!(text.contains("(exists (dp1) (and (den dp1 z_a) (ints dp1 z_b u) (ints z_b dp1 u)))"), "{text}");
    }

    #[test]
    fn expanded_and_quantified() {
        let s = parse_arith("E a. 1 divp a").unwrap();
        let f = translate(&s, TranslateMode::ExpandDenp, 0, ParamPolicy::QuantifiedBl).unwrap();
        assert!(f.free_vars().is_empty());
        assert!(!f.atoms().iter().any(|(a, _)| matches!(a, RingAtom::Den(..))));
        let text = print_ring(&f);
        assert!(text.starts_with("(exists (u) (and (B u)"));
        let w = wrap_universal_psi_c(&translate(&s, TranslateMode::Abstract, 0, ParamPolicy::FreeU).unwrap(), 1);
        assert!(w.starts_with("(forall (u) (or (exists (a b c d)"));
        assert!(w.contains("(ints z_a 1 (/ u (+ (^ u 2) 1)))"), "{w}");
    }
}
