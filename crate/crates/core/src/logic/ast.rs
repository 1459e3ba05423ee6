//! Formula trees for the arithmetic language `(N; 0, 1, +, |_p, <=)` and
//! for existential ring-language formulas over `F_q(t)`.

use std::collections::BTreeSet;

/// A summand of an arithmetic term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Summand {
    Zero,
    One,
    Var(String),
}

/// A nonempty sum of summands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArithTerm(pub Vec<Summand>);

impl ArithTerm {
    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.iter().filter_map(|s| match s {
            Summand::Var(v) => Some(v.as_str()),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArithAtom {
    Eq(ArithTerm, ArithTerm),
    /// `a |_p b`: one side is a power of `p` times the other.
    DivP(ArithTerm, ArithTerm),
    Le(ArithTerm, ArithTerm),
    /// Macro for `a |_p b & a <= b`.
    StrictDivP(ArithTerm, ArithTerm),
}

impl ArithAtom {
    pub fn sides(&self) -> (&ArithTerm, &ArithTerm) {
        match self {
            ArithAtom::Eq(a, b) | ArithAtom::DivP(a, b) | ArithAtom::Le(a, b) | ArithAtom::StrictDivP(a, b) => (a, b),
        }
    }
}

/// A positive-existential arithmetic sentence (or formula, while open).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArithSentence {
    Atom(ArithAtom),
    And(Vec<ArithSentence>),
    Or(Vec<ArithSentence>),
    Exists(String, Box<ArithSentence>),
}

impl ArithSentence {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            ArithSentence::Atom(a) => {
                let (l, r) = a.sides();
                for v in l.vars().chain(r.vars()) {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.to_string());
                    }
                }
            }
            ArithSentence::And(xs) | ArithSentence::Or(xs) => {
                for x in xs {
                    x.collect_free(bound, out);
                }
            }
            ArithSentence::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn uses_macro(&self) -> bool {
        match self {
            ArithSentence::Atom(a) => matches!(a, ArithAtom::StrictDivP(..)),
            ArithSentence::And(xs) | ArithSentence::Or(xs) => xs.iter().any(|x| x.uses_macro()),
            ArithSentence::Exists(_, b) => b.uses_macro(),
        }
    }
}

/// Ring-language terms. `T` is the constant `t` of `F_q(t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Int(i64),
    T,
    Add(Vec<Term>),
    Mul(Vec<Term>),
    Pow(Box<Term>, u32),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// Product of the factors, collapsing trivial cases.
    pub fn product(mut factors: Vec<Term>) -> Term {
        match factors.len() {
            0 => Term::Int(1),
            1 => factors.pop().unwrap(),
            _ => Term::Mul(factors),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Int(_) | Term::T => {}
            Term::Add(xs) | Term::Mul(xs) => xs.iter().for_each(|x| x.vars(out)),
            Term::Pow(b, _) => b.vars(out),
        }
    }

    /// Substitute variables by terms.
    pub fn rename(&self, f: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::Int(_) | Term::T => self.clone(),
            Term::Add(xs) => Term::Add(xs.iter().map(|x| x.rename(f)).collect()),
            Term::Mul(xs) => Term::Mul(xs.iter().map(|x| x.rename(f)).collect()),
            Term::Pow(b, e) => Term::Pow(Box::new(b.rename(f)), *e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingAtom {
    Eq(Term, Term),
    /// `F(x)`: `x` is nonconstant.
    Nonconst(Term),
    /// `B_l(x)`: `x` is l-behaved.
    Behaved(Term),
    /// `Den_p(x, y)`: `x = y^(p^s)` for some integer `s`.
    Den(Term, Term),
    /// `num/den` lies in `Ints_l` of the behaved factor of `param`.
    Ints { num: Term, den: Term, param: Term },
    /// `x` is a square.
    Sq(Term),
    /// The characteristic literal `p = 0`.
    Char(u64),
}

impl RingAtom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            RingAtom::Eq(a, b) | RingAtom::Den(a, b) => vec![a, b],
            RingAtom::Nonconst(a) | RingAtom::Behaved(a) | RingAtom::Sq(a) => vec![a],
            RingAtom::Ints { num, den, param } => vec![num, den, param],
            RingAtom::Char(_) => vec![],
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in self.terms() {
            t.vars(&mut out);
        }
        out
    }

    pub fn rename(&self, f: &dyn Fn(&str) -> Option<Term>) -> RingAtom {
        match self {
            RingAtom::Eq(a, b) => RingAtom::Eq(a.rename(f), b.rename(f)),
            RingAtom::Den(a, b) => RingAtom::Den(a.rename(f), b.rename(f)),
            RingAtom::Nonconst(a) => RingAtom::Nonconst(a.rename(f)),
            RingAtom::Behaved(a) => RingAtom::Behaved(a.rename(f)),
            RingAtom::Sq(a) => RingAtom::Sq(a.rename(f)),
            RingAtom::Ints { num, den, param } => RingAtom::Ints {
                num: num.rename(f),
                den: den.rename(f),
                param: param.rename(f),
            },
            RingAtom::Char(p) => RingAtom::Char(*p),
        }
    }
}

/// Existential ring formulas. Negation is admitted on atoms only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingFormula {
    Atom(RingAtom),
    Not(RingAtom),
    And(Vec<RingFormula>),
    Or(Vec<RingFormula>),
    Exists(Vec<String>, Box<RingFormula>),
}

impl RingFormula {
    pub fn and(mut xs: Vec<RingFormula>) -> RingFormula {
        if xs.len() == 1 {
            xs.pop().unwrap()
        } else {
            RingFormula::And(xs)
        }
    }

    pub fn or(mut xs: Vec<RingFormula>) -> RingFormula {
        if xs.len() == 1 {
            xs.pop().unwrap()
        } else {
            RingFormula::Or(xs)
        }
    }

    pub fn exists(vars: Vec<String>, body: RingFormula) -> RingFormula {
        if vars.is_empty() {
            body
        } else {
            RingFormula::Exists(vars, Box::new(body))
        }
    }

    pub fn atom(a: RingAtom) -> RingFormula {
        RingFormula::Atom(a)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            RingFormula::Atom(a) | RingFormula::Not(a) => {
                for v in a.vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            RingFormula::And(xs) | RingFormula::Or(xs) => {
                for x in xs {
                    x.collect_free(bound, out);
                }
            }
            RingFormula::Exists(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Substitute free variables; bound variables shadow.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Term>) -> RingFormula {
        match self {
            RingFormula::Atom(a) => RingFormula::Atom(a.rename(map)),
            RingFormula::Not(a) => RingFormula::Not(a.rename(map)),
            RingFormula::And(xs) => RingFormula::And(xs.iter().map(|x| x.substitute(map)).collect()),
            RingFormula::Or(xs) => RingFormula::Or(xs.iter().map(|x| x.substitute(map)).collect()),
            RingFormula::Exists(vs, body) => {
                let vs2 = vs.clone();
                let inner = move |name: &str| if vs2.iter().any(|v| v == name) { None } else { map(name) };
                RingFormula::Exists(vs.clone(), Box::new(body.substitute(&inner)))
            }
        }
    }

    /// Rename every bound variable to a fresh name produced by `fresh`.
    pub fn rename_bound(&self, fresh: &mut dyn FnMut(&str) -> String) -> RingFormula {
        match self {
            RingFormula::Atom(_) | RingFormula::Not(_) => self.clone(),
            RingFormula::And(xs) => RingFormula::And(xs.iter().map(|x| x.rename_bound(fresh)).collect()),
            RingFormula::Or(xs) => RingFormula::Or(xs.iter().map(|x| x.rename_bound(fresh)).collect()),
            RingFormula::Exists(vs, body) => {
                let new: Vec<String> = vs.iter().map(|v| fresh(v)).collect();
                let pairs: Vec<(String, String)> = vs.iter().cloned().zip(new.iter().cloned()).collect();
                let map = |name: &str| pairs.iter().find(|(o, _)| o == name).map(|(_, n)| Term::Var(n.clone()));
                let body = body.substitute(&map).rename_bound(fresh);
                RingFormula::Exists(new, Box::new(body))
            }
        }
    }

    /// Visit every atom (negated or not).
    pub fn atoms(&self) -> Vec<(&RingAtom, bool)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(&'a RingAtom, bool)>) {
        match self {
            RingFormula::Atom(a) => out.push((a, true)),
            RingFormula::Not(a) => out.push((a, false)),
            RingFormula::And(xs) | RingFormula::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
            RingFormula::Exists(_, b) => b.collect_atoms(out),
        }
    }

    /// Number of existentially quantified variables.
    pub fn quantifier_count(&self) -> usize {
        match self {
            RingFormula::Atom(_) | RingFormula::Not(_) => 0,
            RingFormula::And(xs) | RingFormula::Or(xs) => xs.iter().map(|x| x.quantifier_count()).sum(),
            RingFormula::Exists(vs, b) => vs.len() + b.quantifier_count(),
        }
    }
}
