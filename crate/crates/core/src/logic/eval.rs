//! Bounded search for witnesses of existential ring formulas over `F_q(t)`.
//!
//! The search is a backtracking solver. A variable pinned down by an
//! equation in which it is the only unknown ranges over the roots of that
//! equation; a variable in a `Den` atom whose other side is known ranges
//! over the Frobenius orbit; anything else ranges first over powers of `t`
//! and of the `Ints` parameters, then over all rational functions of
//! bounded height.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::ast::{RingAtom, RingFormula, Term};
use super::translate::PARAM;
use crate::behaved::{ints_member_at, is_l_behaved};
use crate::error::{Error, Result};
use crate::funcfield::{enumerate_rationals, rational_roots, Place, RationalFunction};
use crate::galois::Fq;
use crate::power::{den_p, is_square};

#[derive(Debug, Clone)]
pub struct EvalBudget {
    /// Largest numerator or denominator degree of a witness.
    pub degree_bound: usize,
    pub field: Fq,
    /// Cap on the number of generic candidates tried per variable choice.
    pub max_enumeration: Option<usize>,
    /// Cap on the total number of assignments.
    pub max_steps: Option<u64>,
}

impl EvalBudget {
    pub fn new(field: &Fq, degree_bound: usize) -> Self {
        EvalBudget { degree_bound, field: field.clone(), max_enumeration: Some(2000), max_steps: Some(1_000_000) }
    }

    /// No caps besides the degree bound.
    pub fn exhaustive(field: &Fq, degree_bound: usize) -> Self {
        EvalBudget { degree_bound, field: field.clone(), max_enumeration: None, max_steps: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum RingOutcome {
    True { witnesses: BTreeMap<String, RationalFunction> },
    /// No witness found. `truncated` is set when a cap cut the search short.
    FalseAtBound { truncated: bool },
}

impl RingOutcome {
    pub fn is_true(&self) -> bool {
        matches!(self, RingOutcome::True { .. })
    }
}

type Env = BTreeMap<String, RationalFunction>;

struct Solver<'a> {
    budget: &'a EvalBudget,
    p: u64,
    l: u64,
    t: RationalFunction,
    ladder_only: bool,
    steps: u64,
    truncated: bool,
    aborted: bool,
    used: HashSet<String>,
    behaved: HashMap<RationalFunction, Option<Vec<(Place, i64)>>>,
    witness: Option<Env>,
}

/// Evaluate `phi` with the free variable `u` (if any) bound to `u`.
pub fn eval_ring(phi: &RingFormula, u: &RationalFunction, l: u64, budget: &EvalBudget) -> Result<RingOutcome> {
    if u.field() != &budget.field {
        return Err(Error::FieldMismatch);
    }
    if let Some(v) = phi.free_vars().into_iter().find(|v| v != PARAM) {
        return Err(Error::UnboundVariable(v));
    }
    let mut solver = Solver {
        budget,
        p: budget.field.characteristic(),
        l,
        t: RationalFunction::t(&budget.field),
        ladder_only: true,
        steps: 0,
        truncated: false,
        aborted: false,
        used: HashSet::new(),
        behaved: HashMap::new(),
        witness: None,
    };
    for ladder_only in [true, false] {
        solver.ladder_only = ladder_only;
        solver.used = [PARAM.to_string()].into();
        let mut env = Env::new();
        env.insert(PARAM.to_string(), u.clone());
        if solver.solve(vec![phi.clone()], &mut env)? {
            let mut witnesses = solver.witness.take().unwrap_or_default();
            witnesses.remove(PARAM);
            return Ok(RingOutcome::True { witnesses });
        }
        if solver.aborted {
            break;
        }
    }
    Ok(RingOutcome::FalseAtBound { truncated: solver.truncated })
}

fn unknowns(a: &RingAtom, env: &Env) -> Vec<String> {
    a.vars().into_iter().filter(|v| !env.contains_key(v)).collect()
}

enum Pending {
    Lit(RingAtom, bool),
    Or(Vec<RingFormula>),
    Fail,
}

impl Pending {
    fn into_formula(self) -> RingFormula {
        match self {
            Pending::Lit(a, true) => RingFormula::Atom(a),
            Pending::Lit(a, false) => RingFormula::Not(a),
            Pending::Or(xs) => RingFormula::Or(xs),
            Pending::Fail => RingFormula::Or(vec![]),
        }
    }
}

impl Solver<'_> {
    fn field(&self) -> &Fq {
        &self.budget.field
    }

    fn fresh(&mut self, v: &str) -> String {
        let mut name = v.to_string();
        let mut k = 2;
        while self.used.contains(&name) {
            name = format!("{v}_{k}");
            k += 1;
        }
        self.used.insert(name.clone());
        name
    }

    fn term(&self, t: &Term, env: &Env) -> Result<RationalFunction> {
        Ok(match t {
            Term::Var(v) => env.get(v).cloned().ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            Term::Int(i) => RationalFunction::from_int(self.field(), *i),
            Term::T => self.t.clone(),
            Term::Add(xs) => {
                let mut acc = RationalFunction::zero(self.field());
                for x in xs {
                    acc = acc.add(&self.term(x, env)?);
                }
                acc
            }
            Term::Mul(xs) => {
                let mut acc = RationalFunction::one(self.field());
                for x in xs {
                    acc = acc.mul(&self.term(x, env)?);
                }
                acc
            }
            Term::Pow(b, e) => self.term(b, env)?.pow(*e as i64)?,
        })
    }

    /// `t` as a polynomial in the single unknown `v`.
    fn term_poly(&self, t: &Term, v: &str, env: &Env) -> Result<Vec<RationalFunction>> {
        let f = self.field();
        Ok(match t {
            Term::Var(x) if x == v => vec![RationalFunction::zero(f), RationalFunction::one(f)],
            Term::Add(xs) => {
                let mut acc = vec![RationalFunction::zero(f)];
                for x in xs {
                    let p = self.term_poly(x, v, env)?;
                    if p.len() > acc.len() {
                        acc.resize(p.len(), RationalFunction::zero(f));
                    }
                    for (i, c) in p.iter().enumerate() {
                        acc[i] = acc[i].add(c);
                    }
                }
                acc
            }
            Term::Mul(xs) => {
                let mut acc = vec![RationalFunction::one(f)];
                for x in xs {
                    acc = poly_mul(&acc, &self.term_poly(x, v, env)?, f);
                }
                acc
            }
            Term::Pow(b, e) => {
                let base = self.term_poly(b, v, env)?;
                let mut acc = vec![RationalFunction::one(f)];
                for _ in 0..*e {
                    acc = poly_mul(&acc, &base, f);
                }
                acc
            }
            _ => vec![self.term(t, env)?],
        })
    }

    fn behaved_factor(&mut self, x: &RationalFunction) -> Result<Option<Vec<(Place, i64)>>> {
        if x.is_zero() || x.is_constant() {
            return Ok(None);
        }
        if let Some(c) = self.behaved.get(x) {
            return Ok(c.clone());
        }
        let rep = is_l_behaved(x, self.l)?;
        let out = rep.is_behaved.then(|| rep.factor());
        self.behaved.insert(x.clone(), out.clone());
        Ok(out)
    }

    fn atom(&mut self, a: &RingAtom, env: &Env) -> Result<bool> {
        Ok(match a {
            RingAtom::Eq(x, y) => self.term(x, env)? == self.term(y, env)?,
            RingAtom::Nonconst(x) => !self.term(x, env)?.is_constant(),
            RingAtom::Behaved(x) => {
                let x = self.term(x, env)?;
                self.behaved_factor(&x)?.is_some()
            }
            RingAtom::Den(x, y) => {
                let (x, y) = (self.term(x, env)?, self.term(y, env)?);
                match (x.is_zero(), y.is_zero()) {
                    (true, true) => true,
                    (false, false) => den_p(&x, &y)?.is_some(),
                    _ => false,
                }
            }
            RingAtom::Ints { num, den, param } => {
                let den = self.term(den, env)?;
                if den.is_zero() {
                    return Ok(false);
                }
                let w = self.term(num, env)?.div(&den)?;
                let param = self.term(param, env)?;
                match self.behaved_factor(&param)? {
                    Some(factor) => ints_member_at(&w, &factor),
                    None => false,
                }
            }
            RingAtom::Sq(x) => is_square(&self.term(x, env)?).is_square,
            RingAtom::Char(p) => *p == self.p,
        })
    }

    fn tick(&mut self) -> bool {
        self.steps += 1;
        if self.budget.max_steps.is_some_and(|m| self.steps > m) {
            self.aborted = true;
            self.truncated = true;
        }
        !self.aborted
    }

    /// Check a ground literal, or queue it.
    fn literal(&mut self, a: RingAtom, want: bool, env: &Env, pending: &mut Vec<Pending>) -> Result<()> {
        if unknowns(&a, env).is_empty() {
            if self.atom(&a, env)? != want {
                pending.push(Pending::Fail);
            }
        } else {
            pending.push(Pending::Lit(a, want));
        }
        Ok(())
    }

    fn solve(&mut self, goals: Vec<RingFormula>, env: &mut Env) -> Result<bool> {
        if self.aborted {
            return Ok(false);
        }
        let mut work: VecDeque<RingFormula> = goals.into();
        let mut pending = Vec::new();
        while let Some(g) = work.pop_front() {
            match g {
                RingFormula::And(xs) => {
                    for x in xs.into_iter().rev() {
                        work.push_front(x);
                    }
                }
                RingFormula::Exists(vs, body) => {
                    let names: Vec<(String, String)> = vs.iter().map(|v| (v.clone(), self.fresh(v))).collect();
                    let body = body.substitute(&|n: &str| {
                        names.iter().find(|(o, _)| o == n).map(|(_, new)| Term::Var(new.clone()))
                    });
                    work.push_front(body);
                }
                RingFormula::Atom(a) => self.literal(a, true, env, &mut pending)?,
                RingFormula::Not(a) => self.literal(a, false, env, &mut pending)?,
                RingFormula::Or(xs) => {
                    if xs.is_empty() {
                        return Ok(false);
                    }
                    pending.push(Pending::Or(xs));
                }
            }
        }
        if pending.iter().any(|x| matches!(x, Pending::Fail)) {
            return Ok(false);
        }
        if pending.is_empty() {
            self.witness = Some(env.clone());
            return Ok(true);
        }

        // an equation in a single unknown fixes it up to finitely many roots
        let mut best: Option<(String, Vec<RationalFunction>)> = None;
        for item in &pending {
            if let Pending::Lit(a @ RingAtom::Eq(x, y), true) = item {
                let un = unknowns(a, env);
                if un.len() != 1 {
                    continue;
                }
                let v = &un[0];
                let mut lhs = self.term_poly(x, v, env)?;
                let rhs = self.term_poly(y, v, env)?;
                if rhs.len() > lhs.len() {
                    lhs.resize(rhs.len(), RationalFunction::zero(self.field()));
                }
                for (i, c) in rhs.iter().enumerate() {
                    lhs[i] = lhs[i].sub(c);
                }
                if let Some(roots) = rational_roots(&lhs) {
                    let roots: Vec<_> = roots.into_iter().filter(|r| r.height() <= self.budget.degree_bound).collect();
                    if best.as_ref().is_none_or(|(_, b)| roots.len() < b.len()) {
                        best = Some((v.clone(), roots));
                    }
                }
            }
        }
        if let Some((v, cands)) = best {
            return self.branch(&v, cands, pending, env);
        }

        if let Some(i) = pending.iter().position(|x| matches!(x, Pending::Or(_))) {
            let Pending::Or(xs) = pending.remove(i) else { unreachable!() };
            let rest: Vec<RingFormula> = pending.into_iter().map(Pending::into_formula).collect();
            for d in xs {
                let mut goals = rest.clone();
                goals.push(d);
                if self.solve(goals, env)? {
                    return Ok(true);
                }
                if self.aborted {
                    break;
                }
            }
            return Ok(false);
        }

        // Den with one side known
        let mut den_choice = None;
        'den: for item in &pending {
            if let Pending::Lit(RingAtom::Den(x, y), true) = item {
                for (known, other) in [(y, x), (x, y)] {
                    if let Term::Var(v) = other {
                        if !env.contains_key(v) && known.vars_in(env) {
                            den_choice = Some((v.clone(), self.term(known, env)?));
                            break 'den;
                        }
                    }
                }
            }
        }
        if let Some((v, k)) = den_choice {
            let cands = self.orbit(&k);
            return self.branch(&v, cands, pending, env);
        }

        // most frequent unknown
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for item in &pending {
            if let Pending::Lit(a, _) = item {
                for v in unknowns(a, env) {
                    *counts.entry(v).or_default() += 1;
                }
            }
        }
        let v = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map(|(v, _)| v.clone()).unwrap();
        let ladder = self.ladder(&pending, env)?;
        let mut cands = ladder.clone();
        if !self.ladder_only {
            let seen: HashSet<RationalFunction> = ladder.into_iter().collect();
            let cap = self.budget.max_enumeration.unwrap_or(usize::MAX);
            let field = self.budget.field.clone();
            let mut it = enumerate_rationals(&field, self.budget.degree_bound).filter(|x| !seen.contains(x));
            cands.extend(it.by_ref().take(cap));
            if it.next().is_some() {
                self.truncated = true;
            }
        } else {
            self.truncated = true;
        }
        self.branch(&v, cands, pending, env)
    }

    fn branch(&mut self, v: &str, cands: Vec<RationalFunction>, pending: Vec<Pending>, env: &mut Env) -> Result<bool> {
        let goals: Vec<RingFormula> = pending.into_iter().map(Pending::into_formula).collect();
        for c in cands {
            if !self.tick() {
                return Ok(false);
            }
            env.insert(v.to_string(), c);
            if self.solve(goals.clone(), env)? {
                return Ok(true);
            }
            env.remove(v);
        }
        Ok(false)
    }

    /// `x^(p^s)` for all integers `s` within the height bound.
    fn orbit(&self, x: &RationalFunction) -> Vec<RationalFunction> {
        if x.is_zero() {
            return vec![x.clone()];
        }
        let bound = self.budget.degree_bound;
        let mut out = Vec::new();
        if x.height() <= bound {
            out.push(x.clone());
        }
        let mut cur = x.clone();
        loop {
            cur = cur.frobenius_pow(1);
            if cur.height() > bound || out.contains(&cur) || cur == *x {
                break;
            }
            out.push(cur.clone());
        }
        let mut cur = x.clone();
        while let Some(r) = cur.pth_root() {
            if out.contains(&r) || r == *x {
                break;
            }
            if r.height() <= bound {
                out.push(r.clone());
            }
            cur = r;
        }
        out
    }

    /// Powers of `t` and of the known `Ints` parameters, then zero.
    fn ladder(&self, pending: &[Pending], env: &Env) -> Result<Vec<RationalFunction>> {
        let mut bases = vec![self.t.clone()];
        for item in pending {
            if let Pending::Lit(RingAtom::Ints { param, .. }, _) = item {
                if param.vars_in(env) {
                    let b = self.term(param, env)?;
                    if !b.is_constant() && !bases.contains(&b) {
                        bases.push(b);
                    }
                }
            }
        }
        let mut out = vec![RationalFunction::one(self.field())];
        for b in bases {
            let mut cur = b.clone();
            while cur.height() <= self.budget.degree_bound {
                if !out.contains(&cur) {
                    out.push(cur.clone());
                }
                cur = cur.mul(&b);
            }
        }
        out.push(RationalFunction::zero(self.field()));
        Ok(out)
    }
}

fn poly_mul(a: &[RationalFunction], b: &[RationalFunction], f: &Fq) -> Vec<RationalFunction> {
    let mut out = vec![RationalFunction::zero(f); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

impl Term {
    /// Every variable of the term is assigned in `env`.
    fn vars_in(&self, env: &Env) -> bool {
        let mut vs = std::collections::BTreeSet::new();
        self.vars(&mut vs);
        vs.iter().all(|v| env.contains_key(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::sexpr::parse_ring;

    fn run(text: &str, p: u64, bound: usize) -> RingOutcome {
        let f = Fq::prime(p).unwrap();
        let phi = parse_ring(text).unwrap();
        eval_ring(&phi, &RationalFunction::t(&f), 2, &EvalBudget::new(&f, bound)).unwrap()
    }

    #[test]
    fn atoms() {
        assert!(run("(ints (^ u 2) 1 u)", 3, 4).is_true());
        assert!(!run("(F 1)", 3, 4).is_true());
        assert!(run("(not (F 1))", 3, 4).is_true());
        assert!(run("(exists (x) (and (= (* x x) (* t t)) (F x)))", 5, 2).is_true());
    }

    #[test]
    fn solving() {
        match run("(exists (x y) (and (den y x) (= x (+ t 1)) (F y) (not (= y x))))", 3, 3) {
            RingOutcome::True { witnesses } => {
                assert_eq!(witnesses["y"], RationalFunction::parse(&Fq::prime(3).unwrap(), "t^3+1").unwrap());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(run("(exists (x) (= (* x x) t))", 3, 6), RingOutcome::FalseAtBound { truncated: false });
        assert!(!run("(or)", 3, 2).is_true());
    }
}
