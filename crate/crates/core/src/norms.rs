//! Norms from constant-field extensions `F_{q^l}(t) / F_q(t)` given by
//! Kummer (`X^l - a`) or Artin-Schreier (`X^p - X - a`) data, sums of two
//! squares in `F_q[t]`, and the predicate `psi_C`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::behaved::{is_l_behaved, BehavedReport};
use crate::error::{Error, Result};
use crate::funcfield::{Place, RationalFunction};
use crate::galois::{factor, is_prime, nonsquare_constant, Fq, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtensionKind {
    Kummer { l: u64, a: u32 },
    ArtinSchreier { a: u32 },
}

/// A degree-l constant-field extension, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSpec {
    field: Fq,
    kind: ExtensionKind,
    modulus: Poly,
}

impl ExtensionSpec {
    pub fn kummer(field: &Fq, l: u64, a: u32) -> Result<Self> {
        if !is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if l == field.characteristic() {
            return Err(Error::InvalidExtension(format!("Kummer degree {l} equals the characteristic")));
        }
        if (field.order() - 1) % l != 0 {
            return Err(Error::InvalidExtension(format!("{l} does not divide q - 1 = {}", field.order() - 1)));
        }
        let mut c = vec![0; l as usize + 1];
        c[0] = field.neg(a);
        c[l as usize] = 1;
        Self::checked(field, ExtensionKind::Kummer { l, a }, Poly::from_codes(field, c))
    }

    pub fn artin_schreier(field: &Fq, a: u32) -> Result<Self> {
        let p = field.characteristic() as usize;
        let mut c = vec![0; p + 1];
        c[0] = field.neg(a);
        c[1] = field.neg(1);
        c[p] = 1;
        Self::checked(field, ExtensionKind::ArtinSchreier { a }, Poly::from_codes(field, c))
    }

    fn checked(field: &Fq, kind: ExtensionKind, modulus: Poly) -> Result<Self> {
        if !modulus.is_irreducible()? {
            return Err(Error::InvalidExtension(format!("{} is reducible over F_{}", modulus.format_with("X"), field.spec())));
        }
        Ok(ExtensionSpec { field: field.clone(), kind, modulus })
    }

    /// Kummer data with the least admissible `a`.
    pub fn default_kummer(field: &Fq, l: u64) -> Result<Self> {
        let mut last = Error::InvalidExtension(format!("no admissible a for l = {l}"));
        for a in 1..field.order() as u32 {
            match Self::kummer(field, l, a) {
                Ok(s) => return Ok(s),
                Err(e @ Error::InvalidExtension(_)) => last = e,
                Err(e) => return Err(e),
            }
        }
        Err(last)
    }

    /// Artin-Schreier data with the least admissible `a`.
    pub fn default_artin_schreier(field: &Fq) -> Result<Self> {
        for a in 1..field.order() as u32 {
            if let Ok(s) = Self::artin_schreier(field, a) {
                return Ok(s);
            }
        }
        Err(Error::InvalidExtension("no admissible Artin-Schreier constant".into()))
    }

    /// The extension used for degree `l`: Artin-Schreier when `l = p`,
    /// Kummer otherwise.
    pub fn for_degree(field: &Fq, l: u64) -> Result<Self> {
        if l == field.characteristic() {
            Self::default_artin_schreier(field)
        } else {
            Self::default_kummer(field, l)
        }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn kind(&self) -> ExtensionKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg0()
    }

    /// The defining polynomial in `X`.
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// The constant `a` of the defining polynomial.
    pub fn constant(&self) -> u32 {
        match self.kind {
            ExtensionKind::Kummer { a, .. } | ExtensionKind::ArtinSchreier { a } => a,
        }
    }

    /// The conjugates of `alpha` as elements of `F_q[X]/(modulus)`.
    fn conjugates(&self) -> Vec<Poly> {
        let f = &self.field;
        let x = Poly::t(f);
        match self.kind {
            ExtensionKind::Kummer { l, .. } => {
                let xi = f.root_of_unity(l).expect("l divides q - 1");
                (0..l).map(|j| x.scale(f.pow(xi, j))).collect()
            }
            ExtensionKind::ArtinSchreier { .. } => {
                (0..f.characteristic() as i64).map(|j| x.add(&Poly::constant(f, f.from_int(j)))).collect()
            }
        }
    }

    /// Multiply coordinate vectors as elements of `F_{q^l}(t)`.
    pub fn coord_mul(&self, x: &[RationalFunction], y: &[RationalFunction]) -> Vec<RationalFunction> {
        let l = self.degree();
        let zero = RationalFunction::zero(&self.field);
        let mut prod = vec![zero.clone(); 2 * l - 1];
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        // alpha^l = -sum_{k<l} m_k alpha^k
        for top in (l..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[top], zero.clone());
            for k in 0..l {
                let m = self.modulus.coeff(k);
                if m != 0 {
                    let s = top - l + k;
                    prod[s] = prod[s].sub(&c.scale(m));
                }
            }
        }
        prod.truncate(l);
        prod
    }
}

impl fmt::Display for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[X]/({})", self.field.spec(), self.modulus.format_with("X"))
    }
}

impl Serialize for ExtensionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ExtensionSpec", 4)?;
        st.serialize_field("field", &self.field.spec().to_string())?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("modulus", &self.modulus.format_with("X"))?;
        st.end()
    }
}

/// The norm as a homogeneous polynomial in the coordinates `a_0..a_{l-1}`
/// with respect to the basis `1, alpha, .., alpha^(l-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormForm {
    spec: ExtensionSpec,
    terms: BTreeMap<Vec<u32>, u32>,
}

pub fn build_norm_form(spec: &ExtensionSpec) -> Result<NormForm> {
    let f = &spec.field;
    let l = spec.degree();
    let m = &spec.modulus;
    let mut acc: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
    acc.insert(vec![0; l], Poly::one(f));
    for alpha in spec.conjugates() {
        let mut powers = vec![Poly::one(f)];
        for _ in 1..l {
            let next = powers.last().unwrap().mul_mod(&alpha, m);
            powers.push(next);
        }
        let mut next: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (exp, c) in &acc {
            for (i, pw) in powers.iter().enumerate() {
                let mut e = exp.clone();
                e[i] += 1;
                let term = c.mul_mod(pw, m);
                let slot = next.entry(e).or_insert_with(|| Poly::zero(f));
                *slot = slot.add(&term);
            }
        }
        acc = next;
    }
    let mut terms = BTreeMap::new();
    for (e, c) in acc {
        if c.is_zero() {
            continue;
        }
        if !c.is_constant() {
            return Err(Error::InvalidExtension(format!("norm form coefficient {} is not a constant", c.format_with("alpha"))));
        }
        terms.insert(e, c.lead());
    }
    Ok(NormForm { spec: spec.clone(), terms })
}

impl NormForm {
    pub fn spec(&self) -> &ExtensionSpec {
        &self.spec
    }

    /// `(exponents, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u32)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[RationalFunction]) -> Result<RationalFunction> {
        let l = self.spec.degree();
        if x.len() != l {
            return Err(Error::InvalidExtension(format!("expected {l} coordinates, got {}", x.len())));
        }
        let f = &self.spec.field;
        let powers: Vec<Vec<RationalFunction>> = x
            .iter()
            .map(|xi| {
                let mut v = vec![RationalFunction::one(f)];
                for _ in 0..l {
                    let n = v.last().unwrap().mul(xi);
                    v.push(n);
                }
                v
            })
            .collect();
        let mut out = RationalFunction::zero(f);
        for (e, c) in &self.terms {
            let mut term = RationalFunction::constant(f, *c);
            for (i, &k) in e.iter().enumerate() {
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Evaluate at constant coordinates.
    pub fn eval_const(&self, x: &[u32]) -> u32 {
        let f = &self.spec.field;
        self.terms.iter().fold(0, |acc, (e, c)| {
            let t = e.iter().zip(x).fold(*c, |t, (&k, &xi)| f.mul(t, f.pow(xi, k as u64)));
            f.add(acc, t)
        })
    }
}

impl fmt::Display for NormForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = &self.spec.field;
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("a{i}") } else { format!("a{i}^{k}") })
                .collect();
            let mono = mono.join("*");
            parts.push(match (*c, mono.is_empty()) {
                (_, true) => field.format_elem(*c),
                (1, false) => mono,
                _ => format!("{}*{}", field.format_elem(*c), mono),
            });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl Serialize for NormForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn norm_of(x: &[RationalFunction], spec: &ExtensionSpec) -> Result<RationalFunction> {
    build_norm_form(spec)?.eval(x)
}

/// One place in the support of `u` and the local condition it imposes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormTraceRow {
    pub place: Place,
    pub degree: usize,
    pub v: i64,
    pub split: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormDecision {
    pub u: RationalFunction,
    pub extension: ExtensionSpec,
    pub is_norm: bool,
    pub trace: Vec<NormTraceRow>,
}

pub fn is_norm(u: &RationalFunction, spec: &ExtensionSpec) -> Result<NormDecision> {
    if u.is_zero() {
        return Err(Error::ZeroInput);
    }
    if u.field() != &spec.field {
        return Err(Error::FieldMismatch);
    }
    let l = spec.degree();
    let trace: Vec<NormTraceRow> = u
        .divisor()?
        .iter()
        .map(|(place, v)| {
            let degree = place.degree();
            let split = degree % l == 0;
            NormTraceRow { place: place.clone(), degree, v, split, ok: split || v % l as i64 == 0 }
        })
        .collect();
    Ok(NormDecision {
        u: u.clone(),
        extension: spec.clone(),
        is_norm: trace.iter().all(|r| r.ok),
        trace,
    })
}

/// Search for coordinates `b_i / d` with `d` monic and all degrees at most
/// `bound` whose norm is `u`. Candidates are ordered by `d`, then by
/// `(b_1, .., b_{l-1})`, with `b_0` solved for. `None` says nothing about
/// larger bounds.
pub fn norm_witness_search(u: &RationalFunction, spec: &ExtensionSpec, bound: usize) -> Result<Option<Vec<RationalFunction>>> {
    if u.field() != &spec.field {
        return Err(Error::FieldMismatch);
    }
    let f = &spec.field;
    let l = spec.degree();
    if u.is_zero() {
        return Ok(Some(vec![RationalFunction::zero(f); l]));
    }
    let form = build_norm_form(spec)?;
    let dens: Vec<Poly> = (0..=bound).flat_map(|k| crate::galois::enumerate_monic(f, k)).collect();
    let two = matches!(spec.kind, ExtensionKind::Kummer { l: 2, .. });
    let found = dens.par_iter().find_map_first(|d| {
        // norm(b / d) = N(b) / d^l, so N(b) = r := u d^l
        let r = u.mul(&RationalFunction::from_poly(d.pow(l as u64)));
        if !r.is_polynomial() {
            return None;
        }
        let r = r.num().clone();
        let b = if two { solve_quadratic(spec, &r, bound) } else { solve_general(&form, &r, bound) }?;
        Some(b.into_iter().map(|bi| RationalFunction::new(bi, d.clone()).unwrap()).collect::<Vec<_>>())
    });
    if let Some(w) = &found {
        let n = form.eval(w)?;
        if &n != u {
            return Err(Error::Hypothesis(format!("witness search produced norm {n}, expected {u}")));
        }
    }
    Ok(found)
}

/// `b_0^2 - a b_1^2 = r` with `deg b_i <= bound`.
fn solve_quadratic(spec: &ExtensionSpec, r: &Poly, bound: usize) -> Option<Vec<Poly>> {
    let f = &spec.field;
    let a = spec.constant();
    // `a` is a nonsquare, so the leading terms never cancel and
    // deg r = 2 max(deg b_0, deg b_1).
    let dr = r.deg0();
    if dr % 2 == 1 || dr / 2 > bound {
        return None;
    }
    let k = dr / 2;
    let q = f.order();
    // evaluation filter: r(x) + a b_1(x)^2 must be a square at every x in F_q
    let points: Vec<u32> = if q <= 64 { (0..q as u32).collect() } else { Vec::new() };
    let r_vals: Vec<u32> = points.iter().map(|&x| r.eval(x)).collect();
    let squares: Vec<bool> = (0..q.min(64) as u32).map(|c| f.is_square(c)).collect();
    let total = (q as u128).checked_pow(k as u32 + 1)?;
    let mut digits = vec![0u32; k + 1];
    'cand: for idx in 0..total {
        let mut rest = idx;
        for dgt in digits.iter_mut() {
            *dgt = (rest % q as u128) as u32;
            rest /= q as u128;
        }
        for (pi, &x) in points.iter().enumerate() {
            let bx = digits.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c));
            let v = f.add(r_vals[pi], f.mul(a, f.mul(bx, bx)));
            if !squares[v as usize] {
                continue 'cand;
            }
        }
        let b1 = Poly::from_codes(f, digits.clone());
        let rhs = r.add(&b1.mul(&b1).scale(a));
        if let Some(s) = rhs.sqrt() {
            let t = s.neg();
            let b0 = if t < s { t } else { s };
            return Some(vec![b0, b1]);
        }
    }
    None
}

/// Enumerate `b_1..b_{l-1}` and solve `N(b) = r` for polynomial `b_0`.
fn solve_general(form: &NormForm, r: &Poly, bound: usize) -> Option<Vec<Poly>> {
    let f = &form.spec.field;
    let l = form.spec.degree();
    let q = f.order() as u128;
    let per = q.checked_pow(bound as u32 + 1)?;
    let total = per.checked_pow(l as u32 - 1)?;
    let top = form.terms.keys().map(|e| e[0] as usize).max().unwrap_or(0);
    for idx in 0..total {
        let mut rest = idx;
        let mut rest_b = Vec::with_capacity(l - 1);
        for _ in 1..l {
            rest_b.push(RationalFunction::from_poly(Poly::from_index(f, rest % per)));
            rest /= per;
        }
        // coefficients of N as a polynomial in b_0
        let mut coeffs = vec![RationalFunction::zero(f); top + 1];
        for (e, c) in &form.terms {
            let mut term = RationalFunction::constant(f, *c);
            for (i, &k) in e.iter().enumerate().skip(1) {
                term = term.mul(&rest_b[i - 1].pow(k as i64).unwrap());
            }
            coeffs[e[0] as usize] = coeffs[e[0] as usize].add(&term);
        }
        coeffs[0] = coeffs[0].sub(&RationalFunction::from_poly(r.clone()));
        let roots = match crate::funcfield::rational_roots(&coeffs) {
            Some(rs) => rs,
            None => vec![RationalFunction::zero(f)],
        };
        let best = roots
            .into_iter()
            .filter(|x| x.is_polynomial() && x.num().deg0() <= bound)
            .map(|x| x.num().clone())
            .min();
        if let Some(b0) = best {
            let mut out = vec![b0];
            out.extend(rest_b.into_iter().map(|x| x.num().clone()));
            return Some(out);
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct Corollary36Report {
    pub u: Poly,
    pub l: u64,
    pub behaved: BehavedReport,
    pub norm: NormDecision,
    /// Exactly one of "l-behaved" and "norm" holds.
    pub complementary: bool,
}

/// Compute both sides of the behaved/norm dichotomy for a polynomial.
pub fn corollary36_check(u: &Poly, l: u64, spec: &ExtensionSpec) -> Result<Corollary36Report> {
    let p = u.field().characteristic();
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !(l == p || (p - 1) % l == 0) {
        return Err(Error::Hypothesis(format!("need l | p - 1 or l = p, got p = {p}, l = {l}")));
    }
    if spec.degree() as u64 != l {
        return Err(Error::InvalidExtension(format!("extension degree {} differs from l = {l}", spec.degree())));
    }
    let rf = RationalFunction::from_poly(u.clone());
    let behaved = is_l_behaved(&rf, l)?;
    let norm = is_norm(&rf, spec)?;
    let complementary = behaved.is_behaved != norm.is_norm;
    Ok(Corollary36Report { u: u.clone(), l, behaved, norm, complementary })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoSquaresRow {
    pub factor: Poly,
    pub degree: usize,
    pub mult: u32,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoSquares {
    pub f: Poly,
    pub decision: bool,
    pub witness: Option<(Poly, Poly)>,
    pub trace: Vec<TwoSquaresRow>,
}

fn brahmagupta(x: &(Poly, Poly), y: &(Poly, Poly)) -> (Poly, Poly) {
    let (a, b) = x;
    let (c, d) = y;
    (a.mul(c).sub(&b.mul(d)), a.mul(d).add(&b.mul(c)))
}

/// Decide whether `f = a^2 + b^2` in `F_q[t]`, `q = p^n` with `p = 3 mod 4`
/// and `n` odd, and build a witness when it is.
pub fn two_squares(f: &Poly) -> Result<TwoSquares> {
    let field = f.field();
    let p = field.characteristic();
    if p % 4 != 3 || field.degree() % 2 == 0 {
        return Err(Error::Hypothesis(format!("two_squares needs p = 3 mod 4 and odd n, got F_{}", field.spec())));
    }
    let zero = Poly::zero(field);
    if f.is_zero() {
        return Ok(TwoSquares { f: f.clone(), decision: true, witness: Some((zero.clone(), zero)), trace: vec![] });
    }
    let fac = factor(f)?;
    let trace: Vec<TwoSquaresRow> = fac
        .factors
        .iter()
        .map(|(g, e)| TwoSquaresRow {
            factor: g.clone(),
            degree: g.deg0(),
            mult: *e,
            ok: g.deg0() % 2 == 0 || e % 2 == 0,
        })
        .collect();
    let decision = trace.iter().all(|r| r.ok);
    if !decision {
        return Ok(TwoSquares { f: f.clone(), decision, witness: None, trace });
    }
    let mut acc = constant_two_squares(field, fac.unit);
    for (g, e) in &fac.factors {
        let half = g.pow(*e as u64 / 2);
        acc = brahmagupta(&acc, &(half, zero.clone()));
        if e % 2 == 1 {
            let rep = irreducible_two_squares(g)?;
            acc = brahmagupta(&acc, &rep);
        }
    }
    // canonical sign for each part, larger part first
    let canon = |x: Poly| {
        let n = x.neg();
        if n < x { n } else { x }
    };
    let (a, b) = (canon(acc.0), canon(acc.1));
    let (a, b) = if a < b { (b, a) } else { (a, b) };
    if a.mul(&a).add(&b.mul(&b)) != *f {
        return Err(Error::Hypothesis(format!("two-squares witness does not reassemble {f}")));
    }
    Ok(TwoSquares { f: f.clone(), decision, witness: Some((a, b)), trace })
}

fn constant_two_squares(field: &Fq, c: u32) -> (Poly, Poly) {
    for x in 0..field.order() as u32 {
        let rest = field.sub(c, field.mul(x, x));
        if let Some(y) = field.sqrt(rest) {
            return (Poly::constant(field, x), Poly::constant(field, y));
        }
    }
    unreachable!("every element of a finite field is a sum of two squares")
}

/// `g = h^2 + k^2` for an irreducible `g` of even degree; `deg h <= deg g / 2`
/// because `-1` is a nonsquare and the top terms cannot cancel.
fn irreducible_two_squares(g: &Poly) -> Result<(Poly, Poly)> {
    let field = g.field();
    let half = g.deg0() / 2;
    let total = (field.order() as u128).pow(half as u32 + 1);
    for idx in 0..total {
        let h = Poly::from_index(field, idx);
        if let Some(k) = g.sub(&h.mul(&h)).sqrt() {
            return Ok((h, k));
        }
    }
    Err(Error::SearchExhausted(format!("two-squares representation of {g}"), g.deg0()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiDecision {
    pub u: RationalFunction,
    pub alpha: u32,
    pub holds: bool,
    /// `(a, b, c, d)` with `a^2 - alpha b^2 = u (c^2 - alpha d^2)`.
    pub witness: Option<[Poly; 4]>,
}

/// `psi_C(u)`: some nontrivial `(a, b, c, d)` has
/// `a^2 - alpha b^2 = u (c^2 - alpha d^2)`, `alpha` the least nonsquare.
/// The witness is searched with numerator and denominator degrees up to
/// `bound`.
pub fn psi_c(u: &RationalFunction, bound: usize) -> Result<PsiDecision> {
    let field = u.field();
    if field.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let alpha = nonsquare_constant(field)?.code();
    let zero = Poly::zero(field);
    if u.is_zero() {
        let w = [zero.clone(), zero.clone(), Poly::one(field), zero];
        return Ok(PsiDecision { u: u.clone(), alpha, holds: true, witness: Some(w) });
    }
    let spec = ExtensionSpec::kummer(field, 2, alpha)?;
    let holds = is_norm(u, &spec)?.is_norm;
    let witness = if holds {
        norm_witness_search(u, &spec, bound)?.map(|x| {
            // x_i = b_i / c share the monic denominator c
            let c = x[0].den().clone();
            let c = if x[1].den().deg0() > c.deg0() { x[1].den().clone() } else { c };
            let a = x[0].num().mul(&c.div_exact(x[0].den()).unwrap());
            let b = x[1].num().mul(&c.div_exact(x[1].den()).unwrap());
            [a, b, c, zero.clone()]
        })
    } else {
        None
    };
    Ok(PsiDecision { u: u.clone(), alpha, holds, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(f: &Fq, s: &str) -> RationalFunction {
        RationalFunction::parse(f, s).unwrap()
    }

    #[test]
    fn kummer_form() {
        let f = Fq::prime(3).unwrap();
        let spec = ExtensionSpec::kummer(&f, 2, 2).unwrap();
        let form = build_norm_form(&spec).unwrap();
        assert_eq!(form.to_string(), "a0^2+a1^2");
        assert_eq!(form.eval(&[rf(&f, "t"), rf(&f, "1")]).unwrap(), rf(&f, "t^2+1"));
        assert_eq!(form.eval(&[rf(&f, "0"), rf(&f, "1")]).unwrap(), rf(&f, "1"));
        assert!(ExtensionSpec::kummer(&f, 2, 1).is_err());
        assert!(ExtensionSpec::kummer(&f, 3, 2).is_err());
    }

    #[test]
    fn artin_schreier_form() {
        let f = Fq::prime(3).unwrap();
        let spec = ExtensionSpec::artin_schreier(&f, 1).unwrap();
        let form = build_norm_form(&spec).unwrap();
        assert_eq!(form.total_degree(), 3);
        // N(x) = x^((q^3-1)/(q-1)) computed in F_27 = F_3[X]/(X^3-X-1)
        let m = spec.modulus().clone();
        for idx in 0..27u128 {
            let x = Poly::from_index(&f, idx);
            let coords: Vec<u32> = (0..3).map(|i| x.coeff(i)).collect();
            let direct = x.pow_mod(13, &m);
            assert_eq!(Poly::constant(&f, form.eval_const(&coords)), direct, "x = {x}");
        }
    }

    #[test]
    fn decisions() {
        let f = Fq::prime(3).unwrap();
        let spec = ExtensionSpec::kummer(&f, 2, 2).unwrap();
        assert!(!is_norm(&rf(&f, "t"), &spec).unwrap().is_norm);
        assert!(is_norm(&rf(&f, "t^2"), &spec).unwrap().is_norm);
        assert!(is_norm(&rf(&f, "t^2+1"), &spec).unwrap().is_norm);
        assert!(is_norm(&rf(&f, "0"), &spec).is_err());
        let w = norm_witness_search(&rf(&f, "t^2"), &spec, 1).unwrap().unwrap();
        assert_eq!(w, vec![rf(&f, "t"), rf(&f, "0")]);
        assert!(norm_witness_search(&rf(&f, "t"), &spec, 3).unwrap().is_none());
        let u = rf(&f, "(t^2+1)^3/(t^2+2)^2");
        let w = norm_witness_search(&u, &spec, 3).unwrap().unwrap();
        assert_eq!(norm_of(&w, &spec).unwrap(), u);
    }

    #[test]
    fn artin_schreier_witness() {
        let f = Fq::prime(3).unwrap();
        let spec = ExtensionSpec::artin_schreier(&f, 1).unwrap();
        let u = rf(&f, "t^3+2*t+2");
        assert!(is_norm(&u, &spec).unwrap().is_norm);
        let w = norm_witness_search(&u, &spec, 1).unwrap().unwrap();
        assert_eq!(norm_of(&w, &spec).unwrap(), u);
        assert!(norm_witness_search(&rf(&f, "t"), &spec, 1).unwrap().is_none());
    }

    #[test]
    fn leahey() {
        let f = Fq::prime(3).unwrap();
        let p = |s: &str| Poly::parse(&f, s).unwrap();
        let r = two_squares(&p("t^2+1")).unwrap();
        assert!(r.decision);
        assert_eq!(r.witness, Some((p("t"), p("1"))));
        assert!(!two_squares(&p("t")).unwrap().decision);
        assert!(!two_squares(&p("t*(t+1)^2")).unwrap().decision);
        let f5 = Fq::prime(5).unwrap();
        assert!(two_squares(&Poly::t(&f5)).is_err());
    }

    #[test]
    fn psi() {
        let f = Fq::prime(3).unwrap();
        assert!(!psi_c(&rf(&f, "t"), 2).unwrap().holds);
        let d = psi_c(&rf(&f, "t^2"), 2).unwrap();
        let p = |s: &str| Poly::parse(&f, s).unwrap();
        assert_eq!(d.witness, Some([p("t"), p("0"), p("1"), p("0")]));
    }

    #[test]
    fn corollary() {
        let f = Fq::prime(3).unwrap();
        let spec = ExtensionSpec::for_degree(&f, 2).unwrap();
        let t = Poly::t(&f);
        let r = corollary36_check(&t, 2, &spec).unwrap();
        assert!(r.behaved.is_behaved && !r.norm.is_norm && r.complementary);
        let r = corollary36_check(&t.mul(&t), 2, &spec).unwrap();
        assert!(!r.behaved.is_behaved && r.norm.is_norm);
        assert!(corollary36_check(&t, 5, &spec).is_err());
    }
}
