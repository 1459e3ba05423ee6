//! p-power towers: the Denef relation `x = y^(p^s)`, squares in `F_q(t)`,
//! Pasten's square criterion and the formulas built from it.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::funcfield::RationalFunction;
use crate::galois::{enumerate_monic_irreducibles, factor, is_prime, necklace_count, Fq, Poly};
use crate::logic::ast::{RingAtom, RingFormula, Term};

/// `Some(s)` with `f = h^(p^s)`, else `None`.
///
/// For nonconstant inputs `s` is unique. Constants form finite Frobenius
/// orbits; there the representative of least absolute value is returned,
/// preferring the positive one on ties.
pub fn den_p(f: &RationalFunction, h: &RationalFunction) -> Result<Option<i64>> {
    if f.is_zero() || h.is_zero() {
        return Err(Error::ZeroInput);
    }
    if f.is_constant() != h.is_constant() {
        return Ok(None);
    }
    let field = f.field();
    if f.is_constant() {
        let (a, b) = (f.unit(), h.unit());
        let mut orbit = vec![b];
        loop {
            let next = field.frobenius(*orbit.last().unwrap());
            if next == b {
                break;
            }
            orbit.push(next);
        }
        let m = orbit.len() as i64;
        return Ok(orbit.iter().position(|&x| x == a).map(|j| {
            let j = j as i64;
            if j <= m - j {
                j
            } else {
                j - m
            }
        }));
    }
    // s >= 0: Frobenius powers of h until the height overshoots
    let target = f.height();
    let mut cur = h.clone();
    let mut s = 0i64;
    while cur.height() <= target {
        if cur == *f {
            return Ok(Some(s));
        }
        cur = cur.frobenius_pow(1);
        s += 1;
    }
    // s < 0: exact p-th roots of h
    let mut cur = h.clone();
    let mut s = 0i64;
    while let Some(r) = cur.pth_root() {
        s -= 1;
        if r == *f {
            return Ok(Some(s));
        }
        if r.height() < target {
            break;
        }
        cur = r;
    }
    Ok(None)
}

/// Outcome of a squareness test, with a square root when one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareDecision {
    pub is_square: bool,
    pub witness: Option<RationalFunction>,
}

/// Decide `w = z^2` by factorization: every multiplicity even and the
/// leading unit a square in `F_q`.
pub fn is_square(w: &RationalFunction) -> SquareDecision {
    if w.is_zero() {
        return SquareDecision {
            is_square: true,
            witness: Some(w.clone()),
        };
    }
    let field = w.field();
    let unit_root = match field.sqrt(w.unit()) {
        Some(r) => r,
        None => {
            return SquareDecision {
                is_square: false,
                witness: None,
            }
        }
    };
    let half = |p: &Poly| -> Option<Poly> {
        let mut acc = Poly::one(field);
        if p.is_constant() {
            return Some(acc);
        }
        for (g, e) in factor(p).expect("nonzero").factors {
            if e % 2 == 1 {
                return None;
            }
            acc = acc.mul(&g.pow(e as u64 / 2));
        }
        Some(acc)
    };
    match (half(w.num()), half(w.den())) {
        (Some(n), Some(d)) => SquareDecision {
            is_square: true,
            witness: Some(RationalFunction::new(n.scale(unit_root), d).unwrap()),
        },
        _ => SquareDecision {
            is_square: false,
            witness: None,
        },
    }
}

/// `ceil((4g + 12 + 8 sum_{i=1}^{ceil((d-1)/2)} p^i) / d)`.
pub fn m_of(g: u64, d: u64, p: u64) -> BigUint {
    assert!(d >= 1);
    let pb = BigUint::from(p);
    let top = d / 2; // ceil((d-1)/2)
    let mut sum = BigUint::zero();
    let mut pw = BigUint::one();
    for _ in 0..top {
        pw *= &pb;
        sum += &pw;
    }
    let num = BigUint::from(4 * g + 12) + sum * 8u32;
    let db = BigUint::from(d);
    (&num + &db - 1u32) / db
}

/// The data `(g, p, d, M, F_1..F_M)` of the square criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PastenParams {
    pub g: u64,
    pub p: u64,
    pub d: usize,
    pub m: usize,
    /// Monic irreducibles of degree `d` over `F_p`.
    pub f_list: Vec<Poly>,
}

impl Serialize for PastenParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PastenParams", 5)?;
        st.serialize_field("g", &self.g)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("M", &self.m)?;
        let fs: Vec<String> = self.f_list.iter().map(|f| f.format_with("X")).collect();
        st.serialize_field("F", &fs)?;
        st.end()
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::Hypothesis("p must be odd".into()));
    }
    Ok(())
}

/// Least admissible degree `d` and the first `M` irreducibles of that degree.
pub fn choose_params(g: u64, p: u64) -> Result<PastenParams> {
    check_odd_prime(p)?;
    let field = Fq::prime(p)?;
    if p > 4 * g + 12 {
        let m = (4 * g + 12) as usize;
        let f_list = (1..=m as i64).map(|i| Poly::from_ints(&field, &[-i, 1])).collect();
        return Ok(PastenParams { g, p, d: 1, m, f_list });
    }
    let bound = 2.0 * (12.0 + ((8 * g + 168) as f64).sqrt()).ln() / (p as f64).ln();
    let mut d = 1u64;
    loop {
        let m = m_of(g, d, p);
        if d as f64 >= bound && necklace_count(p, d) > m {
            let m = m
                .to_usize()
                .ok_or_else(|| Error::Hypothesis("M too large to materialize".into()))?;
            let f_list = enumerate_monic_irreducibles(&field, d as usize).take(m).collect();
            return Ok(PastenParams {
                g,
                p,
                d: d as usize,
                m,
                f_list,
            });
        }
        d += 1;
    }
}

/// Evaluate a prime-field polynomial at an element of a field of the same
/// characteristic.
fn eval_lifted(f: &Poly, x: &RationalFunction) -> RationalFunction {
    let field = x.field();
    let coeffs: Vec<u32> = f
        .coeff_codes()
        .iter()
        .map(|&c| field.from_int(c as i64))
        .collect();
    RationalFunction::from_poly(Poly::from_codes(field, coeffs))
        .substitute(x)
        .expect("polynomial substitution")
}

/// `F_i(f) F_i(h)` is a square for every `i`.
pub fn pasten_criterion(f: &RationalFunction, h: &RationalFunction, params: &PastenParams) -> Result<bool> {
    if f.is_constant() || h.is_constant() {
        return Err(Error::ConstantInput);
    }
    if f.field().characteristic() != params.p || h.field() != f.field() {
        return Err(Error::FieldMismatch);
    }
    for fi in &params.f_list {
        let prod = eval_lifted(fi, f).mul(&eval_lifted(fi, h));
        if !is_square(&prod).is_square {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Integer lift of a prime-field polynomial applied to `x`. Linear factors
/// get a constant in `(-p, 0]`, so `X - i` lifts to `x + (-i)`.
fn lift_term(f: &Poly, x: &Term, p: u64) -> Term {
    let mut parts = Vec::new();
    let deg = f.deg0();
    for (j, &c) in f.coeff_codes().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let c = if deg == 1 && j == 0 { c as i64 - p as i64 } else { c as i64 };
        let mono = match j {
            0 => None,
            1 => Some(x.clone()),
            _ => Some(Term::Pow(Box::new(x.clone()), j as u32)),
        };
        parts.push(match (mono, c) {
            (None, c) => Term::Int(c),
            (Some(m), 1) => m,
            (Some(m), c) => Term::Mul(vec![Term::Int(c), m]),
        });
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Term::Add(parts)
    }
}

fn square_conjunction(fs: &[Poly], p: u64, x: &Term, y: &Term) -> RingFormula {
    let conj = fs
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let z = format!("z{}", i + 1);
            RingFormula::exists(
                vec![z.clone()],
                RingFormula::atom(RingAtom::Eq(
                    Term::Mul(vec![lift_term(f, x, p), lift_term(f, y, p)]),
                    Term::Pow(Box::new(Term::Var(z)), 2),
                )),
            )
        })
        .collect();
    RingFormula::and(conj)
}

/// Which formula to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiTarget {
    Prime(u64),
    Uniform,
}

fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// The square-conjunction for a fixed characteristic, in variables `x, y`.
pub fn phi_gp(g: u64, p: u64, x: &Term, y: &Term) -> Result<RingFormula> {
    let params = choose_params(g, p)?;
    Ok(square_conjunction(&params.f_list, p, x, y))
}

/// The characteristic-independent square conjunction with `F_i = X - i`,
/// `i = 1..4g+12`.
fn phi_uniform_core(g: u64, x: &Term, y: &Term) -> RingFormula {
    let m = 4 * g + 12;
    let conj = (1..=m as i64)
        .map(|i| {
            let z = format!("z{i}");
            let lin = |v: &Term| Term::Add(vec![v.clone(), Term::Int(-i)]);
            RingFormula::exists(
                vec![z.clone()],
                RingFormula::atom(RingAtom::Eq(
                    Term::Mul(vec![lin(x), lin(y)]),
                    Term::Pow(Box::new(Term::Var(z)), 2),
                )),
            )
        })
        .collect();
    RingFormula::and(conj)
}

/// The characteristic-guarded disjunction over small primes.
pub fn chi_g(g: u64, x: &Term, y: &Term) -> Result<RingFormula> {
    let small = primes_upto(4 * g + 12);
    let mut first = vec![phi_uniform_core(g, x, y)];
    first.extend(small.iter().map(|&p| RingFormula::Not(RingAtom::Char(p))));
    let mut disj = vec![RingFormula::And(first)];
    for &p in small.iter().filter(|&&p| p != 2) {
        disj.push(RingFormula::And(vec![
            RingFormula::atom(RingAtom::Char(p)),
            phi_gp(g, p, x, y)?,
        ]));
    }
    Ok(RingFormula::Or(disj))
}

/// `phi_g(x, y)`, true exactly when `x = y^(p^s)` for some integer `s`.
pub fn phi_uniform(g: u64, x: &Term, y: &Term) -> Result<RingFormula> {
    let f = |t: &Term| RingFormula::atom(RingAtom::Nonconst(t.clone()));
    let nf = |t: &Term| RingFormula::Not(RingAtom::Nonconst(t.clone()));
    let (u, v) = (Term::var("u"), Term::var("v"));
    let ux = Term::Mul(vec![u.clone(), x.clone()]);
    let vy = Term::Mul(vec![v.clone(), y.clone()]);
    let nonconst_case = RingFormula::And(vec![f(x), f(y), chi_g(g, x, y)?]);
    let const_case = RingFormula::And(vec![
        nf(x),
        nf(y),
        RingFormula::exists(
            vec!["u".into(), "v".into()],
            RingFormula::And(vec![f(&u), f(&v), chi_g(g, &u, &v)?, chi_g(g, &ux, &vy)?]),
        ),
    ]);
    Ok(RingFormula::Or(vec![nonconst_case, const_case]))
}

/// The formula in free variables `x, y`: for a fixed odd prime the square
/// conjunction, otherwise the uniform formula.
pub fn build_phi(g: u64, target: PhiTarget) -> Result<RingFormula> {
    let (x, y) = (Term::var("x"), Term::var("y"));
    match target {
        PhiTarget::Prime(p) => phi_gp(g, p, &x, &y),
        PhiTarget::Uniform => phi_uniform(g, &x, &y),
    }
}

/// Number of atoms of the shape `_ = z^2`.
pub fn count_square_atoms(phi: &RingFormula) -> usize {
    phi.atoms()
        .iter()
        .filter(|(a, pos)| *pos && matches!(a, RingAtom::Eq(_, Term::Pow(_, 2))))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(f: &Fq, s: &str) -> RationalFunction {
        RationalFunction::parse(f, s).unwrap()
    }

    #[test]
    fn den_p_examples() {
        let f = Fq::prime(3).unwrap();
        assert_eq!(den_p(&rf(&f, "t^9"), &rf(&f, "t")).unwrap(), Some(2));
        assert_eq!(den_p(&rf(&f, "t^3+1"), &rf(&f, "t+1")).unwrap(), Some(1));
        assert_eq!(den_p(&rf(&f, "t^2"), &rf(&f, "t")).unwrap(), None);
        assert_eq!(den_p(&rf(&f, "t"), &rf(&f, "t^9")).unwrap(), Some(-2));
        assert_eq!(den_p(&rf(&f, "t"), &rf(&f, "2")).unwrap(), None);
        assert_eq!(den_p(&rf(&f, "0"), &rf(&f, "t")), Err(Error::ZeroInput));
        let f9 = Fq::new(3, 2).unwrap();
        let a = RationalFunction::constant(&f9, f9.generator());
        let a3 = a.pow(3).unwrap();
        assert_eq!(den_p(&a3, &a).unwrap(), Some(1));
        // coefficients outside the prime field need a Frobenius inverse
        let g = rf(&f9, "t^3 + a");
        let r = g.pth_root().unwrap();
        assert_eq!(den_p(&r, &g).unwrap(), Some(-1));
    }

    #[test]
    fn square_examples() {
        let f = Fq::prime(3).unwrap();
        let d = is_square(&rf(&f, "t^2+2t+1"));
        assert!(d.is_square);
        assert_eq!(d.witness.unwrap(), rf(&f, "t+1"));
        assert!(!is_square(&rf(&f, "t")).is_square);
        assert!(!is_square(&rf(&f, "2(t+1)^2")).is_square);
        assert!(is_square(&RationalFunction::zero(&f)).is_square);
    }

    #[test]
    fn m_values() {
        assert_eq!(m_of(0, 1, 13), BigUint::from(12u32));
        assert_eq!(m_of(2, 1, 101), BigUint::from(20u32));
        // upper summation limit ceil((d-1)/2) is 1 at d = 3: (12 + 8*3)/3 = 12
        assert_eq!(m_of(0, 3, 3), BigUint::from(12u32));
        assert_eq!(m_of(0, 6, 3), BigUint::from(54u32));
        // direct evaluation with integer ceilings
        for (g, d, p) in [(0u64, 2u64, 3u64), (1, 4, 5), (3, 5, 7), (0, 7, 3), (5, 9, 3)] {
            let top = ((d - 1) as f64 / 2.0).ceil() as u64;
            let sum: u64 = (1..=top).map(|i| p.pow(i as u32)).sum();
            let num = 4 * g + 12 + 8 * sum;
            assert_eq!(m_of(g, d, p), BigUint::from((num + d - 1) / d));
        }
    }

    #[test]
    fn params() {
        let p = choose_params(0, 13).unwrap();
        assert_eq!((p.d, p.m), (1, 12));
        assert_eq!(p.f_list[0].format_with("X"), "X+12");
        assert_eq!(p.f_list[11].format_with("X"), "X+1");
        let p = choose_params(1, 101).unwrap();
        assert_eq!((p.d, p.m), (1, 16));
        let p = choose_params(0, 3).unwrap();
        // footnote bound 2 ln(12 + sqrt(168)) / ln 3 = 5.86.., and 116 > 54 at d = 6
        assert_eq!((p.d, p.m), (6, 54));
        assert_eq!(necklace_count(3, 6), BigUint::from(116u32));
        assert_eq!(p.f_list.len(), 54);
        assert!(choose_params(0, 2).is_err());
    }

    #[test]
    fn criterion_examples() {
        let f = Fq::prime(13).unwrap();
        let params = choose_params(0, 13).unwrap();
        let t = rf(&f, "t");
        assert!(pasten_criterion(&t, &t, &params).unwrap());
        assert!(!pasten_criterion(&t, &rf(&f, "t+1"), &params).unwrap());
        let h = rf(&f, "(t^2+3)/(t+5)");
        assert!(pasten_criterion(&h.frobenius_pow(1), &h, &params).unwrap());
        assert_eq!(pasten_criterion(&rf(&f, "2"), &t, &params), Err(Error::ConstantInput));
    }

    #[test]
    fn phi_structure() {
        let phi = build_phi(0, PhiTarget::Prime(13)).unwrap();
        assert_eq!(count_square_atoms(&phi), 12);
        assert_eq!(phi.quantifier_count(), 12);
        match &phi {
            RingFormula::And(xs) => assert_eq!(xs.len(), 12),
            _ => panic!("expected a conjunction"),
        }
        let uni = build_phi(0, PhiTarget::Uniform).unwrap();
        let guards: Vec<u64> = uni
            .atoms()
            .iter()
            .filter_map(|(a, pos)| match a {
                RingAtom::Char(p) if !pos => Some(*p),
                _ => None,
            })
            .collect();
        for p in [2, 3, 5, 7, 11] {
            assert!(guards.contains(&p));
        }
        assert_eq!(uni.free_vars().into_iter().collect::<Vec<_>>(), ["x", "y"]);
        let q1 = build_phi(1, PhiTarget::Prime(101)).unwrap().quantifier_count();
        let q2 = build_phi(2, PhiTarget::Prime(101)).unwrap().quantifier_count();
        assert_eq!(q2 - q1, 4);
    }
}
