//! The rational function field `F_q(t)`.

mod enumerate;
mod mobius;
pub(crate) mod parse;
mod place;
mod roots;

pub use enumerate::{enumerate_rationals, random_nonconstant, random_poly, random_rational};
pub use mobius::{enumerate_pgl2, MobiusMap};
pub use parse::parse_rational;
pub use place::{Divisor, Place};
pub use roots::rational_roots;

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::galois::{factor, Fq, Poly};

/// A reduced fraction `num/den` with `den` monic. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Reduce `num/den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(Self::zero(&field));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        if !d.is_monic() {
            let inv = field.inv(d.lead());
            n = n.scale(inv);
            d = d.scale(inv);
        }
        Ok(RationalFunction { num: n, den: d })
    }

    /// Build from parts already known to be canonical.
    pub(crate) fn from_parts_unchecked(num: Poly, den: Poly) -> Self {
        debug_assert!(den.is_monic() && num.gcd(&den).is_one() || num.is_zero() && den.is_one());
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field());
        RationalFunction { num: p, den }
    }

    pub fn zero(field: &Fq) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Fq) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &Fq, code: u32) -> Self {
        Self::from_poly(Poly::constant(field, code))
    }

    pub fn from_int(field: &Fq, v: i64) -> Self {
        Self::constant(field, field.from_int(v))
    }

    /// The generator `t`.
    pub fn t(field: &Fq) -> Self {
        Self::from_poly(Poly::t(field))
    }

    pub fn parse(field: &Fq, s: &str) -> Result<Self> {
        parse_rational(field, s)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Fq {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `max(deg num, deg den)`, with zero counted as degree 0.
    pub fn height(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    /// `[F_q(t) : F_q(u)]`; errors on constants.
    pub fn field_index(&self) -> Result<usize> {
        if self.is_constant() {
            return Err(Error::ConstantInput);
        }
        Ok(self.height())
    }

    /// The leading-coefficient unit `lead(num)/lead(den)`.
    pub fn unit(&self) -> u32 {
        self.num.lead()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        let n = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(n, self.den.mul(&other.den)).unwrap()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field());
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RationalFunction {
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, code: u32) -> Self {
        if code == 0 {
            return Self::zero(self.field());
        }
        RationalFunction {
            num: self.num.scale(code),
            den: self.den.clone(),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// `self^(p^s)` for `s >= 0`, computed by Frobenius.
    pub fn frobenius_pow(&self, s: u32) -> Self {
        let p = self.field().characteristic();
        let mut cur = self.clone();
        for _ in 0..s {
            cur = RationalFunction {
                num: cur.num.pow(p),
                den: cur.den.pow(p),
            };
        }
        cur
    }

    /// The unique `r` with `r^p = self`, if it exists.
    pub fn pth_root(&self) -> Option<Self> {
        let n = self.num.pth_root()?;
        let d = self.den.pth_root()?;
        Some(RationalFunction { num: n, den: d })
    }

    /// A square root in `F_q(t)` if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let r = self.num.mul(&self.den).sqrt()?;
        Self::new(r, self.den.clone()).ok()
    }

    /// `self(s)`, substituting `t -> s`.
    pub fn substitute(&self, s: &Self) -> Result<Self> {
        let n = self.height();
        let (a, b) = (&s.num, &s.den);
        let field = self.field();
        // homogenize: P(a/b) * b^n = sum p_i a^i b^(n-i)
        let hom = |p: &Poly| -> Poly {
            let mut acc = Poly::zero(field);
            let mut apow = Poly::one(field);
            let bpows: Vec<Poly> = {
                let mut v = vec![Poly::one(field)];
                for i in 1..=n {
                    let next = v[i - 1].mul(b);
                    v.push(next);
                }
                v
            };
            for i in 0..=n {
                let c = p.coeff(i);
                if c != 0 {
                    acc = acc.add(&apow.mul(&bpows[n - i]).scale(c));
                }
                apow = apow.mul(a);
            }
            acc
        };
        Self::new(hom(&self.num), hom(&self.den))
    }

    /// `v_P(self)`; errors on zero.
    pub fn valuation(&self, place: &Place) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(match place {
            Place::Infinity => self.den.deg0() as i64 - self.num.deg0() as i64,
            Place::Finite(pi) => {
                let vn = poly_multiplicity(&self.num, pi);
                if vn > 0 {
                    vn as i64
                } else {
                    -(poly_multiplicity(&self.den, pi) as i64)
                }
            }
        })
    }

    /// The principal divisor of a nonzero element.
    pub fn divisor(&self) -> Result<Divisor> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut d = Divisor::new();
        if !self.num.is_constant() {
            for (g, e) in factor(&self.num)?.factors {
                d.add(Place::Finite(g), e as i64);
            }
        }
        if !self.den.is_constant() {
            for (g, e) in factor(&self.den)?.factors {
                d.add(Place::Finite(g), -(e as i64));
            }
        }
        d.add(Place::Infinity, self.den.deg0() as i64 - self.num.deg0() as i64);
        Ok(d)
    }

    pub fn zero_divisor(&self) -> Result<Divisor> {
        Ok(self.divisor()?.positive_part())
    }

    pub fn pole_divisor(&self) -> Result<Divisor> {
        Ok(self.divisor()?.negative_part())
    }
}

fn poly_multiplicity(f: &Poly, pi: &Poly) -> u32 {
    let mut k = 0;
    let mut cur = f.clone();
    while !cur.is_constant() {
        match cur.checked_div(pi) {
            Some(q) => {
                cur = q;
                k += 1;
            }
            None => break,
        }
    }
    k
}

fn wrap(s: String, needs: bool) -> String {
    if needs {
        format!("({s})")
    } else {
        s
    }
}

fn term_count(p: &Poly) -> usize {
    p.coeff_codes().iter().filter(|&&c| c != 0).count()
}

impl RationalFunction {
    pub fn format_with(&self, var: &str) -> String {
        let n = self.num.format_with(var);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.format_with(var);
        let num_paren = term_count(&self.num) > 1;
        let den_paren = term_count(&self.den) > 1;
        format!("{}/{}", wrap(n, num_paren), wrap(d, den_paren))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with("t"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl PartialOrd for RationalFunction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Enumeration order: height, then numerator, then denominator.
impl Ord for RationalFunction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.num.cmp(&other.num))
            .then_with(|| self.den.cmp(&other.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    fn rf(f: &Fq, s: &str) -> RationalFunction {
        RationalFunction::parse(f, s).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let f = f3();
        let r = RationalFunction::new(Poly::from_ints(&f, &[-1, 0, 1]), Poly::from_ints(&f, &[-1, 1])).unwrap();
        assert_eq!(r, rf(&f, "t+1"));
        let r = RationalFunction::new(Poly::from_ints(&f, &[0, 2]), Poly::from_ints(&f, &[2])).unwrap();
        assert_eq!(r, RationalFunction::t(&f));
        let u = rf(&f, "t^6/(t^6+2)");
        assert_eq!(u.num().to_string(), "t^6");
        assert_eq!(u.den().to_string(), "t^6+2");
        assert_eq!(u.to_string(), "t^6/(t^6+2)");
        assert_eq!(
            RationalFunction::new(Poly::one(&f), Poly::zero(&f)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn valuation_examples() {
        let f = f3();
        let t = RationalFunction::t(&f);
        assert_eq!(t.valuation(&Place::Infinity).unwrap(), -1);
        let u = rf(&f, "t^6/(t^6+2)");
        assert_eq!(u.valuation(&Place::Finite(Poly::t(&f))).unwrap(), 6);
        let w = rf(&f, "(t^6+2)/t^6");
        assert_eq!(w.valuation(&Place::Finite(Poly::from_ints(&f, &[1, 1]))).unwrap(), 3);
        assert_eq!(RationalFunction::zero(&f).valuation(&Place::Infinity), Err(Error::ZeroInput));
    }

    #[test]
    fn divisor_examples() {
        let f = f3();
        let t = RationalFunction::t(&f);
        let z = t.zero_divisor().unwrap();
        assert_eq!(z.to_string(), "{t: 1}");
        let u = rf(&f, "t^6/(t^6+2)");
        assert_eq!(u.zero_divisor().unwrap().to_string(), "{t: 6}");
        assert_eq!(u.pole_divisor().unwrap().to_string(), "{t+1: 3, t+2: 3}");
        assert_eq!(u.field_index().unwrap(), 6);
        assert_eq!(t.field_index().unwrap(), 1);
        let f13 = Fq::prime(13).unwrap();
        assert_eq!(rf(&f13, "(t^8+1)/(t^8+t^4+1)").field_index().unwrap(), 8);
        assert_eq!(RationalFunction::one(&f).field_index(), Err(Error::ConstantInput));
    }

    #[test]
    fn substitute_examples() {
        let f = f3();
        let r = rf(&f, "t^2").substitute(&rf(&f, "t+1")).unwrap();
        assert_eq!(r, rf(&f, "t^2+2t+1"));
        let r = RationalFunction::t(&f).substitute(&rf(&f, "1/t")).unwrap();
        assert_eq!(r.to_string(), "1/t");
        let f5 = Fq::prime(5).unwrap();
        let r = rf(&f5, "t^2+1").substitute(&rf(&f5, "t^3")).unwrap();
        assert_eq!(r, rf(&f5, "t^6+1"));
    }

    #[test]
    fn sqrt_rational() {
        let f = Fq::prime(5).unwrap();
        let w = rf(&f, "(t+2)^2/(t^2+1)^2*4");
        let r = w.sqrt().unwrap();
        assert_eq!(r.mul(&r), w);
        assert!(rf(&f, "2*t^2").sqrt().is_none());
    }
}
