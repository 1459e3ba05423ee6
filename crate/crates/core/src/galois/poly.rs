//! Dense univariate polynomials over a runtime finite field.

use std::cmp::Ordering;
use std::fmt;

use super::field::{prime_factors, Fq};
use crate::error::{Error, Result};

/// A polynomial in `F_q[t]`, coefficients stored low to high with no trailing
/// zeros. The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Fq,
    c: Vec<u32>,
}

impl Poly {
    pub fn zero(field: &Fq) -> Poly {
        Poly {
            field: field.clone(),
            c: Vec::new(),
        }
    }

    pub fn one(field: &Fq) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn constant(field: &Fq, code: u32) -> Poly {
        Poly::from_codes(field, vec![code])
    }

    /// The variable `t`.
    pub fn t(field: &Fq) -> Poly {
        Poly::from_codes(field, vec![0, 1])
    }

    /// `c * t^d`.
    pub fn monomial(field: &Fq, code: u32, d: usize) -> Poly {
        let mut c = vec![0; d + 1];
        c[d] = code;
        Poly::from_codes(field, c)
    }

    pub fn from_codes(field: &Fq, mut c: Vec<u32>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly {
            field: field.clone(),
            c,
        }
    }

    /// Coefficients given as integers, reduced into the prime subfield.
    pub fn from_ints(field: &Fq, ints: &[i64]) -> Poly {
        Poly::from_codes(field, ints.iter().map(|&v| field.from_int(v)).collect())
    }

    /// The polynomial whose coefficient codes are the base-`q` digits of
    /// `index`. Index order coincides with the canonical `(degree,
    /// top-down lexicographic)` order.
    pub fn from_index(field: &Fq, mut index: u128) -> Poly {
        let q = field.order() as u128;
        let mut c = Vec::new();
        while index > 0 {
            c.push((index % q) as u32);
            index /= q;
        }
        Poly::from_codes(field, c)
    }

    /// Inverse of [`Poly::from_index`]. `None` on overflow.
    pub fn index(&self) -> Option<u128> {
        let q = self.field.order() as u128;
        let mut acc: u128 = 0;
        for &d in self.c.iter().rev() {
            acc = acc.checked_mul(q)?.checked_add(d as u128)?;
        }
        Some(acc)
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn coeff_codes(&self) -> &[u32] {
        &self.c
    }

    /// Coefficient of `t^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with zero mapped to 0; for callers that have excluded zero.
    pub fn deg0(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lead(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// Constant term.
    pub fn constant_term(&self) -> u32 {
        self.coeff(0)
    }

    /// `self / lead(self)`; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead());
        self.scale(inv)
    }

    pub fn scale(&self, code: u32) -> Poly {
        let f = &self.field;
        Poly::from_codes(f, self.c.iter().map(|&x| f.mul(x, code)).collect())
    }

    fn same_field(&self, other: &Poly) {
        assert!(self.field == other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::from_codes(f, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::from_codes(f, c)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::from_codes(f, self.c.iter().map(|&x| f.neg(x)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.c.len() + other.c.len() - 1];
        if f.is_prime_field() {
            // accumulate in u64 and reduce once per coefficient
            let p = f.order();
            let mut acc = vec![0u64; out.len()];
            let limit = u64::MAX / 2;
            for (i, &a) in self.c.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.c.iter().enumerate() {
                    let v = &mut acc[i + j];
                    *v += a as u64 * b as u64;
                    if *v > limit {
                        *v %= p;
                    }
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = (a % p) as u32;
            }
        } else {
            for (i, &a) in self.c.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.c.iter().enumerate() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Poly::from_codes(f, out)
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(divisor);
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        if self.c.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f.inv(divisor.lead());
        let mut r = self.c.clone();
        let mut q = vec![0u32; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let coef = f.mul(r[k], inv);
            if coef == 0 {
                continue;
            }
            q[k - dd] = coef;
            for (i, &dc) in divisor.c.iter().enumerate() {
                r[k - dd + i] = f.sub(r[k - dd + i], f.mul(coef, dc));
            }
        }
        r.truncate(dd);
        Ok((Poly::from_codes(f, q), Poly::from_codes(f, r)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Quotient when the division is known to be exact.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(divisor)?;
        debug_assert!(r.is_zero(), "inexact division");
        Ok(q)
    }

    /// `Some(self / divisor)` if `divisor` divides `self`.
    pub fn checked_div(&self, divisor: &Poly) -> Option<Poly> {
        match self.divmod(divisor) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `g = s*self + t*other` and `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m).expect("nonzero modulus")
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut acc = Poly::one(&self.field).rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Evaluate at a field element.
    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.same_field(g);
        let f = &self.field;
        self.c.iter().rev().fold(Poly::zero(f), |acc, &c| acc.mul(g).add(&Poly::constant(f, c)))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| f.mul(x, f.from_int((i as u64 % f.characteristic()) as i64)))
            .collect();
        Poly::from_codes(f, c)
    }

    /// Apply the Frobenius `x -> x^p` to every coefficient.
    pub fn frobenius_coeffs(&self) -> Poly {
        let f = &self.field;
        Poly::from_codes(f, self.c.iter().map(|&x| f.frobenius(x)).collect())
    }

    /// The unique `r` with `r^p = self`, if it exists.
    pub fn pth_root(&self) -> Option<Poly> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        if self.c.iter().enumerate().any(|(i, &x)| x != 0 && i % p != 0) {
            return None;
        }
        let c = self.c.iter().step_by(p).map(|&x| f.frobenius_inv(x)).collect();
        Some(Poly::from_codes(f, c))
    }

    /// A square root, if `self` is a perfect square. In odd characteristic
    /// the root has the smaller-coded of the two possible leading
    /// coefficients.
    pub fn sqrt(&self) -> Option<Poly> {
        let f = &self.field;
        if self.is_zero() {
            return Some(self.clone());
        }
        if f.characteristic() == 2 {
            return self.pth_root();
        }
        let n = self.deg0();
        if n % 2 == 1 {
            return None;
        }
        let m = n / 2;
        let lead = f.sqrt(self.lead())?;
        let mut r = vec![0u32; m + 1];
        r[m] = lead;
        let inv2l = f.inv(f.mul(f.from_int(2), lead));
        for k in 1..=m {
            // coefficient of t^(n-k) in r^2 is 2 r_m r_{m-k} + sum_{i=1}^{k-1} r_{m-i} r_{m-k+i}
            let mut s = 0u32;
            for i in 1..k {
                s = f.add(s, f.mul(r[m - i], r[m - k + i]));
            }
            r[m - k] = f.mul(f.sub(self.coeff(n - k), s), inv2l);
        }
        let root = Poly::from_codes(f, r);
        (root.mul(&root) == *self).then_some(root)
    }

    /// Roots in the coefficient field, ascending by code.
    pub fn roots(&self) -> Vec<u32> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = &self.field;
        if f.order() <= 64 {
            return (0..f.order() as u32).filter(|&x| self.eval(x) == 0).collect();
        }
        let fac = super::factor::factor(self).expect("nonzero");
        let mut out: Vec<u32> = fac
            .factors
            .iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, _)| f.neg(g.coeff(0)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Rabin's test. Errors on constant input.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::ConstantInput),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let f = &self.field;
        let m = self.monic();
        let q = f.order();
        let t = Poly::t(f);
        // frob[k] = t^(q^k) mod m
        let mut frob = Vec::with_capacity(n + 1);
        frob.push(t.clone());
        for k in 1..=n {
            let next = frob[k - 1].pow_mod(q, &m);
            frob.push(next);
        }
        if frob[n] != t.rem(&m).unwrap() {
            return Ok(false);
        }
        for r in prime_factors(n as u64) {
            let k = n / r as usize;
            let g = m.gcd(&frob[k].sub(&t));
            if !g.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Render with the given variable name.
    pub fn format_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = f.format_elem(c);
            terms.push(if i == 0 {
                cs
            } else if c == 1 {
                mono
            } else {
                format!("{cs}*{mono}")
            });
        }
        terms.join("+")
    }

    /// Parse polynomial text such as `"t^6+2"`. Variable letters `t` and `X`
    /// are both accepted.
    pub fn parse(field: &Fq, s: &str) -> Result<Poly> {
        let r = crate::funcfield::parse::parse_rational(field, s)?;
        if !r.den().is_one() {
            return Err(Error::parse(0, "expected a polynomial"));
        }
        Ok(r.num().clone())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with("t"))
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with("t"))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by degree (zero first), then coefficients from the top.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<&Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                Poly::$m(self, rhs)
            }
        }
        impl std::ops::$tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                Poly::$m(&self, &rhs)
            }
        }
    };
}

poly_binop!(Add, add);
poly_binop!(Sub, sub);
poly_binop!(Mul, mul);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

/// Every monic polynomial of degree `d`, in canonical order.
pub fn enumerate_monic(field: &Fq, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.order() as u128;
    let start = q.pow(d as u32);
    (start..2 * start).map(move |i| Poly::from_index(field, i))
}

/// Every polynomial of degree at most `d` (zero included), in canonical order.
pub fn enumerate_polys(field: &Fq, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.order() as u128;
    (0..q.pow(d as u32 + 1)).map(move |i| Poly::from_index(field, i))
}

/// Every monic irreducible of degree exactly `d`, in canonical order.
pub fn enumerate_monic_irreducibles(field: &Fq, d: usize) -> impl Iterator<Item = Poly> + '_ {
    enumerate_monic(field, d).filter(|p| p.is_irreducible().unwrap_or(false))
}

pub(crate) fn least_monic_irreducible(field: &Fq, d: usize) -> Result<Poly> {
    if d == 0 {
        return Err(Error::InvalidField("degree must be at least 1".into()));
    }
    Ok(enumerate_monic_irreducibles(field, d)
        .next()
        .expect("irreducibles exist in every degree"))
}
