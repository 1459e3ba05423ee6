//! Runtime-configured finite fields `F_{p^n} = F_p[a]/(modulus)`.
//!
//! Elements are encoded as integer codes in `[0, q)`: the coordinates
//! `(c_0, .., c_{n-1})` with respect to the power basis of the modulus root `a`
//! are read as base-`p` digits, `code = sum c_i p^i`. Code order is the
//! canonical enumeration order of the field.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The data defining `F_{p^n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    n: u32,
    /// Monic modulus over `F_p`, coefficients low to high (length `n + 1`).
    /// For `n = 1` this is the polynomial `a` itself.
    modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.n)
        }
    }
}

/// Parses `"p"` or `"p^n"` into `(p, n)`.
pub fn parse_field_spec(s: &str) -> Result<(u64, u32)> {
    let s = s.trim();
    let (ps, ns) = match s.split_once('^') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let p: u64 = ps
        .parse()
        .map_err(|_| Error::InvalidField(format!("bad characteristic `{ps}`")))?;
    let n: u32 = ns
        .parse()
        .map_err(|_| Error::InvalidField(format!("bad degree `{ns}`")))?;
    Ok((p, n))
}

impl FromStr for Fq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, n) = parse_field_spec(s)?;
        Fq::new(p, n)
    }
}

const TABLE_LIMIT: u64 = 256;

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Debug)]
struct FqInner {
    spec: FieldSpec,
    q: u64,
    pows: Vec<u64>,
    tables: Option<Tables>,
}

/// A handle to a finite field. Cheap to clone; all clones share state.
#[derive(Debug, Clone)]
pub struct Fq(Arc<FqInner>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.spec.hash(state)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.spec)
    }
}

impl Fq {
    /// `F_{p^n}` with the least monic irreducible modulus of degree `n` in
    /// enumeration order.
    pub fn new(p: u64, n: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidField("degree must be at least 1".into()));
        }
        if n == 1 {
            return Fq::build(p, vec![0, 1]);
        }
        let base = Fq::prime(p)?;
        let modulus = super::poly::least_monic_irreducible(&base, n as usize)?;
        let coeffs = modulus.coeff_codes().iter().map(|&c| c as u64).collect();
        Fq::build(p, coeffs)
    }

    pub fn prime(p: u64) -> Result<Fq> {
        Fq::new(p, 1)
    }

    /// `F_p[a]/(modulus)` for an explicitly supplied monic irreducible modulus
    /// (coefficients low to high).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus must be monic with reduced coefficients".into()));
        }
        if modulus.len() > 2 {
            let base = Fq::prime(p)?;
            let m = super::poly::Poly::from_codes(&base, modulus.iter().map(|&c| c as u32).collect());
            if !m.is_irreducible()? {
                return Err(Error::InvalidField("modulus is reducible".into()));
            }
        }
        Fq::build(p, modulus)
    }

    fn build(p: u64, modulus: Vec<u64>) -> Result<Fq> {
        let n = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{n} exceeds the supported field size")))?;
        let pows = (0..=n).map(|i| p.pow(i)).collect();
        let mut inner = FqInner {
            spec: FieldSpec { p, n, modulus },
            q,
            pows,
            tables: None,
        };
        if n > 1 && q <= TABLE_LIMIT {
            let tmp = Fq(Arc::new(inner));
            let qq = q as usize;
            let mut add = vec![0u32; qq * qq];
            let mut mul = vec![0u32; qq * qq];
            let mut inv = vec![0u32; qq];
            for a in 0..qq {
                for b in 0..qq {
                    add[a * qq + b] = tmp.add_slow(a as u32, b as u32);
                    mul[a * qq + b] = tmp.mul_slow(a as u32, b as u32);
                }
            }
            for a in 1..qq {
                inv[a] = (1..qq).find(|&b| mul[a * qq + b] == 1).unwrap() as u32;
            }
            inner = Arc::try_unwrap(tmp.0).expect("fresh field handle");
            inner.tables = Some(Tables { add, mul, inv });
        }
        Ok(Fq(Arc::new(inner)))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u64 {
        self.0.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.n
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.spec.n == 1
    }

    pub fn elem(&self, code: u32) -> FqElement {
        assert!((code as u64) < self.0.q, "element code out of range");
        FqElement {
            field: self.clone(),
            code,
        }
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        (0..self.0.q as u32).map(move |c| self.elem(c))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.0.spec.p as i64) as u32
    }

    /// Coordinates of an element code with respect to the power basis.
    pub fn coords(&self, code: u32) -> Vec<u64> {
        let p = self.0.spec.p;
        let mut c = code as u64;
        (0..self.0.spec.n)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u64]) -> u32 {
        let p = self.0.spec.p;
        coords
            .iter()
            .zip(&self.0.pows)
            .map(|(&c, &pw)| (c % p) * pw)
            .sum::<u64>() as u32
    }

    /// The modulus root `a` (for `n = 1` this is the residue 0 convention;
    /// callers only use it for `n > 1`).
    pub fn generator(&self) -> u32 {
        if self.0.spec.n == 1 {
            0
        } else {
            self.0.spec.p as u32
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        if inner.spec.n == 1 {
            let s = a as u64 + b as u64;
            return if s >= inner.q { (s - inner.q) as u32 } else { s as u32 };
        }
        if let Some(t) = &inner.tables {
            return t.add[a as usize * inner.q as usize + b as usize];
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let x = self.coords(a);
        let y = self.coords(b);
        let p = self.0.spec.p;
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
        self.from_coords(&s)
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let inner = &*self.0;
        if a == 0 {
            return 0;
        }
        if inner.spec.n == 1 {
            return (inner.q - a as u64) as u32;
        }
        let p = inner.spec.p;
        let x: Vec<u64> = self.coords(a).iter().map(|&c| (p - c) % p).collect();
        self.from_coords(&x)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        if inner.spec.n == 1 {
            return ((a as u64 * b as u64) % inner.q) as u32;
        }
        if let Some(t) = &inner.tables {
            return t.mul[a as usize * inner.q as usize + b as usize];
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let spec = &self.0.spec;
        let p = spec.p;
        let n = spec.n as usize;
        let x = self.coords(a);
        let y = self.coords(b);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % p;
            }
        }
        // reduce by the monic modulus from the top
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in spec.modulus[..n].iter().enumerate() {
                prod[k - n + i] = (prod[k - n + i] + (p - c) * m) % p;
            }
        }
        self.from_coords(&prod[..n])
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        if let Some(t) = &self.0.tables {
            return t.inv[a as usize];
        }
        self.pow(a, self.0.q - 2)
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    /// `a^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        if self.0.spec.n == 1 {
            a
        } else {
            self.pow(a, self.0.spec.p)
        }
    }

    /// The unique `b` with `b^p = a`.
    pub fn frobenius_inv(&self, a: u32) -> u32 {
        let n = self.0.spec.n;
        if n == 1 {
            a
        } else {
            self.pow(a, self.0.spec.p.pow(n - 1))
        }
    }

    pub fn is_square(&self, a: u32) -> bool {
        if a == 0 || self.0.spec.p == 2 {
            return true;
        }
        self.pow(a, (self.0.q - 1) / 2) == 1
    }

    /// Least non-square element in code order.
    pub fn nonsquare(&self) -> Result<u32> {
        if self.0.spec.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        Ok((1..self.0.q as u32).find(|&c| !self.is_square(c)).expect("odd field has non-squares"))
    }

    /// A square root of `a`, if any. The returned root is the one with the
    /// smaller code of the pair `{r, -r}`.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let q = self.0.q;
        if self.0.spec.p == 2 {
            // squaring is a bijection; a^(q/2) is the root
            return Some(self.pow(a, q / 2));
        }
        if !self.is_square(a) {
            return None;
        }
        // Tonelli-Shanks in the multiplicative group of order q - 1
        let mut s = 0u32;
        let mut odd = q - 1;
        while odd % 2 == 0 {
            odd /= 2;
            s += 1;
        }
        let z = self.nonsquare().ok()?;
        let mut m = s;
        let mut c = self.pow(z, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, (odd + 1) / 2);
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        let nr = self.neg(r);
        Some(r.min(nr))
    }

    /// Primitive `l`-th root of unity (least code), if `l | q - 1`.
    pub fn root_of_unity(&self, l: u64) -> Option<u32> {
        let q1 = self.0.q - 1;
        if l == 0 || q1 % l != 0 {
            return None;
        }
        let factors = prime_factors(l);
        (1..self.0.q as u32).find(|&c| {
            self.pow(c, l) == 1 && factors.iter().all(|&r| self.pow(c, l / r) != 1)
        })
    }

    /// Textual form of an element: decimal for the prime subfield, otherwise a
    /// parenthesised expression in the generator `a`.
    pub fn format_elem(&self, code: u32) -> String {
        let coords = self.coords(code);
        if coords.iter().skip(1).all(|&c| c == 0) {
            return coords.first().copied().unwrap_or(0).to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        format!("({})", terms.join("+"))
    }
}

/// An element of a finite field together with its field handle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqElement {
    field: Fq,
    code: u32,
}

impl FqElement {
    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn coords(&self) -> Vec<u64> {
        self.field.coords(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn inv(&self) -> Option<FqElement> {
        (self.code != 0).then(|| self.field.elem(self.field.inv(self.code)))
    }

    pub fn pow(&self, e: u64) -> FqElement {
        self.field.elem(self.field.pow(self.code, e))
    }

    pub fn is_square(&self) -> bool {
        self.field.is_square(self.code)
    }

    fn check(&self, other: &FqElement) {
        assert!(self.field == other.field, "elements of different fields");
    }
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_elem(self.code))
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_elem(self.code))
    }
}

impl PartialOrd for FqElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code.cmp(&other.code)
    }
}

macro_rules! elem_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&FqElement> for &FqElement {
            type Output = FqElement;
            fn $m(self, rhs: &FqElement) -> FqElement {
                self.check(rhs);
                self.field.elem(self.field.$f(self.code, rhs.code))
            }
        }
        impl std::ops::$tr for FqElement {
            type Output = FqElement;
            fn $m(self, rhs: FqElement) -> FqElement {
                (&self).$m(&rhs)
            }
        }
    };
}

elem_binop!(Add, add, add);
elem_binop!(Sub, sub, sub);
elem_binop!(Mul, mul, mul);

impl std::ops::Neg for &FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        self.field.elem(self.field.neg(self.code))
    }
}

impl std::ops::Neg for FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        -&self
    }
}
