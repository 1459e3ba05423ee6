use std::fmt;

use serde::{Serialize, Serializer};

use super::RationalFunction;
use crate::error::{Error, Result};
use crate::galois::{Fq, Poly};

/// `u -> (a u + b)/(c u + d)` with `ad - bc != 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MobiusMap {
    field: Fq,
    m: [u32; 4],
}

impl MobiusMap {
    pub fn new(field: &Fq, a: u32, b: u32, c: u32, d: u32) -> Result<Self> {
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det == 0 {
            return Err(Error::Hypothesis("singular Möbius matrix".into()));
        }
        Ok(MobiusMap {
            field: field.clone(),
            m: [a, b, c, d],
        })
    }

    pub fn identity(field: &Fq) -> Self {
        MobiusMap {
            field: field.clone(),
            m: [1, 0, 0, 1],
        }
    }

    pub fn entries(&self) -> [u32; 4] {
        self.m
    }

    /// Matrix inverse (up to scaling).
    pub fn inverse(&self) -> Self {
        let f = &self.field;
        let [a, b, c, d] = self.m;
        MobiusMap {
            field: f.clone(),
            m: [d, f.neg(b), f.neg(c), a],
        }
    }

    /// `self ∘ other`, i.e. the matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let f = &self.field;
        let [a, b, c, d] = self.m;
        let [e, g, h, k] = other.m;
        let dot = |x: u32, y: u32, z: u32, w: u32| f.add(f.mul(x, y), f.mul(z, w));
        MobiusMap {
            field: f.clone(),
            m: [dot(a, e, b, h), dot(a, g, b, k), dot(c, e, d, h), dot(c, g, d, k)],
        }
    }

    /// Representative with the first nonzero entry equal to 1.
    pub fn normalized(&self) -> Self {
        let f = &self.field;
        let lead = self.m.iter().copied().find(|&x| x != 0).unwrap_or(1);
        let inv = f.inv(lead);
        MobiusMap {
            field: f.clone(),
            m: self.m.map(|x| f.mul(x, inv)),
        }
    }

    /// `(a u + b)/(c u + d)`; errors if the denominator vanishes.
    pub fn apply(&self, u: &RationalFunction) -> Result<RationalFunction> {
        let [a, b, c, d] = self.m;
        let f = &self.field;
        let cu_d = u.scale(c).add(&RationalFunction::constant(f, d));
        if cu_d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let au_b = u.scale(a).add(&RationalFunction::constant(f, b));
        au_b.div(&cu_d)
    }

    /// The image of `t`, for use as a substitution.
    pub fn as_rational(&self) -> RationalFunction {
        let [a, b, c, d] = self.m;
        let f = &self.field;
        RationalFunction::new(Poly::from_codes(f, vec![b, a]), Poly::from_codes(f, vec![d, c]))
            .expect("invertible map has nonzero denominator")
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.m.iter().map(|&x| self.field.format_elem(x)).collect();
        write!(f, "({})", e.join(","))
    }
}

impl fmt::Debug for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for MobiusMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One representative per class of `PGL_2(F_q)`: first nonzero entry 1,
/// ordered by entry codes. There are `q^3 - q` of them.
pub fn enumerate_pgl2(field: &Fq) -> Vec<MobiusMap> {
    let q = field.order() as u32;
    let mut out = Vec::new();
    for a in 0..q.min(2) {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let m = [a, b, c, d];
                    let first = m.iter().copied().find(|&x| x != 0);
                    if first != Some(1) {
                        continue;
                    }
                    if let Ok(map) = MobiusMap::new(field, a, b, c, d) {
                        out.push(map);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgl2_sizes() {
        for (p, n) in [(3u64, 24usize), (5, 120), (7, 336), (11, 1320), (13, 2184)] {
            let f = Fq::prime(p).unwrap();
            assert_eq!(enumerate_pgl2(&f).len(), n);
        }
    }

    #[test]
    fn examples() {
        let f = Fq::prime(3).unwrap();
        let t = RationalFunction::t(&f);
        let u = RationalFunction::parse(&f, "t^6/(t^6+2)").unwrap();
        assert_eq!(MobiusMap::identity(&f).apply(&u).unwrap(), u);
        let inv = MobiusMap::new(&f, 0, 1, 1, 0).unwrap();
        assert_eq!(inv.apply(&t).unwrap().to_string(), "1/t");
        let shift = MobiusMap::new(&f, 1, 1, 0, 1).unwrap();
        assert_eq!(shift.apply(&u).unwrap().to_string(), "(2*t^6+2)/(t^6+2)");
        assert!(MobiusMap::new(&f, 1, 1, 1, 1).is_err());
        // c u + d = 0 for u = 1 under (1,0,1,2)
        let m = MobiusMap::new(&f, 1, 0, 1, 2).unwrap();
        assert_eq!(m.apply(&RationalFunction::one(&f)), Err(Error::DivisionByZero));
    }

    #[test]
    fn composition_is_matrix_product() {
        let f = Fq::prime(5).unwrap();
        let u = RationalFunction::parse(&f, "(t^2+1)/(t^3+2t)").unwrap();
        let maps = enumerate_pgl2(&f);
        for (i, m1) in maps.iter().enumerate().step_by(7) {
            let m2 = &maps[(i * 13 + 5) % maps.len()];
            let lhs = m1.apply(&m2.apply(&u).unwrap()).unwrap();
            let rhs = m1.compose(m2).apply(&u).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
