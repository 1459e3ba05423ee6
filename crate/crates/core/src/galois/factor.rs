//! Factorization into monic irreducibles: squarefree decomposition,
//! distinct-degree splitting, then Cantor–Zassenhaus.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use crate::error::{Error, Result};

/// `unit * prod f_i^{e_i}` with monic irreducible `f_i` in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Multiply the factorization back out.
    pub fn expand(&self, like: &Poly) -> Poly {
        let f = like.field();
        self.factors
            .iter()
            .fold(Poly::constant(f, self.unit), |acc, (g, e)| acc.mul(&g.pow(*e as u64)))
    }

    pub fn multiplicity(&self, g: &Poly) -> u32 {
        self.factors
            .iter()
            .find(|(h, _)| h == g)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

pub fn factor(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let unit = f.lead();
    let monic = f.monic();
    let mut acc: BTreeMap<Poly, u32> = BTreeMap::new();
    if !monic.is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(input_seed(&monic));
        for (sqf, mult) in squarefree(&monic) {
            for (g, d) in distinct_degree(&sqf) {
                for h in equal_degree(&g, d, &mut rng) {
                    *acc.entry(h).or_insert(0) += mult;
                }
            }
        }
    }
    Ok(Factorization {
        unit,
        factors: acc.into_iter().collect(),
    })
}

fn input_seed(f: &Poly) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    f.field().spec().hash(&mut h);
    f.coeff_codes().hash(&mut h);
    h.finish()
}

/// Yun-style squarefree decomposition of a monic polynomial, with p-th
/// roots taken when the derivative vanishes. Returned parts are squarefree
/// but a single irreducible may occur in several parts.
fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let p = f.field().characteristic() as u32;
    let d = f.derivative();
    if d.is_zero() {
        let r = f.pth_root().expect("zero derivative implies p-th power");
        for (g, e) in squarefree(&r) {
            out.push((g, e * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).unwrap();
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).unwrap();
    }
    if !c.is_one() {
        let r = c.pth_root().expect("remaining cofactor is a p-th power");
        for (g, e) in squarefree(&r) {
            out.push((g, e * p));
        }
    }
    out
}

/// Split a squarefree monic polynomial into products of irreducibles of a
/// common degree.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.order();
    let t = Poly::t(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.clone();
    let mut i = 1usize;
    while rest.deg0() >= 2 * i {
        h = h.pow_mod(q, &rest);
        let g = rest.gcd(&h.sub(&t));
        if !g.is_one() {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest).unwrap();
            out.push((g, i));
        }
        i += 1;
    }
    if !rest.is_constant() {
        let d = rest.deg0();
        out.push((rest, d));
    }
    out
}

fn random_poly(f: &Poly, rng: &mut ChaCha8Rng) -> Poly {
    let field = f.field();
    let q = field.order() as u32;
    let n = f.deg0();
    Poly::from_codes(field, (0..n).map(|_| rng.gen_range(0..q)).collect())
}

/// Cantor–Zassenhaus splitting of a product of distinct monic irreducibles
/// of degree `d`.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg0();
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = field.order();
    loop {
        let a = random_poly(f, rng);
        if a.is_constant() {
            continue;
        }
        let b = if q % 2 == 1 {
            // a^((q^d - 1)/2) = (a^(1 + q + .. + q^(d-1)))^((q-1)/2)
            let mut cur = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                cur = cur.pow_mod(q, f);
                norm = norm.mul_mod(&cur, f);
            }
            norm.pow_mod((q - 1) / 2, f).sub(&Poly::one(field))
        } else {
            // absolute trace a + a^2 + .. + a^(2^(kd - 1)), q = 2^k
            let k = field.degree() as usize;
            let mut cur = a.rem(f).unwrap();
            let mut tr = cur.clone();
            for _ in 1..(k * d) {
                cur = cur.mul_mod(&cur, f);
                tr = tr.add(&cur);
            }
            tr
        };
        let g = f.gcd(&b);
        if !g.is_one() && g.deg0() < n {
            let h = f.div_exact(&g).unwrap();
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Fq;

    #[test]
    fn spec_examples() {
        let f3 = Fq::prime(3).unwrap();
        let u = Poly::from_ints(&f3, &[2, 0, 0, 0, 0, 0, 1]);
        let fac = factor(&u).unwrap();
        assert_eq!(fac.unit, 1);
        assert_eq!(
            fac.factors,
            vec![(Poly::from_ints(&f3, &[1, 1]), 3), (Poly::from_ints(&f3, &[2, 1]), 3)]
        );
        let f5 = Fq::prime(5).unwrap();
        let fac = factor(&Poly::t(&f5)).unwrap();
        assert_eq!(fac.factors, vec![(Poly::t(&f5), 1)]);
        let fac = factor(&Poly::from_ints(&f3, &[2, 0, 2])).unwrap();
        assert_eq!(fac.unit, 2);
        assert_eq!(fac.factors, vec![(Poly::from_ints(&f3, &[1, 0, 1]), 1)]);
        assert_eq!(factor(&Poly::zero(&f3)), Err(Error::ZeroInput));
    }

    #[test]
    fn extension_fields() {
        for (p, n) in [(2, 2), (2, 3), (3, 2), (5, 2)] {
            let f = Fq::new(p, n).unwrap();
            let q = f.order() as u32;
            let a = Poly::from_codes(&f, vec![1, q - 1, 0, 1]);
            let b = Poly::from_codes(&f, vec![f.generator(), 1]);
            let g = a.mul(&b).mul(&b).mul(&Poly::from_codes(&f, vec![0, 0, 1, 1, 1]));
            let fac = factor(&g).unwrap();
            assert_eq!(fac.expand(&g), g);
            for (h, _) in &fac.factors {
                assert!(h.is_monic() && h.is_irreducible().unwrap());
            }
        }
    }

    #[test]
    fn pth_power_multiplicities() {
        let f2 = Fq::prime(2).unwrap();
        let x = Poly::from_ints(&f2, &[1, 1]);
        let g = x.pow(5).mul(&Poly::from_ints(&f2, &[1, 1, 1]).pow(4));
        let fac = factor(&g).unwrap();
        assert_eq!(fac.factors, vec![(x, 5), (Poly::from_ints(&f2, &[1, 1, 1]), 4)]);
    }
}
