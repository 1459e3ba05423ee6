use std::collections::BTreeSet;

use super::RationalFunction;
use crate::galois::{factor, Poly};

/// Roots in `F_q(t)` of `sum coeffs[i] Y^i`, in canonical order. `None`
/// when every coefficient vanishes (every element is a root).
pub fn rational_roots(coeffs: &[RationalFunction]) -> Option<Vec<RationalFunction>> {
    let top = coeffs.iter().rposition(|c| !c.is_zero())?;
    let field = coeffs[0].field().clone();
    let mut out = BTreeSet::new();
    // clear denominators
    let lcm = coeffs[..=top]
        .iter()
        .fold(Poly::one(&field), |acc, c| {
            let g = acc.gcd(c.den());
            acc.mul(&c.den().div_exact(&g).unwrap())
        });
    let mut c: Vec<Poly> = coeffs[..=top]
        .iter()
        .map(|r| r.num().mul(&lcm.div_exact(r.den()).unwrap()))
        .collect();
    let low = c.iter().position(|p| !p.is_zero()).unwrap();
    if low > 0 {
        out.insert(RationalFunction::zero(&field));
        c.drain(..low);
    }
    let n = c.len() - 1;
    match n {
        0 => {}
        1 => {
            out.insert(RationalFunction::new(c[0].neg(), c[1].clone()).unwrap());
        }
        2 if field.characteristic() != 2 => {
            let disc = c[1].mul(&c[1]).sub(&c[2].mul(&c[0]).scale(field.from_int(4)));
            if let Some(s) = disc.sqrt() {
                let two_a = c[2].scale(field.from_int(2));
                for r in [c[1].neg().add(&s), c[1].neg().sub(&s)] {
                    out.insert(RationalFunction::new(r, two_a.clone()).unwrap());
                }
            }
        }
        _ => {
            let nums = monic_divisors(&c[0]);
            let dens = monic_divisors(&c[n]);
            let q = field.order() as u32;
            let coeffs_rf: Vec<RationalFunction> = c.iter().cloned().map(RationalFunction::from_poly).collect();
            for r in &nums {
                for s in &dens {
                    if !r.gcd(s).is_one() {
                        continue;
                    }
                    for unit in 1..q {
                        let cand = RationalFunction::new(r.scale(unit), s.clone()).unwrap();
                        let val = coeffs_rf
                            .iter()
                            .rev()
                            .fold(RationalFunction::zero(&field), |acc, k| acc.mul(&cand).add(k));
                        if val.is_zero() {
                            out.insert(cand);
                        }
                    }
                }
            }
        }
    }
    Some(out.into_iter().collect())
}

fn monic_divisors(p: &Poly) -> Vec<Poly> {
    let field = p.field();
    let mut divs = vec![Poly::one(field)];
    if p.is_constant() {
        return divs;
    }
    for (g, e) in factor(p).expect("nonzero").factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = cur.mul(&g);
                next.push(cur.clone());
            }
        }
        divs = next;
    }
    divs
}
