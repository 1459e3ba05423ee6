use rand::Rng;

use super::RationalFunction;
use crate::galois::{Fq, Poly};

/// Every element of `F_q(t)` with numerator and denominator degree at most
/// `max_height`, ordered by height, then numerator, then denominator.
pub fn enumerate_rationals(field: &Fq, max_height: usize) -> impl Iterator<Item = RationalFunction> + '_ {
    let q = field.order() as u128;
    (0..=max_height).flat_map(move |h| {
        let nums = 0..q.pow(h as u32 + 1);
        nums.flat_map(move |ni| {
            let num = Poly::from_index(field, ni);
            let nd = num.degree();
            // monic denominators of degree <= h; height must be exactly h
            let dens: Box<dyn Iterator<Item = u128>> = if num.is_zero() {
                Box::new((h == 0).then_some(1u128).into_iter())
            } else if nd == Some(h) {
                Box::new((0..=h as u32).flat_map(move |d| q.pow(d)..2 * q.pow(d)))
            } else {
                Box::new(q.pow(h as u32)..2 * q.pow(h as u32))
            };
            dens.filter_map(move |di| {
                let den = Poly::from_index(field, di);
                num.gcd(&den)
                    .is_one()
                    .then(|| RationalFunction::from_parts_unchecked(num.clone(), den))
            })
        })
    })
}

/// Uniform coefficients, degree at most `max_deg`.
pub fn random_poly<R: Rng + ?Sized>(field: &Fq, max_deg: usize, rng: &mut R) -> Poly {
    let q = field.order() as u32;
    Poly::from_codes(field, (0..=max_deg).map(|_| rng.gen_range(0..q)).collect())
}

/// A random nonzero element with numerator and denominator degree at most
/// `max_deg`.
pub fn random_rational<R: Rng + ?Sized>(field: &Fq, max_deg: usize, rng: &mut R) -> RationalFunction {
    loop {
        let n = random_poly(field, max_deg, rng);
        let d = random_poly(field, max_deg, rng);
        if n.is_zero() || d.is_zero() {
            continue;
        }
        return RationalFunction::new(n, d).unwrap();
    }
}

pub fn random_nonconstant<R: Rng + ?Sized>(field: &Fq, max_deg: usize, rng: &mut R) -> RationalFunction {
    assert!(max_deg >= 1);
    loop {
        let r = random_rational(field, max_deg, rng);
        if !r.is_constant() {
            return r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_order() {
        let f = Fq::prime(3).unwrap();
        let all: Vec<RationalFunction> = enumerate_rationals(&f, 2).collect();
        // height 0: 3 constants; height 1: (q^2-q)... compare with brute force
        let mut brute = std::collections::BTreeSet::new();
        for n in crate::galois::enumerate_polys(&f, 2) {
            for d in crate::galois::enumerate_polys(&f, 2) {
                if !d.is_zero() {
                    brute.insert(RationalFunction::new(n.clone(), d).unwrap());
                }
            }
        }
        assert_eq!(all.len(), brute.len());
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(all[0], RationalFunction::zero(&f));
    }
}
