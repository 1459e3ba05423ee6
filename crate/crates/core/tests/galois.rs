use std::collections::BTreeMap;

use fqt::galois::{enumerate_monic, enumerate_monic_irreducibles};
use fqt::{factor, Fq, Poly};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Monic irreducibles of degree <= `max` by sieving out products.
fn sieve_irreducibles(f: &Fq, max: usize) -> Vec<Poly> {
    let mut irr: Vec<Poly> = Vec::new();
    for d in 1..=max {
        let mut reducible = std::collections::HashSet::new();
        for a in irr.iter().filter(|a| a.degree().unwrap() <= d / 2) {
            for b in enumerate_monic(f, d - a.degree().unwrap()) {
                reducible.insert(a.mul(&b));
            }
        }
        irr.extend(enumerate_monic(f, d).filter(|g| !reducible.contains(g)));
    }
    irr
}

/// Full factorization of a polynomial of degree <= 8 by trial division.
fn trial_factor(f: &Poly, irr: &[Poly]) -> (u32, BTreeMap<Poly, u32>) {
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    for g in irr {
        while let Some(q) = rest.checked_div(g) {
            *out.entry(g.clone()).or_insert(0) += 1;
            rest = q;
        }
    }
    let unit = rest.lead();
    let rest = rest.monic();
    if !rest.is_one() {
        // no factor of degree <= 4 and degree <= 8 means irreducible
        out.insert(rest, 1);
    }
    (unit, out)
}

#[test]
fn factor_matches_trial_division() {
    for p in [3u64, 5, 7] {
        let f = Fq::prime(p).unwrap();
        let irr = sieve_irreducibles(&f, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..500 {
            let g = fqt::funcfield::random_poly(&f, 8, &mut rng);
            if g.is_zero() {
                continue;
            }
            let fac = factor(&g).unwrap();
            assert_eq!(fac.expand(&g), g);
            for (h, _) in &fac.factors {
                assert!(h.is_irreducible().unwrap());
            }
            let got: BTreeMap<Poly, u32> = fac.factors.iter().cloned().collect();
            assert_eq!((fac.unit, got), trial_factor(&g, &irr), "f = {g}");
        }
    }
}

fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[test]
fn irreducible_counts() {
    for q in [2u64, 3, 5] {
        let f = Fq::prime(q).unwrap();
        for d in 1..=6u64 {
            let expected: i64 = (1..=d)
                .filter(|e| d % e == 0)
                .map(|e| mobius(d / e) * (q as i64).pow(e as u32))
                .sum::<i64>()
                / d as i64;
            assert_eq!(enumerate_monic_irreducibles(&f, d as usize).count() as i64, expected, "q={q} d={d}");
        }
    }
    let f4 = Fq::new(2, 2).unwrap();
    assert_eq!(enumerate_monic_irreducibles(&f4, 2).count(), 6);
}

#[test]
fn sieve_agrees_with_rabin() {
    let f = Fq::prime(3).unwrap();
    let sieve = sieve_irreducibles(&f, 5);
    let rabin: Vec<Poly> = (1..=5).flat_map(|d| enumerate_monic_irreducibles(&f, d)).collect();
    assert_eq!(sieve, rabin);
}

fn field_for(k: u8) -> Fq {
    match k % 4 {
        0 => Fq::prime(3).unwrap(),
        1 => Fq::prime(5).unwrap(),
        2 => Fq::new(3, 2).unwrap(),
        _ => Fq::new(2, 3).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frobenius_identity(k in 0u8..4, seed in any::<u64>()) {
        let f = field_for(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = fqt::funcfield::random_poly(&f, 6, &mut rng);
        let p = f.characteristic();
        let tp = Poly::t(&f).pow(p);
        prop_assert_eq!(g.pow(p), g.frobenius_coeffs().compose(&tp));
    }

    #[test]
    fn bezout(k in 0u8..4, seed in any::<u64>()) {
        let f = field_for(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = fqt::funcfield::random_poly(&f, 6, &mut rng);
        let b = fqt::funcfield::random_poly(&f, 6, &mut rng);
        let (g, s, t) = a.ext_gcd(&b);
        prop_assert_eq!(&g, &a.gcd(&b));
        prop_assert_eq!(s.mul(&a).add(&t.mul(&b)), g.clone());
        if !g.is_zero() {
            prop_assert!(g.divides(&a) && g.divides(&b));
        }
    }

    #[test]
    fn field_axioms(k in 0u8..4, a in any::<u32>(), b in any::<u32>()) {
        let f = field_for(k);
        let q = f.order() as u32;
        let (a, b) = (a % q, b % q);
        prop_assert_eq!(f.mul(f.add(a, b), f.sub(a, b)), f.sub(f.mul(a, a), f.mul(b, b)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        if let Some(r) = f.sqrt(f.mul(a, a)) {
            prop_assert_eq!(f.mul(r, r), f.mul(a, a));
        } else if f.characteristic() != 2 {
            prop_assert!(false, "square without a root");
        }
    }
}
