use fqt::funcfield::{enumerate_pgl2, random_nonconstant, random_rational};
use fqt::{Fq, MobiusMap, Place, RationalFunction};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(k: bool) -> Fq {
    Fq::prime(if k { 3 } else { 5 }).unwrap()
}

fn random_mobius(f: &Fq, rng: &mut ChaCha8Rng) -> MobiusMap {
    let q = f.order() as u32;
    loop {
        let e: Vec<u32> = (0..4).map(|_| rng.gen_range(0..q)).collect();
        if let Ok(m) = MobiusMap::new(f, e[0], e[1], e[2], e[3]) {
            return m;
        }
    }
}

#[test]
fn product_formula() {
    for k in [true, false] {
        let f = field(k);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let w = random_rational(&f, 5, &mut rng);
            let d = w.divisor().unwrap();
            assert_eq!(d.degree(), 0, "w = {w}");
            if !w.is_constant() {
                let n = w.field_index().unwrap() as i64;
                assert_eq!(w.zero_divisor().unwrap().degree(), n);
                assert_eq!(w.pole_divisor().unwrap().degree(), n);
            }
        }
    }
}

#[test]
fn pgl2_sizes() {
    for (p, n) in [(3u64, 24usize), (5, 120), (7, 336)] {
        let f = Fq::prime(p).unwrap();
        let maps = enumerate_pgl2(&f);
        assert_eq!(maps.len(), n);
        let t = RationalFunction::t(&f);
        let images: std::collections::BTreeSet<_> = maps.iter().map(|m| m.apply(&t).unwrap()).collect();
        assert_eq!(images.len(), n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn valuation_laws(k in any::<bool>(), seed in any::<u64>()) {
        let f = field(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_rational(&f, 4, &mut rng);
        let b = random_rational(&f, 4, &mut rng);
        let mut places: Vec<Place> = a.divisor().unwrap().iter().map(|(p, _)| p.clone()).collect();
        places.extend(b.divisor().unwrap().iter().map(|(p, _)| p.clone()));
        places.push(Place::Infinity);
        let sum = a.add(&b);
        for pl in &places {
            let (va, vb) = (a.valuation(pl).unwrap(), b.valuation(pl).unwrap());
            prop_assert_eq!(a.mul(&b).valuation(pl).unwrap(), va + vb);
            if !sum.is_zero() {
                prop_assert!(sum.valuation(pl).unwrap() >= va.min(vb));
            }
        }
    }

    #[test]
    fn mobius_inverse(k in any::<bool>(), seed in any::<u64>()) {
        let f = field(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_mobius(&f, &mut rng);
        let n = random_mobius(&f, &mut rng);
        let u = random_nonconstant(&f, 4, &mut rng);
        prop_assert_eq!(m.inverse().apply(&m.apply(&u).unwrap()).unwrap(), u.clone());
        // composition is the matrix product acting on the left
        prop_assert_eq!(m.compose(&n).apply(&u).unwrap(), m.apply(&n.apply(&u).unwrap()).unwrap());
    }

    #[test]
    fn parse_display_round_trip(k in any::<bool>(), seed in any::<u64>()) {
        let f = field(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_rational(&f, 5, &mut rng);
        prop_assert_eq!(RationalFunction::parse(&f, &u.to_string()).unwrap(), u);
    }
}
