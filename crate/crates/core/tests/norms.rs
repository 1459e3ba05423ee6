use fqt::funcfield::{random_rational, enumerate_rationals};
use fqt::galois::enumerate_monic;
use fqt::norms::{build_norm_form, is_norm, norm_of, norm_witness_search, two_squares, ExtensionSpec};
use fqt::{Fq, Poly, RationalFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn specs() -> Vec<ExtensionSpec> {
    vec![
        ExtensionSpec::for_degree(&Fq::prime(3).unwrap(), 2).unwrap(),
        ExtensionSpec::for_degree(&Fq::prime(5).unwrap(), 2).unwrap(),
        ExtensionSpec::for_degree(&Fq::prime(3).unwrap(), 3).unwrap(),
        ExtensionSpec::for_degree(&Fq::prime(7).unwrap(), 3).unwrap(),
    ]
}

#[test]
fn norm_is_multiplicative() {
    for spec in specs() {
        let f = spec.field().clone();
        let l = spec.degree();
        let mut rng = ChaCha8Rng::seed_from_u64(l as u64 * f.order());
        for _ in 0..200 {
            let mut coords = || -> Vec<RationalFunction> {
                (0..l)
                    .map(|_| if rng.gen_bool(0.2) { RationalFunction::zero(&f) } else { random_rational(&f, 2, &mut rng) })
                    .collect()
            };
            let (x, y) = (coords(), coords());
            let xy = spec.coord_mul(&x, &y);
            assert_eq!(norm_of(&xy, &spec).unwrap(), norm_of(&x, &spec).unwrap().mul(&norm_of(&y, &spec).unwrap()));
        }
    }
}

#[test]
fn norm_form_matches_conjugate_product() {
    // N(x) = x^(1 + q + .. + q^(l-1)) in F_q[X]/(modulus)
    for spec in specs() {
        let f = spec.field().clone();
        let l = spec.degree() as u32;
        let q = f.order();
        let form = build_norm_form(&spec).unwrap();
        assert_eq!(form.total_degree(), l);
        let e = (q.pow(l) - 1) / (q - 1);
        for idx in 0..(q as u128).pow(l) {
            let x = Poly::from_index(&f, idx);
            let coords: Vec<u32> = (0..l as usize).map(|i| x.coeff(i)).collect();
            assert_eq!(Poly::constant(&f, form.eval_const(&coords)), x.pow_mod(e, spec.modulus()));
        }
    }
}

#[test]
fn decision_is_sound_against_search() {
    for p in [3u64, 5] {
        let f = Fq::prime(p).unwrap();
        let spec = ExtensionSpec::for_degree(&f, 2).unwrap();
        for u in enumerate_rationals(&f, 2).filter(|u| !u.is_zero()) {
            let dec = is_norm(&u, &spec).unwrap().is_norm;
            let w = norm_witness_search(&u, &spec, if p == 3 { 3 } else { 2 }).unwrap();
            if let Some(w) = &w {
                assert!(dec, "witness {w:?} for non-norm {u}");
                assert_eq!(&norm_of(w, &spec).unwrap(), &u);
            }
            if !dec {
                assert!(w.is_none());
            }
        }
    }
}

#[test]
fn constant_multiples_do_not_matter() {
    for spec in specs() {
        let f = spec.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(f.order());
        for _ in 0..100 {
            let u = random_rational(&f, 3, &mut rng);
            let base = is_norm(&u, &spec).unwrap().is_norm;
            for c in 1..f.order() as u32 {
                assert_eq!(is_norm(&u.scale(c), &spec).unwrap().is_norm, base);
            }
        }
    }
}

#[test]
fn two_squares_small_brute_force() {
    let f = Fq::prime(3).unwrap();
    let polys: Vec<Poly> = (0..3u128.pow(3)).map(|i| Poly::from_index(&f, i)).collect();
    let mut sums = std::collections::HashSet::new();
    for a in &polys {
        for b in &polys {
            sums.insert(a.mul(a).add(&b.mul(b)));
        }
    }
    for d in 0..=3 {
        for m in enumerate_monic(&f, d) {
            for c in 1..3 {
                let g = m.scale(c);
                let r = two_squares(&g).unwrap();
                assert_eq!(r.decision, sums.contains(&g), "f = {g}");
                if let Some((a, b)) = r.witness {
                    assert_eq!(a.mul(&a).add(&b.mul(&b)), g);
                }
            }
        }
    }
}
