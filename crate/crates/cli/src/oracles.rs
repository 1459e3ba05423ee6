//! Brute-force references that share no code path with the deciders they
//! check.

use std::collections::{BTreeMap, HashSet};

use fqt::galois::enumerate_monic;
use fqt::{Fq, Poly};

/// Monic irreducibles of degree `<= max`, by sieving out products.
pub fn sieve_irreducibles(f: &Fq, max: usize) -> Vec<Poly> {
    let mut irr: Vec<Poly> = Vec::new();
    for d in 1..=max {
        let mut reducible = HashSet::new();
        for a in irr.iter().filter(|a| a.deg0() <= d / 2) {
            for b in enumerate_monic(f, d - a.deg0()) {
                reducible.insert(a.mul(&b));
            }
        }
        irr.extend(enumerate_monic(f, d).filter(|g| !reducible.contains(g)));
    }
    irr
}

/// Unit and monic factors with multiplicity, by trial division. Exact when
/// `deg f <= 2 * max_deg(irr) + 1`: the cofactor left over is irreducible.
pub fn trial_factor(f: &Poly, irr: &[Poly]) -> (u32, BTreeMap<Poly, u32>) {
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
        out.insert(rest, 1);
    }
    (unit, out)
}

/// Every `a^2 + b^2` with `deg a, deg b <= d`.
pub fn sums_of_two_squares(f: &Fq, d: usize) -> HashSet<Poly> {
    let polys: Vec<Poly> = (0..(f.order() as u128).pow(d as u32 + 1)).map(|i| Poly::from_index(f, i)).collect();
    let squares: Vec<Poly> = polys.iter().map(|a| a.mul(a)).collect();
    let mut out = HashSet::new();
    for (i, a) in squares.iter().enumerate() {
        for b in &squares[i..] {
            out.insert(a.add(b));
        }
    }
    out
}
