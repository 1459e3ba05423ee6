//! Finite fields and polynomials over them.

mod factor;
mod field;
mod poly;

pub use factor::{factor, Factorization};
pub use field::{is_prime, parse_field_spec, FieldSpec, Fq, FqElement};
pub use poly::{enumerate_monic, enumerate_monic_irreducibles, enumerate_polys, Poly};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::Result;

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1i64;
    let mut d = 2u64;
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

/// Number of monic irreducibles of degree `d` over `F_q`:
/// `(1/d) sum_{e | d} mu(d/e) q^e`.
pub fn necklace_count(q: u64, d: u64) -> BigUint {
    assert!(d >= 1);
    let mut acc = BigInt::zero();
    let qb = BigInt::from(q);
    for e in 1..=d {
        if d % e == 0 {
            let mu = mobius(d / e);
            if mu != 0 {
                acc += BigInt::from(mu) * qb.pow(e as u32);
            }
        }
    }
    (acc / BigInt::from(d)).to_biguint().expect("count is nonnegative")
}

/// `necklace_count` as `u64` when it fits.
pub fn necklace_count_u64(q: u64, d: u64) -> Option<u64> {
    necklace_count(q, d).to_u64()
}

/// Least element of `F_q` (in code order) that is not a square.
pub fn nonsquare_constant(field: &Fq) -> Result<FqElement> {
    Ok(field.elem(field.nonsquare()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn necklaces() {
        assert_eq!(necklace_count(3, 1), BigUint::from(3u32));
        assert_eq!(necklace_count(3, 2), BigUint::from(3u32));
        assert_eq!(necklace_count(2, 3), BigUint::from(2u32));
        assert_eq!(necklace_count(3, 6), BigUint::from(116u32));
    }

    #[test]
    fn mobius_values() {
        let got: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(got, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn nonsquare_examples() {
        assert_eq!(nonsquare_constant(&Fq::prime(3).unwrap()).unwrap().code(), 2);
        assert_eq!(nonsquare_constant(&Fq::prime(7).unwrap()).unwrap().code(), 3);
        assert!(nonsquare_constant(&Fq::new(2, 2).unwrap()).is_err());
    }
}
