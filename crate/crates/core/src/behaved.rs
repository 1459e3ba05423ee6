//! l-behavedness, the l-behaved part of the zero divisor, rounded orders
//! and the valuation condition behind the `Ints` predicate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcfield::{Divisor, Place, RationalFunction};
use crate::galois::{factor, is_prime};

/// A zero `P` of `u` with `k = v_P(u)` not divisible by `l` and `deg P` not
/// divisible by `l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BehavedEntry {
    pub place: Place,
    pub k: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    MultDivL,
    DegreeDivL,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub place: Place,
    pub v: i64,
    pub reason: ExclusionReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BehavedReport {
    pub u: RationalFunction,
    pub l: u64,
    pub is_behaved: bool,
    pub witnesses: Vec<BehavedEntry>,
    pub excluded: Vec<Exclusion>,
}

impl BehavedReport {
    /// The witnesses as `(place, k)` pairs.
    pub fn factor(&self) -> Vec<(Place, i64)> {
        self.witnesses.iter().map(|e| (e.place.clone(), e.k)).collect()
    }
}

fn check_l(l: u64) -> Result<()> {
    if is_prime(l) {
        Ok(())
    } else {
        Err(Error::NotPrime(l))
    }
}

/// The zeros of a nonconstant `u` with their multiplicities, in place order.
fn zeros(u: &RationalFunction) -> Vec<(Place, i64)> {
    let mut out = Vec::new();
    if u.is_zero() {
        return out;
    }
    if !u.num().is_constant() {
        for (g, e) in factor(u.num()).expect("nonzero").factors {
            out.push((Place::Finite(g), e as i64));
        }
    }
    let vinf = u.den().deg0() as i64 - u.num().deg0() as i64;
    if vinf > 0 {
        out.push((Place::Infinity, vinf));
    }
    out
}

/// Decide whether `u` is l-behaved, listing every zero as witness or
/// exclusion. Constants are never behaved.
pub fn is_l_behaved(u: &RationalFunction, l: u64) -> Result<BehavedReport> {
    check_l(l)?;
    let mut witnesses = Vec::new();
    let mut excluded = Vec::new();
    if !u.is_constant() {
        for (place, v) in zeros(u) {
            let reason = if v % l as i64 == 0 {
                Some(ExclusionReason::MultDivL)
            } else if place.degree() as u64 % l == 0 {
                Some(ExclusionReason::DegreeDivL)
            } else {
                None
            };
            match reason {
                Some(reason) => excluded.push(Exclusion { place, v, reason }),
                None => witnesses.push(BehavedEntry { place, k: v }),
            }
        }
    }
    Ok(BehavedReport {
        u: u.clone(),
        l,
        is_behaved: !witnesses.is_empty(),
        witnesses,
        excluded,
    })
}

/// Shorthand for `is_l_behaved(u, l)?.is_behaved`.
pub fn behaved(u: &RationalFunction, l: u64) -> Result<bool> {
    Ok(is_l_behaved(u, l)?.is_behaved)
}

/// The l-behaved factor of the zero divisor; empty when not behaved.
pub fn behaved_factor(u: &RationalFunction, l: u64) -> Result<Divisor> {
    Ok(is_l_behaved(u, l)?.factor().into_iter().collect())
}

/// `floor(v/k)` for `v >= 0`, `ceil(v/k)` for `v < 0`.
pub fn round_order(v: i64, k: i64) -> i64 {
    assert!(k >= 1);
    if v >= 0 {
        v.div_euclid(k)
    } else {
        -((-v).div_euclid(k))
    }
}

/// The rounded order of `w` at `P^k`.
pub fn ord_rounded(w: &RationalFunction, place: &Place, k: i64) -> Result<i64> {
    if k < 1 {
        return Err(Error::Hypothesis("k must be at least 1".into()));
    }
    Ok(round_order(w.valuation(place)?, k))
}

fn behaved_report(u: &RationalFunction, l: u64) -> Result<BehavedReport> {
    let rep = is_l_behaved(u, l)?;
    if !rep.is_behaved {
        return Err(Error::NotBehaved(u.to_string(), l));
    }
    Ok(rep)
}

/// Membership in the outer `Ints` set for a precomputed behaved factor:
/// the rounded order is nonnegative at every witness place. Zero is a member.
pub fn ints_member_at(w: &RationalFunction, factor: &[(Place, i64)]) -> bool {
    if w.is_zero() {
        return true;
    }
    factor
        .iter()
        .all(|(p, k)| w.valuation(p).map(|v| round_order(v, *k) >= 0).unwrap_or(true))
}

/// `w` lies in the outer `Ints` set of `u`.
pub fn ints_member(w: &RationalFunction, u: &RationalFunction, l: u64) -> Result<bool> {
    let rep = behaved_report(u, l)?;
    Ok(ints_member_at(w, &rep.factor()))
}

/// The unique `s` with `w/u^s` and `u^s/w` both in `Ints`, for a
/// precomputed behaved factor.
pub fn ord_at_zb_with(w: &RationalFunction, factor: &[(Place, i64)]) -> Result<Option<i64>> {
    if w.is_zero() {
        return Err(Error::ZeroInput);
    }
    // both memberships at P amount to |v_P(w) - s k| < k
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for (p, k) in factor {
        let v = w.valuation(p)?;
        let (a, b) = if v.rem_euclid(*k) == 0 {
            (v / k, v / k)
        } else {
            (v.div_euclid(*k), v.div_euclid(*k) + 1)
        };
        lo = lo.max(a);
        hi = hi.min(b);
    }
    Ok((lo == hi).then_some(lo))
}

pub fn ord_at_zb(w: &RationalFunction, u: &RationalFunction, l: u64) -> Result<Option<i64>> {
    let rep = behaved_report(u, l)?;
    ord_at_zb_with(w, &rep.factor())
}

/// `h_w = w^l/u + 1/u^l`.
pub fn compute_h_w(w: &RationalFunction, u: &RationalFunction, l: u64) -> Result<RationalFunction> {
    if u.is_zero() {
        return Err(Error::ZeroInput);
    }
    let l = l as i64;
    Ok(w.pow(l)?.div(u)?.add(&u.pow(-l)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HwCase {
    /// rounded order of `w` negative
    Negative,
    NonNegative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HwPlaceCheck {
    pub place: Place,
    pub k: i64,
    pub case: HwCase,
    pub v_w: Option<i64>,
    pub v_h: i64,
    pub ord_rounded_h: i64,
    /// The rounded claim: negative and nonzero mod `l`, or zero mod `l`.
    pub rounded_pass: bool,
    /// The same claim on the plain valuation `v_P(h_w)` (negative case only;
    /// equals `rounded_pass` in the other case).
    pub unrounded_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HwReport {
    pub w: RationalFunction,
    pub u: RationalFunction,
    pub l: u64,
    pub h_w: RationalFunction,
    pub places: Vec<HwPlaceCheck>,
    pub violations: usize,
    pub unrounded_violations: usize,
}

/// Check the valuation identities of `h_w` at every place of the behaved
/// factor of `u`.
pub fn check_hw_identities(w: &RationalFunction, u: &RationalFunction, l: u64) -> Result<HwReport> {
    let rep = behaved_report(u, l)?;
    let h = compute_h_w(w, u, l)?;
    if h.is_zero() {
        return Err(Error::Hypothesis("h_w vanishes; u is an l-th power".into()));
    }
    let li = l as i64;
    let mut places = Vec::new();
    for (place, k) in rep.factor() {
        let v_w = if w.is_zero() { None } else { Some(w.valuation(&place)?) };
        let case = match v_w {
            Some(v) if round_order(v, k) < 0 => HwCase::Negative,
            _ => HwCase::NonNegative,
        };
        let v_h = h.valuation(&place)?;
        let r = round_order(v_h, k);
        let (rounded_pass, unrounded_pass) = match case {
            HwCase::Negative => (r < 0 && r % li != 0, v_h < 0 && v_h % li != 0),
            HwCase::NonNegative => (r % li == 0, r % li == 0),
        };
        places.push(HwPlaceCheck {
            place,
            k,
            case,
            v_w,
            v_h,
            ord_rounded_h: r,
            rounded_pass,
            unrounded_pass,
        });
    }
    let violations = places.iter().filter(|c| !c.rounded_pass).count();
    let unrounded_violations = places.iter().filter(|c| !c.unrounded_pass).count();
    Ok(HwReport {
        w: w.clone(),
        u: u.clone(),
        l,
        h_w: h,
        places,
        violations,
        unrounded_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{Fq, Poly};

    fn rf(f: &Fq, s: &str) -> RationalFunction {
        RationalFunction::parse(f, s).unwrap()
    }

    #[test]
    fn behaved_examples() {
        for p in [3, 5, 7, 11, 13] {
            let f = Fq::prime(p).unwrap();
            let rep = is_l_behaved(&RationalFunction::t(&f), 2).unwrap();
            assert!(rep.is_behaved);
            assert_eq!(rep.factor(), vec![(Place::Finite(Poly::t(&f)), 1)]);
        }
        let f = Fq::prime(3).unwrap();
        assert!(!behaved(&rf(&f, "t^2"), 2).unwrap());
        let rep = is_l_behaved(&rf(&f, "t^2(t^2+1)"), 2).unwrap();
        assert!(!rep.is_behaved);
        assert_eq!(rep.excluded[0].reason, ExclusionReason::MultDivL);
        assert_eq!(rep.excluded[1].reason, ExclusionReason::DegreeDivL);
        assert!(!behaved(&rf(&f, "2"), 2).unwrap());
        assert!(!behaved(&RationalFunction::zero(&f), 2).unwrap());
        assert_eq!(is_l_behaved(&rf(&f, "t"), 4), Err(Error::NotPrime(4)));
        // infinity counts: 1/t has a simple zero at INF
        let rep = is_l_behaved(&rf(&f, "1/t"), 2).unwrap();
        assert_eq!(rep.factor(), vec![(Place::Infinity, 1)]);
    }

    #[test]
    fn factor_examples() {
        let f3 = Fq::prime(3).unwrap();
        let f5 = Fq::prime(5).unwrap();
        assert_eq!(behaved_factor(&rf(&f3, "t"), 2).unwrap().to_string(), "{t: 1}");
        assert_eq!(behaved_factor(&rf(&f5, "t^3"), 2).unwrap().to_string(), "{t: 3}");
        assert!(behaved_factor(&rf(&f3, "t^2(t^2+1)"), 2).unwrap().is_empty());
    }

    #[test]
    fn rounding() {
        assert_eq!(round_order(5, 2), 2);
        assert_eq!(round_order(-5, 2), -2);
        assert_eq!(round_order(0, 7), 0);
        assert_eq!(round_order(-1, 3), 0);
    }

    #[test]
    fn ints_examples() {
        let f = Fq::prime(3).unwrap();
        let t = rf(&f, "t");
        for k in 0..5 {
            assert!(ints_member(&t.pow(k).unwrap(), &t, 2).unwrap());
        }
        assert!(!ints_member(&rf(&f, "1/t"), &t, 2).unwrap());
        assert!(ints_member(&rf(&f, "1/(t+1)"), &t, 2).unwrap());
        assert!(matches!(ints_member(&t, &rf(&f, "t^2"), 2), Err(Error::NotBehaved(..))));
    }

    #[test]
    fn ord_at_zb_examples() {
        let f = Fq::prime(3).unwrap();
        let t = rf(&f, "t");
        assert_eq!(ord_at_zb(&t.pow(3).unwrap(), &t, 2).unwrap(), Some(3));
        assert_eq!(ord_at_zb(&rf(&f, "t^2(t+1)"), &t, 2).unwrap(), Some(2));
        assert_eq!(ord_at_zb(&rf(&f, "t+1"), &t, 2).unwrap(), Some(0));
        // k = 3 and v = 4: both s = 1 and s = 2 satisfy the pair of conditions
        let u = rf(&f, "t^3");
        assert_eq!(ord_at_zb(&rf(&f, "t^4"), &u, 2).unwrap(), None);
        assert_eq!(ord_at_zb(&rf(&f, "t^6"), &u, 2).unwrap(), Some(2));
        assert_eq!(ord_at_zb(&RationalFunction::zero(&f), &t, 2), Err(Error::ZeroInput));
    }

    #[test]
    fn h_w_examples() {
        let f3 = Fq::prime(3).unwrap();
        let f5 = Fq::prime(5).unwrap();
        let t3 = rf(&f3, "t");
        assert_eq!(compute_h_w(&RationalFunction::zero(&f3), &t3, 2).unwrap(), rf(&f3, "1/t^2"));
        assert_eq!(compute_h_w(&t3, &t3, 2).unwrap(), rf(&f3, "(t^3+1)/t^2"));
        assert_eq!(compute_h_w(&rf(&f5, "1"), &rf(&f5, "t"), 2).unwrap(), rf(&f5, "(t+1)/t^2"));
        assert_eq!(compute_h_w(&t3, &RationalFunction::zero(&f3), 2), Err(Error::ZeroInput));
    }

    #[test]
    fn hw_identity_examples() {
        let f3 = Fq::prime(3).unwrap();
        let t = rf(&f3, "t");
        let r = check_hw_identities(&rf(&f3, "1/t"), &t, 2).unwrap();
        assert_eq!(r.places[0].case, HwCase::Negative);
        assert_eq!(r.places[0].v_h, -3);
        assert_eq!(r.violations, 0);
        let r = check_hw_identities(&t, &t, 2).unwrap();
        assert_eq!(r.places[0].case, HwCase::NonNegative);
        assert_eq!(r.places[0].v_h, -2);
        assert_eq!(r.violations, 0);
        let f5 = Fq::prime(5).unwrap();
        let r = check_hw_identities(&rf(&f5, "1"), &rf(&f5, "t"), 2).unwrap();
        assert_eq!(r.places[0].v_h, -2);
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn rounded_negative_case_fails_for_deep_poles() {
        // k = 3, l = 2, v(w) = -5: v(h_w) = 2(-5) - 3 = -13 and ceil(-13/3) = -4 is even,
        // while the plain valuation -13 is odd
        let f = Fq::prime(5).unwrap();
        let u = rf(&f, "t^3");
        let w = rf(&f, "1/t^5");
        let r = check_hw_identities(&w, &u, 2).unwrap();
        let c = &r.places[0];
        assert_eq!((c.case, c.v_h, c.ord_rounded_h), (HwCase::Negative, -13, -4));
        assert!(!c.rounded_pass);
        assert!(c.unrounded_pass);
    }
}
