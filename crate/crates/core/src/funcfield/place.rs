use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::galois::Poly;

/// A place of `F_q(t)`: a monic irreducible polynomial or the degree
/// valuation at infinity. Finite places sort first, by `(degree, lex)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.deg0(),
            Place::Infinity => 1,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "INF"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite formal sum of places with nonzero integer multiplicities.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    support: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add `mult` to the multiplicity at `place`, dropping zeros.
    pub fn add(&mut self, place: Place, mult: i64) {
        if mult == 0 {
            return;
        }
        let e = self.support.entry(place.clone()).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.support.remove(&place);
        }
    }

    pub fn get(&self, place: &Place) -> i64 {
        self.support.get(place).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.support.iter().map(|(p, &m)| (p, m))
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    /// `sum mult * deg P`.
    pub fn degree(&self) -> i64 {
        self.iter().map(|(p, m)| m * p.degree() as i64).sum()
    }

    pub fn positive_part(&self) -> Divisor {
        Divisor {
            support: self.support.iter().filter(|(_, &m)| m > 0).map(|(p, &m)| (p.clone(), m)).collect(),
        }
    }

    /// Poles as positive multiplicities.
    pub fn negative_part(&self) -> Divisor {
        Divisor {
            support: self.support.iter().filter(|(_, &m)| m < 0).map(|(p, &m)| (p.clone(), -m)).collect(),
        }
    }
}

impl FromIterator<(Place, i64)> for Divisor {
    fn from_iter<I: IntoIterator<Item = (Place, i64)>>(iter: I) -> Self {
        let mut d = Divisor::new();
        for (p, m) in iter {
            d.add(p, m);
        }
        d
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(p, m)| format!("{p}: {m}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize)]
struct Entry<'a> {
    place: &'a Place,
    mult: i64,
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for (place, mult) in self.iter() {
            seq.serialize_element(&Entry { place, mult })?;
        }
        seq.end()
    }
}
