//! Exact computation in rational function fields `F_q(t)` over finite
//! fields: factorization, places and divisors, l-behavedness, p-power towers,
//! norm equations for constant-field extensions, and a compiler from
//! positive-existential arithmetic sentences to ring-language formulas.

pub mod behaved;
pub mod error;
pub mod funcfield;
pub mod galois;
pub mod logic;
pub mod norms;
pub mod power;

pub use error::{Error, Result};
pub use funcfield::{Divisor, MobiusMap, Place, RationalFunction};
pub use galois::{factor, Factorization, FieldSpec, Fq, FqElement, Poly};
