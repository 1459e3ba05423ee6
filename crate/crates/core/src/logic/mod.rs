//! Formula languages, their S-expression syntax, the arithmetic-to-ring
//! compiler and bounded evaluators.

pub mod arith;
pub mod ast;
pub mod eval;
pub mod sexpr;
pub mod translate;

pub use arith::{derive_strict_div, eval_arith, parse_arith, ArithOutcome};
pub use ast::{ArithAtom, ArithSentence, ArithTerm, RingAtom, RingFormula, Summand, Term};
pub use eval::{eval_ring, EvalBudget, RingOutcome};
pub use sexpr::{parse_arith_sexpr, parse_ring, parse_term, print_arith, print_ring, print_term};
pub use translate::{translate, wrap_universal_psi_c, ParamPolicy, TranslateMode};
