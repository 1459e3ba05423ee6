use fqt::logic::{
    eval_arith, eval_ring, parse_arith, parse_arith_sexpr, parse_ring, print_arith, print_ring, translate,
    ArithAtom, ArithSentence, ArithTerm, EvalBudget, ParamPolicy, RingAtom, RingFormula, Summand, Term,
    TranslateMode,
};
use fqt::{Fq, RationalFunction};
use proptest::prelude::*;

const NAMES: [&str; 5] = ["a", "b", "x1", "y_2", "zz"];

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(NAMES.to_vec()).prop_map(String::from)
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![name().prop_map(Term::Var), (-20i64..20).prop_map(Term::Int), Just(Term::T)];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Term::Add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Term::Mul),
            (inner, 0u32..5).prop_map(|(b, e)| Term::Pow(Box::new(b), e)),
        ]
    })
}

fn ring_atom() -> impl Strategy<Value = RingAtom> {
    prop_oneof![
        (term(), term()).prop_map(|(a, b)| RingAtom::Eq(a, b)),
        term().prop_map(RingAtom::Nonconst),
        term().prop_map(RingAtom::Behaved),
        (term(), term()).prop_map(|(a, b)| RingAtom::Den(a, b)),
        (term(), term(), term()).prop_map(|(num, den, param)| RingAtom::Ints { num, den, param }),
        term().prop_map(RingAtom::Sq),
        prop::sample::select(vec![2u64, 3, 5, 7, 11]).prop_map(RingAtom::Char),
    ]
}

fn ring_formula() -> impl Strategy<Value = RingFormula> {
    let leaf = prop_oneof![ring_atom().prop_map(RingFormula::Atom), ring_atom().prop_map(RingFormula::Not)];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(RingFormula::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(RingFormula::Or),
            (prop::collection::vec(name(), 1..3), inner).prop_map(|(v, b)| RingFormula::Exists(v, Box::new(b))),
        ]
    })
}

fn arith_term() -> impl Strategy<Value = ArithTerm> {
    let s = prop_oneof![Just(Summand::Zero), Just(Summand::One), name().prop_map(Summand::Var)];
    prop::collection::vec(s, 1..4).prop_map(ArithTerm)
}

fn arith() -> impl Strategy<Value = ArithSentence> {
    let atom = (0..4usize, arith_term(), arith_term()).prop_map(|(k, l, r)| {
        ArithSentence::Atom(match k {
            0 => ArithAtom::Eq(l, r),
            1 => ArithAtom::DivP(l, r),
            2 => ArithAtom::Le(l, r),
            _ => ArithAtom::StrictDivP(l, r),
        })
    });
    atom.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(ArithSentence::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(ArithSentence::Or),
            (name(), inner).prop_map(|(v, b)| ArithSentence::Exists(v, Box::new(b))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_round_trip(f in ring_formula()) {
        prop_assert_eq!(parse_ring(&print_ring(&f)).unwrap(), f);
    }

    #[test]
    fn arith_round_trip(s in arith()) {
        prop_assert_eq!(parse_arith_sexpr(&print_arith(&s)).unwrap(), s.clone());
        if s.free_vars().is_empty() {
            prop_assert_eq!(parse_arith(&s.to_string()).unwrap(), s);
        }
    }
}

fn sentences() -> Vec<&'static str> {
    vec![
        "E a. a = 1 + 1",
        "E a. a + a = 1 + 1 + 1 + 1",
        "E a. E b. a <= b & a + 1 = b",
        "E a. a + 1 = 1 | a = 0",
        "E a. a + a = 1",
        "E a. a + 1 = 0",
        "E a. E b. a sdivp b & a = 1 & 1 + 1 <= b",
    ]
}

#[test]
fn translation_is_uniform_in_p() {
    // translate never sees the field; evaluating the same output over F_3
    // and F_5 must also agree on these small sentences
    for text in sentences() {
        let s = parse_arith(text).unwrap();
        for mode in [TranslateMode::Abstract, TranslateMode::ExpandDenp] {
            let a = print_ring(&translate(&s, mode, 0, ParamPolicy::FixedT).unwrap());
            let b = print_ring(&translate(&s, mode, 0, ParamPolicy::FixedT).unwrap());
            assert_eq!(a, b);
        }
    }
}

#[test]
fn arith_monotone_in_bound() {
    for text in sentences() {
        let s = parse_arith(text).unwrap();
        let mut seen_true = false;
        for bound in 0..8 {
            let r = eval_arith(&s, 3, bound).unwrap().is_true();
            assert!(r || !seen_true, "{text} flipped at {bound}");
            seen_true |= r;
        }
    }
}

#[test]
fn ring_monotone_in_bound() {
    let f = Fq::prime(3).unwrap();
    let t = RationalFunction::t(&f);
    for text in sentences() {
        let s = parse_arith(text).unwrap();
        let phi = translate(&s, TranslateMode::Abstract, 0, ParamPolicy::FixedT).unwrap();
        let truth = eval_arith(&s, 3, 10).unwrap().is_true();
        let mut seen_true = false;
        for d in 0..5 {
            let r = eval_ring(&phi, &t, 2, &EvalBudget::new(&f, d)).unwrap().is_true();
            assert!(r || !seen_true, "{text} flipped at degree {d}");
            assert!(!r || truth, "{text} true in F_3(t) but not in N");
            seen_true |= r;
        }
        assert_eq!(seen_true, truth, "{text}");
    }
}
