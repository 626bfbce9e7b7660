use num_bigint::BigUint;
use proptest::prelude::*;
use realizability::terms::{
    cantor_pair, cantor_unpair, decode, decode_stack, encode, encode_stack, numeral, parse_process, parse_stack, parse_term,
    sigma, Comb, Process, Stack, Term,
};

fn arb_comb() -> impl Strategy<Value = Comb> {
    (0usize..8).prop_map(|i| Comb::ALL[i])
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        4 => arb_comb().prop_map(Term::comb),
        1 => (0u64..12).prop_map(numeral),
        1 => (0u64..5).prop_map(|j| Term::cont(Stack::pi(j))),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            1 => (prop::collection::vec(inner, 0..3), 0u64..5).prop_map(|(ts, j)| Term::cont(Stack::from_terms(ts, Stack::pi(j)))),
        ]
    })
}

fn arb_stack() -> impl Strategy<Value = Stack> {
    (prop::collection::vec(arb_term(), 0..4), 0u64..5).prop_map(|(ts, j)| Stack::from_terms(ts, Stack::pi(j)))
}

/// Codes square at every level of nesting, so coded terms stay shallow.
fn arb_small_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        4 => arb_comb().prop_map(Term::comb),
        1 => (0u64..2).prop_map(numeral),
        1 => (0u64..5).prop_map(|j| Term::cont(Stack::pi(j))),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| (inner.clone(), inner).prop_map(|(f, a)| Term::app(f, a)))
}

proptest! {
    #[test]
    fn term_print_parse(t in arb_term()) {
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn process_print_parse(t in arb_term(), s in arb_stack()) {
        let p = Process::new(t, s.clone());
        prop_assert_eq!(parse_process(&p.to_string()).unwrap(), p);
        prop_assert_eq!(parse_stack(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn term_codes_roundtrip(t in arb_small_term()) {
        prop_assert_eq!(decode(&encode(&t)), t);
    }

    #[test]
    fn stack_codes_roundtrip(ts in prop::collection::vec(arb_small_term(), 0..3), j in 0u64..5) {
        let s = Stack::from_terms(ts, Stack::pi(j));
        prop_assert_eq!(decode_stack(&encode_stack(&s)), s);
    }

    #[test]
    fn codes_roundtrip(n in any::<u64>()) {
        let n = BigUint::from(n);
        prop_assert_eq!(encode(&decode(&n)), n);
    }

    #[test]
    fn pairing_roundtrip(a in any::<u32>(), b in any::<u32>()) {
        let (a, b) = (BigUint::from(a), BigUint::from(b));
        prop_assert_eq!(cantor_unpair(&cantor_pair(&a, &b)), (a, b));
    }

    #[test]
    fn successor_is_sigma(n in 0u64..200) {
        prop_assert_eq!(Term::app(sigma().clone(), numeral(n)), numeral(n + 1));
        prop_assert!(numeral(n).is_proof_like());
    }

    #[test]
    fn continuations_are_not_proof_like(t in arb_term()) {
        let has_cont = t.to_string().contains("k[");
        prop_assert_eq!(t.is_proof_like(), !has_cont);
    }
}

#[test]
fn zero_is_k_i() {
    assert_eq!(Term::app(Term::comb(Comb::K), Term::comb(Comb::I)), numeral(0));
    assert_eq!(decode(&BigUint::from(3u8)), Term::comb(Comb::I));
    assert_eq!(encode(&Term::comb(Comb::Quote)), BigUint::from(7u8));
}
