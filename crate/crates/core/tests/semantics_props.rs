use proptest::prelude::*;
use realizability::logic::{Formula, Rel, SetTerm};
use realizability::machine::{step, StepOutcome};
use realizability::semantics::{gimel, integer_name, Evaluator, Name, Pole, PoleVerdict, StackUniverse, Truth, TruthQuery};
use realizability::terms::{numeral, Comb, Process, Stack, Term};

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        4 => (0usize..7).prop_map(|i| Term::comb(Comb::ALL[i])),
        1 => (0u64..3).prop_map(numeral),
        1 => (0u64..3).prop_map(|j| Term::cont(Stack::pi(j))),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| (inner.clone(), inner).prop_map(|(f, a)| Term::app(f, a)))
}

fn arb_process() -> impl Strategy<Value = Process> {
    (arb_term(), prop::collection::vec(arb_term(), 0..4), 0u64..3)
        .prop_map(|(h, ts, j)| Process::new(h, Stack::from_terms(ts, Stack::pi(j))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// ⊥ is a final segment: the complement is closed under reduction, so a
    /// predecessor of anything outside ⊥ is outside ⊥.
    #[test]
    fn pole_is_final_segment(gens in prop::collection::vec(arb_process(), 1..4)) {
        let pole = Pole::generated(gens, 100);
        for p in pole.complement() {
            if let StepOutcome::Next(_, q) = step(p) {
                if pole.is_certified() {
                    prop_assert_eq!(pole.member(&q), PoleVerdict::InComplement);
                } else {
                    prop_assert_ne!(pole.member(&q), PoleVerdict::InPole);
                }
            }
        }
    }

    #[test]
    fn rank_measure_decreases(gens in prop::collection::vec(arb_process(), 1..3), pick in 0usize..4) {
        let pole = Pole::generated(gens, 100);
        let u = StackUniverse::from_stacks(pole.complement().iter().map(|p| p.stack.clone()).take(8).collect::<Vec<_>>());
        let a = integer_name(1, &u);
        let b = integer_name(2, &u);
        let c = gimel([&a, &Name::empty()], &u);
        let names = [a, b, c, Name::empty()];
        let q = TruthQuery::new(u.clone(), pole);
        let ev = Evaluator::new(&q);
        let x = &names[pick];
        for y in &names {
            for rel in [Rel::Sub, Rel::NotIn, Rel::NotEps] {
                let f = Formula::atom(rel, SetTerm::param("x", x.clone()), SetTerm::param("y", y.clone()));
                for s in u.stacks() {
                    ev.member(s, &f).unwrap();
                }
            }
        }
        prop_assert_eq!(ev.rank_log().violations, 0);
    }
}

#[test]
fn top_and_bottom() {
    let q = TruthQuery::new(StackUniverse::from_stacks([Stack::pi(0)]), Pole::empty());
    let ev = Evaluator::new(&q);
    assert_eq!(ev.member(&Stack::pi(0), &Formula::Top).unwrap(), Truth::No);
    assert_eq!(ev.member(&Stack::pi(0), &Formula::Bottom).unwrap(), Truth::Yes);
    // every term realizes everything when nothing is outside ⊥
    assert_eq!(ev.forces(&Term::comb(Comb::K), &Formula::Bottom).unwrap(), Truth::Yes);
}
