use proptest::prelude::*;
use realizability::terms::{Process, Stack};
use realizability::threads::{in_thread, locate_thread, prooflike_enum, prooflike_index, run_thread, thread_start, ThreadLocation, ThreadMembership};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// A certified "no" never turns into "yes" with a larger budget.
    #[test]
    fn certified_no_is_sound(n in 0usize..300, m in 0usize..300, k in 0usize..6) {
        let r = run_thread(m, 200);
        let Some(p) = r.run.processes().nth(k).cloned() else { return Ok(()) };
        if let ThreadMembership::NoCertified = in_thread(&p, n, 200) {
            prop_assert!(!matches!(in_thread(&p, n, 400), ThreadMembership::Yes(_)));
            prop_assert_ne!(n, m);
        }
    }

    #[test]
    fn threads_are_local(n in 0usize..2_000) {
        let r = run_thread(n, 500);
        prop_assert!(r.is_local());
        for p in r.run.processes() {
            prop_assert_eq!(locate_thread(p), ThreadLocation::Thread(n as u64));
        }
    }

    #[test]
    fn enumeration_is_injective(n in 0usize..5_000) {
        let t = prooflike_enum(n);
        prop_assert!(t.is_proof_like());
        prop_assert_eq!(prooflike_index(&t), Some(n));
    }
}

#[test]
fn starts_are_in_their_own_thread() {
    for n in 0..50 {
        assert_eq!(in_thread(&thread_start(n), n, 10), ThreadMembership::Yes(0));
    }
    let stray = Process::new(prooflike_enum(3), Stack::pi(7));
    assert_eq!(in_thread(&stray, 3, 100), ThreadMembership::NoCertified);
}
