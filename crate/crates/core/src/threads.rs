//! The model of threads: thread `n` is the run of `θ_n ⋆ π_n`, where `θ_n`
//! is the n-th proof-like term in code order and `π_n` the stack constant of
//! index `n`.  ⊥ᶜ is the union of all threads.

use crate::machine::{run, RunOptions, RunReport, RunStatus};
use crate::semantics::{realizes, Pole, Realizes, StackUniverse, TruthQuery};
use crate::terms::{cantor_unpair, decode, ConstSummary, Process, Stack, StackConst, Term};
use crate::logic::Formula;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Mutex;

/// Proof-likeness of every code below a growing bound, and the proof-like
/// codes in increasing order.
#[derive(Default)]
struct Sieve {
    flags: Vec<bool>,
    codes: Vec<u64>,
}

impl Sieve {
    fn extend_to(&mut self, count: usize) {
        while self.codes.len() <= count {
            let n = self.flags.len() as u64;
            let ok = if n < 8 {
                true
            } else {
                let m = n - 8;
                if m % 2 == 1 {
                    false
                } else {
                    let (a, b) = cantor_unpair(&BigUint::from(m / 2));
                    // both components are strictly smaller than n
                    self.flags[a.to_usize().unwrap()] && self.flags[b.to_usize().unwrap()]
                }
            };
            self.flags.push(ok);
            if ok {
                self.codes.push(n);
            }
        }
    }
}

static SIEVE: Mutex<Sieve> = Mutex::new(Sieve {
    flags: Vec::new(),
    codes: Vec::new(),
});

/// Code of `θ_n`.
pub fn prooflike_code(n: usize) -> u64 {
    let mut s = SIEVE.lock().unwrap_or_else(|e| e.into_inner());
    s.extend_to(n);
    s.codes[n]
}

/// `θ_n`.
pub fn prooflike_enum(n: usize) -> Term {
    decode(&BigUint::from(prooflike_code(n)))
}

/// Inverse of [`prooflike_enum`]: the index of a proof-like term, `None` for
/// terms with a continuation.  Searches codes up to the term's own code.
pub fn prooflike_index(t: &Term) -> Option<usize> {
    if !t.is_proof_like() {
        return None;
    }
    let code = crate::terms::encode(t).to_u64()?;
    let mut s = SIEVE.lock().unwrap_or_else(|e| e.into_inner());
    while s.flags.len() as u64 <= code {
        let k = s.codes.len();
        s.extend_to(k);
    }
    s.codes.binary_search(&code).ok()
}

pub fn thread_start(n: usize) -> Process {
    Process::new(prooflike_enum(n), Stack::pi(n as u64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThreadStatus {
    /// Budget ran out (or a quoted code became too large to build).
    Ongoing,
    Cyclic { prefix: usize, period: usize },
    Stuck,
}

impl ThreadStatus {
    pub fn is_certified(&self) -> bool {
        !matches!(self, ThreadStatus::Ongoing)
    }
}

impl fmt::Display for ThreadStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThreadStatus::Ongoing => f.write_str("Ongoing"),
            ThreadStatus::Stuck => f.write_str("Stuck"),
            ThreadStatus::Cyclic { prefix, period } => write!(f, "Cyclic(prefix={}, period={})", prefix, period),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThreadReport {
    pub index: usize,
    pub theta: Term,
    pub run: RunReport,
    pub status: ThreadStatus,
    pub constants_seen: BTreeSet<StackConst>,
}

impl ThreadReport {
    /// Constants stay inside `{π_n}`.
    pub fn is_local(&self) -> bool {
        self.constants_seen.iter().all(|c| c.as_u64() == Some(self.index as u64))
    }
}

fn collect_constants(summary: &ConstSummary, full: impl FnOnce() -> BTreeSet<StackConst>, out: &mut BTreeSet<StackConst>) {
    match summary {
        ConstSummary::None => {}
        ConstSummary::One(c) => {
            out.insert(c.clone());
        }
        ConstSummary::Many => out.extend(full()),
    }
}

pub fn run_thread(n: usize, budget: usize) -> ThreadReport {
    let start = thread_start(n);
    let report = run(&start, &RunOptions::with_cycles(budget));
    let mut seen = BTreeSet::new();
    for p in report.processes() {
        collect_constants(p.head.const_summary(), || p.head.stack_constants(), &mut seen);
        collect_constants(p.stack.const_summary(), || p.stack.stack_constants(), &mut seen);
    }
    let status = match report.status {
        RunStatus::Stuck => ThreadStatus::Stuck,
        RunStatus::Cyclic { prefix, period } => ThreadStatus::Cyclic { prefix, period },
        RunStatus::BudgetExhausted | RunStatus::QuoteTooLarge => ThreadStatus::Ongoing,
    };
    ThreadReport {
        index: n,
        theta: start.head,
        run: report,
        status,
        constants_seen: seen,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreadMembership {
    /// Found at this step.
    Yes(usize),
    NoCertified,
    UnknownWithinBudget,
}

pub fn in_thread(p: &Process, n: usize, budget: usize) -> ThreadMembership {
    let r = run_thread(n, budget);
    let found = r.run.processes().position(|q| q == p);
    match found {
        Some(i) => ThreadMembership::Yes(i),
        None if r.status.is_certified() => ThreadMembership::NoCertified,
        None => ThreadMembership::UnknownWithinBudget,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThreadLocation {
    Thread(u64),
    /// No constant singles out a thread (or the constants disagree).
    NotApplicable,
}

/// The only thread that can contain `p`, read off its stack constants.
pub fn locate_thread(p: &Process) -> ThreadLocation {
    locate_thread_with(p, &|c| c.as_u64())
}

/// As [`locate_thread`], for an arbitrary enumeration of stack constants;
/// `index_of` returns `None` for constants that are never enumerated.
pub fn locate_thread_with(p: &Process, index_of: &dyn Fn(&StackConst) -> Option<u64>) -> ThreadLocation {
    let mut consts = p.head.stack_constants();
    consts.extend(p.stack.stack_constants());
    let idx: BTreeSet<Option<u64>> = consts.iter().map(index_of).collect();
    match idx.into_iter().collect::<Vec<_>>().as_slice() {
        [Some(n)] => ThreadLocation::Thread(*n),
        _ => ThreadLocation::NotApplicable,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceReport {
    pub checked: usize,
    /// Indices whose `θ_n` did not come out as non-realizer of ⊥ with witness `π_n`.
    pub failures: Vec<usize>,
}

impl CoherenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each `n < count`: `θ_n ⋆ π_n` is in the complement, so `θ_n ⊮ ⊥` with
/// witness `π_n`.
pub fn coherence_check(count: usize) -> CoherenceReport {
    let mut failures = Vec::new();
    for n in 0..count {
        let start = thread_start(n);
        // the first state of the thread is all that is needed
        let pole = Pole::generated(vec![start.clone()], 0);
        let q = TruthQuery::new(StackUniverse::from_stacks([]), pole);
        match realizes(&start.head, &Formula::Bottom, &q) {
            Ok(Realizes::Refuted(w)) if w == start.stack => {}
            _ => failures.push(n),
        }
    }
    CoherenceReport { checked: count, failures }
}

/// The pole whose complement is the union of threads `0..count`, each run for
/// `budget` steps.
pub fn thread_pole(count: usize, budget: usize) -> Pole {
    Pole::generated((0..count).map(thread_start).collect(), budget)
}

/// The first thread below `scan_limit` that is certified cyclic.
pub fn first_cyclic_thread(scan_limit: usize, budget: usize) -> Option<ThreadReport> {
    (0..scan_limit)
        .map(|n| run_thread(n, budget))
        .find(|r| matches!(r.status, ThreadStatus::Cyclic { .. }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopDemo {
    /// `α ⋆ π` occurs at most once in the budget.
    NotApplicable { occurrences: usize, status: RunStatus },
    Loop(LoopReport),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopReport {
    pub first: usize,
    pub second: usize,
    pub status: RunStatus,
    /// The run is certified cyclic and the repeated state is the second `α ⋆ π`.
    pub cycle_at_second: bool,
    /// First step at which `k_π α ζ_i` is in head position.
    pub heads: [Option<usize>; 3],
    /// All three heads appeared: impossible once the run loops.
    pub counterexample: bool,
}

/// Runs `k_π α ζ_0 ⋆ π` and checks the loop argument: once `α ⋆ π` has
/// appeared twice the run is periodic, so not all three `k_π α ζ_i` can reach
/// head position.
pub fn loop_argument_demo(alpha: &Term, zetas: &[Term; 3], pi: &Stack, budget: usize) -> LoopDemo {
    assert!(
        zetas[0] != zetas[1] && zetas[1] != zetas[2] && zetas[0] != zetas[2],
        "the three terms must be distinct"
    );
    let k = Term::cont(pi.clone());
    let heads: Vec<Term> = zetas
        .iter()
        .map(|z| Term::app(Term::app(k.clone(), alpha.clone()), z.clone()))
        .collect();
    let start = Process::new(heads[0].clone(), pi.clone());
    let report = run(&start, &RunOptions::with_cycles(budget));
    let target = Process::new(alpha.clone(), pi.clone());
    let occ: Vec<usize> = report
        .trace
        .iter()
        .filter(|e| e.process == target)
        .map(|e| e.index)
        .collect();
    if occ.len() < 2 {
        return LoopDemo::NotApplicable {
            occurrences: occ.len(),
            status: report.status,
        };
    }
    let (first, second) = (occ[0], occ[1]);
    let cycle_at_second = matches!(report.status, RunStatus::Cyclic { prefix, period }
        if prefix == first && prefix + period == second);
    let mut seen = [None; 3];
    for e in &report.trace {
        for (i, h) in heads.iter().enumerate() {
            if seen[i].is_none() && e.process.head == *h {
                seen[i] = Some(e.index);
            }
        }
    }
    LoopDemo::Loop(LoopReport {
        first,
        second,
        status: report.status,
        cycle_at_second,
        heads: seen,
        counterexample: seen.iter().all(Option::is_some),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{parse_term, Comb};

    #[test]
    fn first_entries() {
        assert_eq!(prooflike_enum(0), Term::comb(Comb::B));
        assert_eq!(prooflike_enum(7), Term::comb(Comb::Quote));
        let t = prooflike_enum(40);
        assert!(t.is_proof_like());
        assert_eq!(prooflike_index(&t), Some(40));
        assert_eq!(prooflike_index(&parse_term("k[pi0]").unwrap()), None);
    }

    #[test]
    fn b_thread_is_stuck_at_once() {
        let r = run_thread(0, 100);
        assert_eq!(r.status, ThreadStatus::Stuck);
        assert_eq!(r.run.steps(), 0);
        assert!(r.is_local());
        assert_eq!(in_thread(&thread_start(0), 0, 10), ThreadMembership::Yes(0));
        assert_eq!(in_thread(&thread_start(1), 0, 10), ThreadMembership::NoCertified);
    }

    #[test]
    fn locations() {
        let p = Process::new(parse_term("(K k[I . pi3])").unwrap(), Stack::pi(3));
        assert_eq!(locate_thread(&p), ThreadLocation::Thread(3));
        let q = Process::new(Term::comb(Comb::K), Stack::pi(5));
        assert_eq!(locate_thread(&q), ThreadLocation::Thread(5));
        let evens_only = |c: &StackConst| c.as_u64().filter(|n| n % 2 == 0).map(|n| n / 2);
        assert_eq!(locate_thread_with(&q, &evens_only), ThreadLocation::NotApplicable);
    }

    #[test]
    fn identity_does_not_loop() {
        let k = Term::comb(Comb::K);
        let pi = Stack::push(k.clone(), Stack::pi(0));
        let zs = [k, Term::comb(Comb::W), Term::comb(Comb::C)];
        assert!(matches!(
            loop_argument_demo(&Term::comb(Comb::I), &zs, &pi, 100),
            LoopDemo::NotApplicable { occurrences: 1, .. }
        ));
    }

    #[test]
    fn coherence_small() {
        assert!(coherence_check(0).passed());
        assert!(coherence_check(20).passed());
    }
}
