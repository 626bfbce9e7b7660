//! Extraction followed by a search for counterexamples to the extracted
//! program realizing its own conclusion.  A refutation means a bug somewhere
//! in the checker, the compiler, the machine or the semantics.

use super::derivation::{check, CheckError, Derivation};
use super::formula::Formula;
use crate::compile::CompileError;
use crate::semantics::{Evaluator, Realizes, SemanticsError, TruthQuery};
use crate::terms::{Stack, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SmokeError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("extracted program is open: {0}")]
    Open(#[from] CompileError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmokeVerdict {
    /// Counterexample stack, with the predicate valuation that produced it.
    Refuted {
        stack: Stack,
        valuation: BTreeMap<String, BTreeSet<Stack>>,
    },
    Unrefuted,
}

#[derive(Clone, Debug)]
pub struct SmokeReport {
    pub conclusion: Formula,
    pub term: Term,
    pub valuations_tried: usize,
    pub verdict: SmokeVerdict,
}

/// Predicate symbols occurring in `f`.
pub fn predicates(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut work = vec![f];
    while let Some(g) = work.pop() {
        match g {
            Formula::Pred(p, _) => {
                out.insert(p.clone());
            }
            Formula::Implies(a, b) => {
                work.push(a);
                work.push(b);
            }
            Formula::Forall(_, a) | Formula::ForallEnt(_, a) | Formula::EqCond(_, _, a) => work.push(a),
            Formula::Top | Formula::Bottom | Formula::Atom(..) => {}
        }
    }
    out
}

/// Checks `d`, extracts its program and searches for a refutation under the
/// valuation already present in `q`, then under `samples` random valuations of
/// the conclusion's predicate symbols (seeded, so reports are reproducible).
/// Sampled truth values are drawn from the universe stacks and every stack
/// that occurs in the pole's known complement.
pub fn extract_and_smoke(d: &Derivation, q: &TruthQuery, samples: usize, seed: u64) -> Result<SmokeReport, SmokeError> {
    let checked = check(d)?;
    let term = checked.term.to_term()?;
    let conclusion = checked.conclusion;
    let preds = predicates(&conclusion);

    let mut pool: BTreeSet<Stack> = q.universe.stacks().iter().cloned().collect();
    for p in q.pole.complement() {
        pool.extend(p.stack.suffixes());
    }
    let pool: Vec<Stack> = pool.into_iter().collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tried = 0;
    let base_ok = preds.iter().all(|p| q.valuation.contains_key(p));
    let rounds = if base_ok { samples + 1 } else { samples };
    for round in 0..rounds {
        let mut local = q.clone();
        if round > 0 || !base_ok {
            for p in &preds {
                let set = pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                local.valuation.insert(p.clone(), set);
            }
        }
        tried += 1;
        if let Realizes::Refuted(stack) = Evaluator::new(&local).realizes(&term, &conclusion)? {
            return Ok(SmokeReport {
                conclusion,
                term,
                valuations_tried: tried,
                verdict: SmokeVerdict::Refuted {
                    stack,
                    valuation: local.valuation,
                },
            });
        }
    }
    Ok(SmokeReport {
        conclusion,
        term,
        valuations_tried: tried,
        verdict: SmokeVerdict::Unrefuted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{Pole, StackUniverse, UniverseParams};
    use crate::terms::{parse_process, Comb};

    #[test]
    fn identity_survives() {
        let d = Derivation::parse("(derivation (context) (lam (-> (pred A) (pred A)) x (hyp (pred A) x)))").unwrap();
        let u = StackUniverse::generate(UniverseParams {
            constant_count: 2,
            max_depth: 1,
            max_term_size: 1,
            combinators: vec![Comb::I, Comb::K],
        });
        let gens = vec![parse_process("I * K . pi0").unwrap(), parse_process("I * I . pi1").unwrap()];
        let q = TruthQuery::new(u, Pole::generated(gens, 50));
        let r = extract_and_smoke(&d, &q, 20, 7).unwrap();
        assert_eq!(r.term, Term::comb(Comb::I));
        assert_eq!(r.verdict, SmokeVerdict::Unrefuted);
        assert_eq!(r.valuations_tried, 20);
    }
}
