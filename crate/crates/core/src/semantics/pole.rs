//! Poles given by the complement: ⊥ᶜ is the set of reducts of finitely many
//! generator processes, so ⊥ is a final segment by construction.

use crate::machine::{run, RunOptions, RunReport, RunStatus};
use crate::terms::{Process, Stack, Term};
use std::collections::{HashMap, HashSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleVerdict {
    /// The process reduces from a generator: it is outside ⊥.
    InComplement,
    /// Every generator run was certified and the process never occurs.
    InPole,
    UnknownWithinBudget,
}

#[derive(Clone)]
pub struct Pole {
    generators: Vec<Process>,
    budget: usize,
    runs: Vec<RunStatus>,
    reducts: HashSet<Process>,
    by_head: HashMap<Term, Vec<Stack>>,
    certified: bool,
}

impl Pole {
    /// ⊥ = Λ⋆Π: nothing is in the complement.
    pub fn empty() -> Pole {
        Pole::generated(Vec::new(), 0)
    }

    pub fn generated(generators: Vec<Process>, budget: usize) -> Pole {
        let mut reducts = HashSet::new();
        let mut by_head: HashMap<Term, Vec<Stack>> = HashMap::new();
        let mut runs = Vec::with_capacity(generators.len());
        for g in &generators {
            let report: RunReport = run(g, &RunOptions::with_cycles(budget));
            for p in report.processes() {
                if reducts.insert(p.clone()) {
                    by_head.entry(p.head.clone()).or_default().push(p.stack.clone());
                }
            }
            runs.push(report.status);
        }
        let certified = runs.iter().all(RunStatus::is_certified);
        Pole {
            generators,
            budget,
            runs,
            reducts,
            by_head,
            certified,
        }
    }

    pub fn generators(&self) -> &[Process] {
        &self.generators
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn run_statuses(&self) -> &[RunStatus] {
        &self.runs
    }

    /// True when the complement is known exactly.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn complement(&self) -> &HashSet<Process> {
        &self.reducts
    }

    /// Stacks π with ξ⋆π in the known complement, in discovery order.
    pub fn stacks_for(&self, head: &Term) -> &[Stack] {
        self.by_head.get(head).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn heads(&self) -> impl Iterator<Item = &Term> {
        self.by_head.keys()
    }

    pub fn member(&self, p: &Process) -> PoleVerdict {
        if self.reducts.contains(p) {
            PoleVerdict::InComplement
        } else if self.certified {
            PoleVerdict::InPole
        } else {
            PoleVerdict::UnknownWithinBudget
        }
    }
}

pub fn pole_member(p: &Process, pole: &Pole) -> PoleVerdict {
    pole.member(p)
}

impl fmt::Display for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pole[{} generators, budget {}, {} reducts, {}]",
            self.generators.len(),
            self.budget,
            self.reducts.len(),
            if self.certified { "certified" } else { "partial" }
        )
    }
}

impl fmt::Debug for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{step, StepOutcome};
    use crate::terms::parse_process;

    #[test]
    fn stuck_generator_certifies() {
        let g = parse_process("K * pi0").unwrap();
        let pole = Pole::generated(vec![g.clone()], 10);
        assert!(pole.is_certified());
        assert_eq!(pole.member(&g), PoleVerdict::InComplement);
        assert_eq!(pole.member(&parse_process("I * pi0").unwrap()), PoleVerdict::InPole);
    }

    #[test]
    fn complement_is_forward_closed() {
        let g = parse_process("(W W) * (B I) . K . pi0").unwrap();
        let pole = Pole::generated(vec![g], 50);
        for p in pole.complement() {
            if let StepOutcome::Next(_, q) = step(p) {
                if pole.is_certified() {
                    assert_eq!(pole.member(&q), PoleVerdict::InComplement);
                }
            }
        }
    }

    #[test]
    fn uncertified_is_unknown() {
        let om = parse_process("((W I) (W I)) * pi0").unwrap();
        let pole = Pole::generated(vec![om], 3);
        assert!(!pole.is_certified());
        assert_eq!(pole.member(&parse_process("I * pi0").unwrap()), PoleVerdict::UnknownWithinBudget);
        assert!(Pole::empty().is_certified());
    }
}
