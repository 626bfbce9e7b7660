//! Finite stand-ins for the set Π of all stacks.

use crate::terms::{Comb, Stack, StackConst, Term};
use sha2::{Digest, Sha256};
use std::collections::HashSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniverseParams {
    /// Stack constants π_0 … π_{constant_count-1}.
    pub constant_count: u64,
    /// Largest number of terms pushed on a constant.
    pub max_depth: usize,
    /// Largest number of combinator leaves in a pushed term.
    pub max_term_size: usize,
    pub combinators: Vec<Comb>,
}

impl Default for UniverseParams {
    fn default() -> Self {
        UniverseParams {
            constant_count: 1,
            max_depth: 1,
            max_term_size: 1,
            combinators: Comb::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StackUniverse {
    params: Option<UniverseParams>,
    stacks: Vec<Stack>,
    index: HashSet<Stack>,
}

/// All application trees with exactly `n` leaves over `leaves`.
fn trees(n: usize, leaves: &[Comb], memo: &mut Vec<Vec<Term>>) -> Vec<Term> {
    while memo.len() <= n {
        let k = memo.len();
        let level = if k == 0 {
            Vec::new()
        } else if k == 1 {
            leaves.iter().map(|&c| Term::comb(c)).collect()
        } else {
            let mut out = Vec::new();
            for left in 1..k {
                for f in &memo[left] {
                    for a in &memo[k - left] {
                        out.push(Term::app(f.clone(), a.clone()));
                    }
                }
            }
            out
        };
        memo.push(level);
    }
    memo[n].clone()
}

impl StackUniverse {
    /// Every stack `t1 · … · tk · π_j` with `k ≤ max_depth`, each `ti` of at
    /// most `max_term_size` leaves, and `j < constant_count`.
    pub fn generate(params: UniverseParams) -> StackUniverse {
        let mut memo = Vec::new();
        let terms: Vec<Term> = (1..=params.max_term_size)
            .flat_map(|n| trees(n, &params.combinators, &mut memo))
            .collect();
        let mut stacks = Vec::new();
        for j in 0..params.constant_count {
            let mut layer = vec![Stack::constant(StackConst::new(j))];
            stacks.extend(layer.iter().cloned());
            for _ in 0..params.max_depth {
                let mut next = Vec::with_capacity(layer.len() * terms.len());
                for s in &layer {
                    for t in &terms {
                        next.push(Stack::push(t.clone(), s.clone()));
                    }
                }
                stacks.extend(next.iter().cloned());
                layer = next;
            }
        }
        let mut u = StackUniverse::from_stacks(stacks);
        u.params = Some(params);
        u
    }

    /// The given stacks together with all their suffixes, in first-seen order.
    pub fn from_stacks<I: IntoIterator<Item = Stack>>(stacks: I) -> StackUniverse {
        let mut out = Vec::new();
        let mut index = HashSet::new();
        for s in stacks {
            let mut sufs = s.suffixes();
            sufs.reverse();
            for r in sufs {
                if index.insert(r.clone()) {
                    out.push(r);
                }
            }
        }
        StackUniverse {
            params: None,
            stacks: out,
            index,
        }
    }

    pub fn params(&self) -> Option<&UniverseParams> {
        self.params.as_ref()
    }

    pub fn stacks(&self) -> &[Stack] {
        &self.stacks
    }

    pub fn len(&self) -> usize {
        self.stacks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stacks.is_empty()
    }

    pub fn contains(&self, s: &Stack) -> bool {
        self.index.contains(s)
    }

    /// Short digest of the stack list, used to label reports.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for s in &self.stacks {
            h.update(s.to_string().as_bytes());
            h.update(b"\n");
        }
        h.finalize().iter().take(8).map(|b| format!("{:02x}", b)).collect()
    }
}

impl fmt::Display for StackUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.params {
            Some(p) => write!(
                f,
                "universe[{} stacks; constants={}, depth<={}, term size<={}, {}]",
                self.stacks.len(),
                p.constant_count,
                p.max_depth,
                p.max_term_size,
                self.fingerprint()
            ),
            None => write!(f, "universe[{} stacks; explicit, {}]", self.stacks.len(), self.fingerprint()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_and_counted() {
        let p = UniverseParams {
            constant_count: 2,
            max_depth: 2,
            max_term_size: 1,
            combinators: vec![Comb::I, Comb::K],
        };
        let u = StackUniverse::generate(p.clone());
        // per constant: 1 + 2 + 4
        assert_eq!(u.len(), 14);
        assert_eq!(u.fingerprint(), StackUniverse::generate(p).fingerprint());
        let s = u.stacks()[3].clone();
        assert!(s.suffixes().iter().all(|r| u.contains(r)));
    }

    #[test]
    fn explicit_universe_is_suffix_closed() {
        let s = Stack::from_terms([Term::comb(Comb::I), Term::comb(Comb::K)], Stack::pi(3));
        let u = StackUniverse::from_stacks([s]);
        assert_eq!(u.len(), 3);
        assert_eq!(u.stacks()[0], Stack::pi(3));
    }
}
