//! Truth values ‖F‖ and bounded realizability.
//!
//! Membership `π ∈ ‖F‖` is decided by recursion on `F` and the shape of `π`.
//! The realizability check `ξ ⊩ A` only needs the stacks `ρ` with `ξ⋆ρ`
//! outside ⊥, and for a generated pole those are exactly the stacks recorded
//! under head `ξ`.  So `⊩` is exact whenever the pole is certified; otherwise
//! a positive answer degrades to `Unknown`.
//!
//! The universe only enters through the names it builds (`s`, `gimel`, `Ñ`),
//! and `∀` ranges over the declared pool.

use super::name::Name;
use super::pole::Pole;
use super::universe::StackUniverse;
use crate::logic::{Formula, Rel, SetTerm};
use crate::terms::{decode, Stack, Term};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    Yes,
    No,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::Yes
        } else {
            Truth::No
        }
    }

    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::No, _) | (_, Truth::No) => Truth::No,
            (Truth::Yes, Truth::Yes) => Truth::Yes,
            _ => Truth::Unknown,
        }
    }

    pub fn or(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::Yes, _) | (_, Truth::Yes) => Truth::Yes,
            (Truth::No, Truth::No) => Truth::No,
            _ => Truth::Unknown,
        }
    }

    pub fn not(self) -> Truth {
        match self {
            Truth::Yes => Truth::No,
            Truth::No => Truth::Yes,
            Truth::Unknown => Truth::Unknown,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::Yes => "yes",
            Truth::No => "no",
            Truth::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("formula is not closed: free variable {0}")]
    NonClosed(String),
    #[error("no valuation for predicate {0}")]
    UnknownPredicate(String),
    #[error("unknown function symbol {0}")]
    UnknownFunction(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realizes {
    /// `π ∈ ‖F‖` and `ξ⋆π` is a reduct of a generator.
    Refuted(Stack),
    Unrefuted,
}

/// Everything a closed formula is evaluated against.
#[derive(Clone, Debug)]
pub struct TruthQuery {
    pub universe: StackUniverse,
    pub pole: Pole,
    /// The range of unrestricted `∀`, with print labels.
    pub pool: Vec<(String, Name)>,
    /// `‖P(…)‖` for each predicate symbol, independent of the arguments.
    pub valuation: BTreeMap<String, BTreeSet<Stack>>,
    /// Largest integer `add`/`mul` will build; beyond it the value is unknown.
    pub arith_cap: u64,
}

impl TruthQuery {
    pub fn new(universe: StackUniverse, pole: Pole) -> TruthQuery {
        TruthQuery {
            universe,
            pole,
            pool: Vec::new(),
            valuation: BTreeMap::new(),
            arith_cap: 256,
        }
    }

    pub fn with_pool(mut self, pool: Vec<(String, Name)>) -> TruthQuery {
        self.pool = pool;
        self
    }

    pub fn with_predicate(mut self, p: &str, stacks: BTreeSet<Stack>) -> TruthQuery {
        self.valuation.insert(p.to_string(), stacks);
        self
    }
}

pub fn gimel<'a, I: IntoIterator<Item = &'a Name>>(e: I, u: &StackUniverse) -> Name {
    let mut pairs = Vec::new();
    for a in e {
        for s in u.stacks() {
            pairs.push((a.clone(), s.clone()));
        }
    }
    Name::new(pairs)
}

pub fn successor_name(a: &Name, u: &StackUniverse) -> Name {
    gimel([a], u)
}

/// `sⁿ0`.
pub fn integer_name(n: u64, u: &StackUniverse) -> Name {
    (0..n).fold(Name::empty(), |a, _| successor_name(&a, u))
}

/// `{(sⁿ0, ṉ·π) : n ≤ n_max, π ∈ U}`.
pub fn ntilde(n_max: u64, u: &StackUniverse) -> Name {
    let mut pairs = Vec::new();
    let mut a = Name::empty();
    for n in 0..=n_max {
        let num = Term::numeral(n);
        for s in u.stacks() {
            pairs.push((a.clone(), Stack::push(num.clone(), s.clone())));
        }
        a = successor_name(&a, u);
    }
    Name::new(pairs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaValue {
    Zero,
    One,
    Unknown,
}

/// Bounded Δ: 1 when `ξ_n` heads a known reduct (so `ξ_n ⊮ ⊥`), 0 when the
/// pole is certified and it heads none.
pub fn delta(n: &BigUint, pole: &Pole) -> DeltaValue {
    let xi = decode(n);
    if !pole.stacks_for(&xi).is_empty() {
        DeltaValue::One
    } else if pole.is_certified() {
        DeltaValue::Zero
    } else {
        DeltaValue::Unknown
    }
}

pub fn norm_member(pi: &Stack, f: &Formula, q: &TruthQuery) -> Result<Truth, SemanticsError> {
    closed(f)?;
    Evaluator::new(q).member(pi, f)
}

pub fn forces(xi: &Term, f: &Formula, q: &TruthQuery) -> Result<Truth, SemanticsError> {
    closed(f)?;
    Evaluator::new(q).forces(xi, f)
}

pub fn realizes(xi: &Term, f: &Formula, q: &TruthQuery) -> Result<Realizes, SemanticsError> {
    closed(f)?;
    Evaluator::new(q).realizes(xi, f)
}

fn closed(f: &Formula) -> Result<(), SemanticsError> {
    match f.free_vars().into_iter().next() {
        Some(x) => Err(SemanticsError::NonClosed(x)),
        None => Ok(()),
    }
}

type AtomKey = (Rel, Name, Name);

/// One evaluation session.  Caches are private to the session.
pub struct Evaluator<'q> {
    q: &'q TruthQuery,
    integers: RefCell<Vec<Name>>,
    member_memo: RefCell<HashMap<(Stack, Formula), Truth>>,
    forces_memo: RefCell<HashMap<(Term, Formula), Truth>>,
    atom_memo: RefCell<HashMap<(Stack, AtomKey), Truth>>,
    atom_forces_memo: RefCell<HashMap<(Term, AtomKey), Truth>>,
    measures: RefCell<Vec<(usize, usize)>>,
    rank_log: RefCell<RankLog>,
}

/// Bookkeeping for the ⊆/∉ mutual recursion: every nested atomic call must
/// have a lexicographically smaller (max rank, min rank).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RankLog {
    pub nested_calls: usize,
    pub violations: usize,
    pub deepest: usize,
}

impl<'q> Evaluator<'q> {
    pub fn new(q: &'q TruthQuery) -> Evaluator<'q> {
        Evaluator {
            q,
            integers: RefCell::new(vec![Name::empty()]),
            member_memo: RefCell::default(),
            forces_memo: RefCell::default(),
            atom_memo: RefCell::default(),
            atom_forces_memo: RefCell::default(),
            measures: RefCell::default(),
            rank_log: RefCell::default(),
        }
    }

    pub fn rank_log(&self) -> RankLog {
        *self.rank_log.borrow()
    }

    pub fn integer(&self, n: u64) -> Name {
        let mut ints = self.integers.borrow_mut();
        while ints.len() as u64 <= n {
            let next = successor_name(ints.last().unwrap(), &self.q.universe);
            ints.push(next);
        }
        ints[n as usize].clone()
    }

    /// `Some(n)` when `a` is `sⁿ0`.
    pub fn as_integer(&self, a: &Name) -> Option<u64> {
        let r = a.rank() as u64;
        if self.integer(r) == *a {
            Some(r)
        } else {
            None
        }
    }

    fn boolean(&self, b: bool) -> Name {
        self.integer(b as u64)
    }

    /// Interprets a closed set term; `None` when the value is out of reach.
    pub fn eval(&self, t: &SetTerm) -> Result<Option<Name>, SemanticsError> {
        let (sym, args) = match t {
            SetTerm::Var(x) => return Err(SemanticsError::NonClosed(x.clone())),
            SetTerm::Param(_, a) => return Ok(Some(a.clone())),
            SetTerm::Fun(sym, args) => (sym.as_str(), args),
        };
        let mut vals = Vec::with_capacity(args.len());
        for a in args {
            match self.eval(a)? {
                Some(v) => vals.push(v),
                None => return Ok(None),
            }
        }
        let u = &self.q.universe;
        let one = self.integer(1);
        Ok(Some(match (sym, vals.as_slice()) {
            ("0", []) => Name::empty(),
            ("1", []) => one,
            ("s", [a]) => successor_name(a, u),
            ("gimel", es) => gimel(es, u),
            ("ind", [x, es @ ..]) => self.boolean(es.contains(x)),
            ("pair", [a, b]) => {
                let single = gimel([a], u);
                let double = gimel([a, b], u);
                gimel([&single, &double], u)
            }
            ("bnot", [a]) => self.boolean(a.is_empty()),
            ("band", [a, b]) => self.boolean(*a == one && *b == one),
            ("bor", [a, b]) => self.boolean(*a == one || *b == one),
            ("lt", [a, b]) => match (self.as_integer(a), self.as_integer(b)) {
                (Some(m), Some(n)) => self.boolean(m < n),
                _ => Name::empty(),
            },
            ("add", [a, b]) | ("mul", [a, b]) => match (self.as_integer(a), self.as_integer(b)) {
                (Some(m), Some(n)) => {
                    let r = if sym == "add" { m.checked_add(n) } else { m.checked_mul(n) };
                    match r {
                        Some(r) if r <= self.q.arith_cap => self.integer(r),
                        _ => return Ok(None),
                    }
                }
                _ => Name::empty(),
            },
            ("delta", [a]) => match self.as_integer(a) {
                Some(n) => match delta(&BigUint::from(n), &self.q.pole) {
                    DeltaValue::Zero => Name::empty(),
                    DeltaValue::One => one,
                    DeltaValue::Unknown => return Ok(None),
                },
                None => Name::empty(),
            },
            _ => return Err(SemanticsError::UnknownFunction(sym.to_string())),
        }))
    }

    pub fn realizes(&self, xi: &Term, f: &Formula) -> Result<Realizes, SemanticsError> {
        for rho in self.q.pole.stacks_for(xi) {
            if self.member(rho, f)? == Truth::Yes {
                return Ok(Realizes::Refuted(rho.clone()));
            }
        }
        Ok(Realizes::Unrefuted)
    }

    /// `ξ ⊩ F`.
    pub fn forces(&self, xi: &Term, f: &Formula) -> Result<Truth, SemanticsError> {
        if let Formula::Atom(rel @ (Rel::Sub | Rel::NotIn), a, b) = f {
            return match (self.eval(a)?, self.eval(b)?) {
                (Some(a), Some(b)) => self.forces_atom(xi, (*rel, a, b)),
                _ => Ok(Truth::Unknown),
            };
        }
        let key = (xi.clone(), f.clone());
        if let Some(&t) = self.forces_memo.borrow().get(&key) {
            return Ok(t);
        }
        let mut unknown = false;
        let mut out = None;
        for rho in self.q.pole.stacks_for(xi) {
            match self.member(rho, f)? {
                Truth::Yes => {
                    out = Some(Truth::No);
                    break;
                }
                Truth::Unknown => unknown = true,
                Truth::No => {}
            }
        }
        let t = out.unwrap_or(if unknown || !self.q.pole.is_certified() {
            Truth::Unknown
        } else {
            Truth::Yes
        });
        self.forces_memo.borrow_mut().insert(key, t);
        Ok(t)
    }

    /// `π ∈ ‖F‖`.
    pub fn member(&self, pi: &Stack, f: &Formula) -> Result<Truth, SemanticsError> {
        match f {
            Formula::Top => return Ok(Truth::No),
            Formula::Bottom => return Ok(Truth::Yes),
            Formula::Atom(rel, a, b) => {
                return match (self.eval(a)?, self.eval(b)?) {
                    (Some(a), Some(b)) => self.member_atom(pi, (*rel, a, b)),
                    _ => Ok(Truth::Unknown),
                }
            }
            Formula::Pred(p, _) => {
                return match self.q.valuation.get(p) {
                    Some(set) => Ok(Truth::from_bool(set.contains(pi))),
                    None => Err(SemanticsError::UnknownPredicate(p.clone())),
                }
            }
            _ => {}
        }
        let key = (pi.clone(), f.clone());
        if let Some(&t) = self.member_memo.borrow().get(&key) {
            return Ok(t);
        }
        let t = match f {
            Formula::Implies(a, b) => match pi.top() {
                None => Truth::No,
                Some((xi, rest)) => {
                    let tail = self.member(rest, b)?;
                    if tail == Truth::No {
                        Truth::No
                    } else {
                        tail.and(self.forces(xi, a)?)
                    }
                }
            },
            Formula::Forall(x, body) => {
                let mut acc = Truth::No;
                for (label, a) in &self.q.pool {
                    let inst = body.subst(x, &SetTerm::param(label, a.clone()));
                    acc = acc.or(self.member(pi, &inst)?);
                    if acc == Truth::Yes {
                        break;
                    }
                }
                acc
            }
            Formula::EqCond(t, u, body) => match (self.eval(t)?, self.eval(u)?) {
                (Some(t), Some(u)) if t == u => self.member(pi, body)?,
                (Some(_), Some(_)) => Truth::No,
                _ => Truth::Unknown,
            },
            Formula::ForallEnt(x, body) => match pi.top() {
                Some((num, rest)) => match num.as_numeral().map(|n| n.to_u64()) {
                    None => Truth::No,
                    Some(Some(n)) if n <= self.q.arith_cap.max(1 << 12) => {
                        let inst = body.subst(x, &SetTerm::param(&n.to_string(), self.integer(n)));
                        self.member(rest, &inst)?
                    }
                    Some(_) => Truth::Unknown,
                },
                None => Truth::No,
            },
            Formula::Top | Formula::Bottom | Formula::Atom(..) | Formula::Pred(..) => unreachable!(),
        };
        self.member_memo.borrow_mut().insert(key, t);
        Ok(t)
    }

    fn enter(&self, a: &Name, b: &Name) {
        let m = (a.rank().max(b.rank()), a.rank().min(b.rank()));
        let mut stack = self.measures.borrow_mut();
        let mut log = self.rank_log.borrow_mut();
        if let Some(&top) = stack.last() {
            log.nested_calls += 1;
            if m >= top {
                log.violations += 1;
            }
        }
        stack.push(m);
        log.deepest = log.deepest.max(stack.len());
    }

    fn leave(&self) {
        self.measures.borrow_mut().pop();
    }

    fn member_atom(&self, pi: &Stack, key: AtomKey) -> Result<Truth, SemanticsError> {
        let (rel, a, b) = &key;
        if *rel == Rel::NotEps {
            return Ok(Truth::from_bool(b.contains(a, pi)));
        }
        let memo_key = (pi.clone(), key.clone());
        if let Some(&t) = self.atom_memo.borrow().get(&memo_key) {
            return Ok(t);
        }
        self.enter(a, b);
        let res = self.member_atom_inner(pi, *rel, a, b);
        self.leave();
        let t = res?;
        self.atom_memo.borrow_mut().insert(memo_key, t);
        Ok(t)
    }

    fn member_atom_inner(&self, pi: &Stack, rel: Rel, a: &Name, b: &Name) -> Result<Truth, SemanticsError> {
        let mut acc = Truth::No;
        match rel {
            Rel::Sub => {
                // ξ·π ∈ ‖a ⊆ b‖ iff (c, π) ∈ a with ξ ⊩ c ∉ b
                let Some((xi, rest)) = pi.top() else { return Ok(Truth::No) };
                for c in a.members_at(rest) {
                    acc = acc.or(self.forces_atom(xi, (Rel::NotIn, c.clone(), b.clone()))?);
                    if acc == Truth::Yes {
                        break;
                    }
                }
            }
            Rel::NotIn => {
                // ξ·ξ'·π ∈ ‖a ∉ b‖ iff (c, π) ∈ b with ξ ⊩ a ⊆ c, ξ' ⊩ c ⊆ a
                let Some((xi, s1)) = pi.top() else { return Ok(Truth::No) };
                let Some((xi2, rest)) = s1.top() else { return Ok(Truth::No) };
                for c in b.members_at(rest) {
                    let left = self.forces_atom(xi, (Rel::Sub, a.clone(), c.clone()))?;
                    if left == Truth::No {
                        continue;
                    }
                    let both = left.and(self.forces_atom(xi2, (Rel::Sub, c.clone(), a.clone()))?);
                    acc = acc.or(both);
                    if acc == Truth::Yes {
                        break;
                    }
                }
            }
            Rel::NotEps => unreachable!(),
        }
        Ok(acc)
    }

    fn forces_atom(&self, xi: &Term, key: AtomKey) -> Result<Truth, SemanticsError> {
        let memo_key = (xi.clone(), key.clone());
        if let Some(&t) = self.atom_forces_memo.borrow().get(&memo_key) {
            return Ok(t);
        }
        let mut unknown = false;
        let mut out = None;
        for rho in self.q.pole.stacks_for(xi) {
            match self.member_atom(rho, key.clone())? {
                Truth::Yes => {
                    out = Some(Truth::No);
                    break;
                }
                Truth::Unknown => unknown = true,
                Truth::No => {}
            }
        }
        let t = out.unwrap_or(if unknown || !self.q.pole.is_certified() {
            Truth::Unknown
        } else {
            Truth::Yes
        });
        self.atom_forces_memo.borrow_mut().insert(memo_key, t);
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula_with;
    use crate::semantics::UniverseParams;
    use crate::terms::{parse_process, parse_stack, Comb};

    fn small_universe() -> StackUniverse {
        StackUniverse::generate(UniverseParams {
            constant_count: 2,
            max_depth: 1,
            max_term_size: 1,
            combinators: vec![Comb::I, Comb::K],
        })
    }

    fn query(gens: &[&str]) -> TruthQuery {
        let gens = gens.iter().map(|g| parse_process(g).unwrap()).collect();
        TruthQuery::new(small_universe(), Pole::generated(gens, 100))
    }

    #[test]
    fn top_bottom_and_noteps() {
        let q = query(&[]);
        let pi = Stack::pi(0);
        assert_eq!(norm_member(&pi, &Formula::Top, &q).unwrap(), Truth::No);
        assert_eq!(norm_member(&pi, &Formula::Bottom, &q).unwrap(), Truth::Yes);
        let e = Name::empty();
        let b = Name::new([(e.clone(), pi.clone())]);
        let f = Formula::atom(Rel::NotEps, SetTerm::param("a", e.clone()), SetTerm::param("b", b));
        assert_eq!(norm_member(&pi, &f, &q).unwrap(), Truth::Yes);
        assert_eq!(norm_member(&Stack::pi(1), &f, &q).unwrap(), Truth::No);
        let g = Formula::atom(Rel::NotEps, SetTerm::param("a", e.clone()), SetTerm::zero());
        assert_eq!(norm_member(&pi, &g, &q).unwrap(), Truth::No);
    }

    #[test]
    fn k_does_not_realize_bottom() {
        let q = query(&["K * pi0"]);
        let k = Term::comb(Comb::K);
        assert_eq!(realizes(&k, &Formula::Bottom, &q).unwrap(), Realizes::Refuted(Stack::pi(0)));
        assert_eq!(realizes(&k, &Formula::Top, &q).unwrap(), Realizes::Unrefuted);
        assert_eq!(delta(&crate::terms::encode(&k), &q.pole), DeltaValue::One);
        assert_eq!(delta(&crate::terms::encode(&k), &Pole::empty()), DeltaValue::Zero);
    }

    #[test]
    fn open_formula_rejected() {
        let q = query(&[]);
        let f = parse_formula_with("(noteps x 0)", &|_| None).unwrap();
        assert!(matches!(norm_member(&Stack::pi(0), &f, &q), Err(SemanticsError::NonClosed(_))));
    }

    #[test]
    fn names_and_integers() {
        let u = small_universe();
        let s0 = successor_name(&Name::empty(), &u);
        assert_eq!(s0.len(), u.len());
        assert!(u.stacks().iter().all(|p| s0.contains(&Name::empty(), p)));
        let n = ntilde(1, &u);
        let one = Term::numeral(1u64);
        assert!(n.contains(&s0, &Stack::push(one, Stack::pi(0))));
        assert!(gimel(std::iter::empty(), &u).is_empty());
        let q = TruthQuery::new(u, Pole::empty());
        let ev = Evaluator::new(&q);
        assert_eq!(ev.as_integer(&ev.integer(3)), Some(3));
        assert_eq!(ev.as_integer(&n), None);
        let sum = ev.eval(&SetTerm::fun("add", vec![SetTerm::integer(2), SetTerm::integer(3)]).unwrap());
        assert_eq!(sum.unwrap(), Some(ev.integer(5)));
    }

    #[test]
    fn forall_ent_reads_numeral() {
        let q = query(&[]);
        let f = parse_formula_with("(all-ent x (eqc x 2 bot))", &|_| None).unwrap();
        let two = parse_stack("num[2] . pi0").unwrap();
        let three = parse_stack("num[3] . pi0").unwrap();
        assert_eq!(norm_member(&two, &f, &q).unwrap(), Truth::Yes);
        assert_eq!(norm_member(&three, &f, &q).unwrap(), Truth::No);
        assert_eq!(norm_member(&Stack::pi(0), &f, &q).unwrap(), Truth::No);
    }

    #[test]
    fn implication_and_uncertified_pole() {
        let q = query(&["I * K . pi0"]);
        // I ⊮ ⊥ → ⊥ is false: I⋆K·π0 is a reduct, K·π0 ∈ ‖⊥→⊥‖ iff K ⊩ ⊥
        let f = Formula::implies(Formula::Bottom, Formula::Bottom);
        let k_pi = parse_stack("K . pi0").unwrap();
        assert_eq!(norm_member(&k_pi, &f, &q).unwrap(), Truth::No);
        let om = parse_process("((W I) (W I)) * pi0").unwrap();
        let q2 = TruthQuery::new(small_universe(), Pole::generated(vec![om], 2));
        let i_pi = parse_stack("I . pi0").unwrap();
        assert_eq!(norm_member(&i_pi, &f, &q2).unwrap(), Truth::Unknown);
    }
}
