//! Terms, stacks and processes of the standard realizability algebra.
//!
//! Nodes are immutable and reference counted; every node caches a structural
//! hash, its logical size and a summary of the stack constants it mentions.
//! Numerals are stored compactly: `Term::app` folds `(K I)` into numeral 0 and
//! `(σ n)` into numeral n+1, so equal terms always share one representation.

mod numbering;
mod syntax;

pub use numbering::{
    cantor_pair, cantor_unpair, decode, decode_stack, encode, encode_bounded, encode_stack,
};
pub use syntax::{parse_process, parse_stack, parse_stack_prefix, parse_term, ParseError, NUMERAL_PRINT_LIMIT};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

/// The eight elementary combinators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Comb {
    B,
    C,
    E,
    I,
    K,
    W,
    Cc,
    Quote,
}

impl Comb {
    pub const ALL: [Comb; 8] = [
        Comb::B,
        Comb::C,
        Comb::E,
        Comb::I,
        Comb::K,
        Comb::W,
        Comb::Cc,
        Comb::Quote,
    ];

    /// Position in the fixed numbering table.
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Comb> {
        Comb::ALL.get(code as usize).copied()
    }

    /// Number of stack cells the reduction rule consumes.
    pub fn arity(self) -> usize {
        match self {
            Comb::I | Comb::Cc => 1,
            Comb::K | Comb::E | Comb::W | Comb::Quote => 2,
            Comb::C | Comb::B => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comb::B => "B",
            Comb::C => "C",
            Comb::E => "E",
            Comb::I => "I",
            Comb::K => "K",
            Comb::W => "W",
            Comb::Cc => "cc",
            Comb::Quote => "qt",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Comb> {
        Comb::ALL.iter().copied().find(|c| c.symbol() == s)
    }
}

impl fmt::Display for Comb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A stack constant `π_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StackConst(Arc<BigUint>);

impl StackConst {
    pub fn new(index: u64) -> Self {
        StackConst(Arc::new(BigUint::from(index)))
    }

    pub fn from_big(index: BigUint) -> Self {
        StackConst(Arc::new(index))
    }

    pub fn index(&self) -> &BigUint {
        &self.0
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl fmt::Display for StackConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi{}", self.0)
    }
}

/// Which stack constants occur in a term or stack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstSummary {
    None,
    One(StackConst),
    Many,
}

impl ConstSummary {
    fn join(&self, other: &ConstSummary) -> ConstSummary {
        match (self, other) {
            (ConstSummary::None, x) | (x, ConstSummary::None) => x.clone(),
            (ConstSummary::One(a), ConstSummary::One(b)) if a == b => self.clone(),
            _ => ConstSummary::Many,
        }
    }
}

// ---------------------------------------------------------------------------
// hashing

const SEED_COMB: u64 = 0x9e37_79b9_7f4a_7c15;
const SEED_APP: u64 = 0xc2b2_ae3d_27d4_eb4f;
const SEED_CONT: u64 = 0x1656_67b1_9e37_79f9;
const SEED_NUM: u64 = 0x27d4_eb2f_1656_67c5;
const SEED_CONST: u64 = 0x85eb_ca77_c2b2_ae63;
const SEED_PUSH: u64 = 0xff51_afd7_ed55_8ccd;

fn mix(mut h: u64, v: u64) -> u64 {
    h ^= v.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    h = (h ^ (h >> 33)).wrapping_mul(0xff51_afd7_ed55_8ccd);
    h ^ (h >> 29)
}

fn hash_big(seed: u64, n: &BigUint) -> u64 {
    n.iter_u64_digits().fold(seed, mix)
}

// ---------------------------------------------------------------------------
// terms

#[derive(Clone)]
pub struct Term(Arc<TermNode>);

struct TermNode {
    shape: TermShape,
    hash: u64,
    size: u64,
    consts: ConstSummary,
}

enum TermShape {
    Comb(Comb),
    App(Term, Term),
    Cont(Stack),
    Numeral(BigUint),
}

/// One-level view of a term; numerals are unfolded on demand.
#[derive(Clone, Debug)]
pub enum TermView {
    Comb(Comb),
    App(Term, Term),
    Cont(Stack),
}

fn numeral_size(n: &BigUint) -> u64 {
    // numeral 0 = (K I): 3 nodes; each σ layer adds 8 (σ itself has 7).
    match n.to_u64() {
        Some(k) => k.saturating_mul(8).saturating_add(3),
        None => u64::MAX,
    }
}

impl Term {
    fn build(shape: TermShape) -> Term {
        let (hash, size, consts) = match &shape {
            TermShape::Comb(c) => (mix(SEED_COMB, c.code() as u64), 1, ConstSummary::None),
            TermShape::App(a, b) => (
                mix(mix(SEED_APP, a.0.hash), b.0.hash),
                a.size().saturating_add(b.size()).saturating_add(1),
                a.0.consts.join(&b.0.consts),
            ),
            TermShape::Cont(s) => (
                mix(SEED_CONT, s.0.hash),
                s.size().saturating_add(1),
                s.0.consts.clone(),
            ),
            TermShape::Numeral(n) => (hash_big(SEED_NUM, n), numeral_size(n), ConstSummary::None),
        };
        Term(Arc::new(TermNode {
            shape,
            hash,
            size,
            consts,
        }))
    }

    pub fn comb(c: Comb) -> Term {
        static CACHE: OnceLock<Vec<Term>> = OnceLock::new();
        CACHE
            .get_or_init(|| Comb::ALL.iter().map(|&c| Term::build(TermShape::Comb(c))).collect())
            [c.code() as usize]
            .clone()
    }

    /// Application in canonical form.
    pub fn app(f: Term, a: Term) -> Term {
        if let (Some(Comb::K), Some(Comb::I)) = (f.as_comb(), a.as_comb()) {
            return Term::numeral(BigUint::zero());
        }
        if let Some(n) = a.as_numeral() {
            if f == *sigma() {
                return Term::numeral(n + 1u32);
            }
        }
        Term::build(TermShape::App(f, a))
    }

    /// Left-associated application `(f a1 a2 ...)`.
    pub fn apply<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn cont(stack: Stack) -> Term {
        Term::build(TermShape::Cont(stack))
    }

    pub fn numeral<N: Into<BigUint>>(n: N) -> Term {
        Term::build(TermShape::Numeral(n.into()))
    }

    pub fn view(&self) -> TermView {
        match &self.0.shape {
            TermShape::Comb(c) => TermView::Comb(*c),
            TermShape::App(a, b) => TermView::App(a.clone(), b.clone()),
            TermShape::Cont(s) => TermView::Cont(s.clone()),
            TermShape::Numeral(n) => {
                if n.is_zero() {
                    TermView::App(Term::comb(Comb::K), Term::comb(Comb::I))
                } else {
                    TermView::App(sigma().clone(), Term::numeral(n - 1u32))
                }
            }
        }
    }

    pub fn as_comb(&self) -> Option<Comb> {
        match &self.0.shape {
            TermShape::Comb(c) => Some(*c),
            _ => None,
        }
    }

    pub fn as_numeral(&self) -> Option<&BigUint> {
        match &self.0.shape {
            TermShape::Numeral(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_cont(&self) -> Option<&Stack> {
        match &self.0.shape {
            TermShape::Cont(s) => Some(s),
            _ => None,
        }
    }

    /// Number of nodes of the fully unfolded tree (saturating).
    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// A term is proof-like when it contains no continuation.
    pub fn is_proof_like(&self) -> bool {
        self.0.consts == ConstSummary::None
    }

    pub fn const_summary(&self) -> &ConstSummary {
        &self.0.consts
    }

    pub fn stack_constants(&self) -> BTreeSet<StackConst> {
        let mut out = BTreeSet::new();
        collect_consts(Item::T(self.clone()), &mut out);
        out
    }

    pub fn ptr_eq(a: &Term, b: &Term) -> bool {
        Arc::ptr_eq(&a.0, &b.0)
    }
}

/// The successor combinator `σ = (B W)(B B)`.
pub fn sigma() -> &'static Term {
    static SIGMA: OnceLock<Term> = OnceLock::new();
    SIGMA.get_or_init(|| {
        let b = Term::comb(Comb::B);
        Term::build(TermShape::App(
            Term::build(TermShape::App(b.clone(), Term::comb(Comb::W))),
            Term::build(TermShape::App(b.clone(), b)),
        ))
    })
}

/// Numeral `n̲`.
pub fn numeral(n: u64) -> Term {
    Term::numeral(BigUint::from(n))
}

// ---------------------------------------------------------------------------
// stacks

#[derive(Clone)]
pub struct Stack(Arc<StackNode>);

struct StackNode {
    shape: StackShape,
    hash: u64,
    size: u64,
    depth: usize,
    consts: ConstSummary,
}

enum StackShape {
    Const(StackConst),
    Push(Term, Stack),
}

impl Stack {
    pub fn constant(c: StackConst) -> Stack {
        let hash = hash_big(SEED_CONST, c.index());
        Stack(Arc::new(StackNode {
            consts: ConstSummary::One(c.clone()),
            shape: StackShape::Const(c),
            hash,
            size: 1,
            depth: 0,
        }))
    }

    /// The stack consisting of constant `π_j` alone.
    pub fn pi(j: u64) -> Stack {
        Stack::constant(StackConst::new(j))
    }

    pub fn push(t: Term, rest: Stack) -> Stack {
        let hash = mix(mix(SEED_PUSH, t.0.hash), rest.0.hash);
        let size = t.size().saturating_add(rest.size()).saturating_add(1);
        let consts = t.0.consts.join(&rest.0.consts);
        let depth = rest.0.depth + 1;
        Stack(Arc::new(StackNode {
            shape: StackShape::Push(t, rest),
            hash,
            size,
            depth,
            consts,
        }))
    }

    /// `t1 · t2 · … · base`.
    pub fn from_terms<I>(terms: I, base: Stack) -> Stack
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        terms.into_iter().rev().fold(base, |s, t| Stack::push(t, s))
    }

    pub fn top(&self) -> Option<(&Term, &Stack)> {
        match &self.0.shape {
            StackShape::Const(_) => None,
            StackShape::Push(t, s) => Some((t, s)),
        }
    }

    /// Number of terms above the bottom constant.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn base(&self) -> &StackConst {
        let mut s = self;
        loop {
            match &s.0.shape {
                StackShape::Const(c) => return c,
                StackShape::Push(_, r) => s = r,
            }
        }
    }

    pub fn terms(&self) -> StackTerms<'_> {
        StackTerms { cur: self }
    }

    /// All suffixes, starting with the stack itself.
    pub fn suffixes(&self) -> Vec<Stack> {
        let mut out = vec![self.clone()];
        let mut s = self;
        while let Some((_, r)) = s.top() {
            out.push(r.clone());
            s = r;
        }
        out
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    pub fn is_proof_like(&self) -> bool {
        self.0.consts == ConstSummary::None
    }

    pub fn const_summary(&self) -> &ConstSummary {
        &self.0.consts
    }

    pub fn stack_constants(&self) -> BTreeSet<StackConst> {
        let mut out = BTreeSet::new();
        collect_consts(Item::S(self.clone()), &mut out);
        out
    }
}

pub struct StackTerms<'a> {
    cur: &'a Stack,
}

impl<'a> Iterator for StackTerms<'a> {
    type Item = &'a Term;
    fn next(&mut self) -> Option<&'a Term> {
        let (t, r) = self.cur.top()?;
        self.cur = r;
        Some(t)
    }
}

/// A process `ξ ⋆ π`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Process {
    pub head: Term,
    pub stack: Stack,
}

impl Process {
    pub fn new(head: Term, stack: Stack) -> Process {
        Process { head, stack }
    }

    pub fn size(&self) -> u64 {
        self.head.size().saturating_add(self.stack.size())
    }

    pub fn stack_constants(&self) -> BTreeSet<StackConst> {
        let mut s = self.head.stack_constants();
        s.extend(self.stack.stack_constants());
        s
    }
}

// ---------------------------------------------------------------------------
// structural operations shared by terms and stacks

enum Item {
    T(Term),
    S(Stack),
}

fn collect_consts(root: Item, out: &mut BTreeSet<StackConst>) {
    let mut work = vec![root];
    while let Some(it) = work.pop() {
        match it {
            Item::T(t) => {
                if t.is_proof_like() {
                    continue;
                }
                match &t.0.shape {
                    TermShape::App(a, b) => {
                        work.push(Item::T(a.clone()));
                        work.push(Item::T(b.clone()));
                    }
                    TermShape::Cont(s) => work.push(Item::S(s.clone())),
                    _ => {}
                }
            }
            Item::S(s) => match &s.0.shape {
                StackShape::Const(c) => {
                    out.insert(c.clone());
                }
                StackShape::Push(t, r) => {
                    work.push(Item::T(t.clone()));
                    work.push(Item::S(r.clone()));
                }
            },
        }
    }
}

enum Pair<'a> {
    T(&'a Term, &'a Term),
    S(&'a Stack, &'a Stack),
}

fn structural_eq(root: Pair<'_>) -> bool {
    let mut work = vec![root];
    while let Some(p) = work.pop() {
        match p {
            Pair::T(a, b) => {
                if Arc::ptr_eq(&a.0, &b.0) {
                    continue;
                }
                if a.0.hash != b.0.hash || a.0.size != b.0.size {
                    return false;
                }
                match (&a.0.shape, &b.0.shape) {
                    (TermShape::Comb(x), TermShape::Comb(y)) if x == y => {}
                    (TermShape::Numeral(x), TermShape::Numeral(y)) if x == y => {}
                    (TermShape::App(f, x), TermShape::App(g, y)) => {
                        work.push(Pair::T(f, g));
                        work.push(Pair::T(x, y));
                    }
                    (TermShape::Cont(s), TermShape::Cont(r)) => work.push(Pair::S(s, r)),
                    _ => return false,
                }
            }
            Pair::S(a, b) => {
                if Arc::ptr_eq(&a.0, &b.0) {
                    continue;
                }
                if a.0.hash != b.0.hash || a.0.size != b.0.size || a.0.depth != b.0.depth {
                    return false;
                }
                match (&a.0.shape, &b.0.shape) {
                    (StackShape::Const(x), StackShape::Const(y)) if x == y => {}
                    (StackShape::Push(t, s), StackShape::Push(u, r)) => {
                        work.push(Pair::T(t, u));
                        work.push(Pair::S(s, r));
                    }
                    _ => return false,
                }
            }
        }
    }
    true
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        structural_eq(Pair::T(self, other))
    }
}
impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

impl PartialEq for Stack {
    fn eq(&self, other: &Stack) -> bool {
        structural_eq(Pair::S(self, other))
    }
}
impl Eq for Stack {}

impl Hash for Stack {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

// Total order: cached hash first, then size, then structure.  Used only to
// keep finite collections (names, sets of stacks) in a canonical order.
impl Ord for Term {
    fn cmp(&self, other: &Term) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .hash
            .cmp(&other.0.hash)
            .then(self.0.size.cmp(&other.0.size))
            .then_with(|| match (&self.0.shape, &other.0.shape) {
                (TermShape::Comb(a), TermShape::Comb(b)) => a.cmp(b),
                (TermShape::Numeral(a), TermShape::Numeral(b)) => a.cmp(b),
                (TermShape::App(f, x), TermShape::App(g, y)) => f.cmp(g).then_with(|| x.cmp(y)),
                (TermShape::Cont(s), TermShape::Cont(r)) => s.cmp(r),
                (a, b) => shape_rank(a).cmp(&shape_rank(b)),
            })
    }
}

fn shape_rank(s: &TermShape) -> u8 {
    match s {
        TermShape::Comb(_) => 0,
        TermShape::App(..) => 1,
        TermShape::Cont(_) => 2,
        TermShape::Numeral(_) => 3,
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Stack {
    fn cmp(&self, other: &Stack) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .hash
            .cmp(&other.0.hash)
            .then(self.0.size.cmp(&other.0.size))
            .then_with(|| match (&self.0.shape, &other.0.shape) {
                (StackShape::Const(a), StackShape::Const(b)) => a.cmp(b),
                (StackShape::Push(t, s), StackShape::Push(u, r)) => t.cmp(u).then_with(|| s.cmp(r)),
                (StackShape::Const(_), _) => Ordering::Less,
                _ => Ordering::Greater,
            })
    }
}

impl PartialOrd for Stack {
    fn partial_cmp(&self, other: &Stack) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Deeply nested terms (long stacks, long machine runs) must not overflow the
// call stack when released: children of uniquely owned nodes are moved onto
// one worklist, so each node's own drop only ever sees a leaf.
enum Owned {
    T(Term),
    S(Stack),
}

fn placeholder_const() -> StackConst {
    static C: OnceLock<StackConst> = OnceLock::new();
    C.get_or_init(|| StackConst::new(0)).clone()
}

fn take_children(item: &mut Owned, work: &mut Vec<Owned>) {
    match item {
        Owned::T(t) => {
            if let Some(node) = Arc::get_mut(&mut t.0) {
                match std::mem::replace(&mut node.shape, TermShape::Comb(Comb::I)) {
                    TermShape::App(a, b) => {
                        work.push(Owned::T(a));
                        work.push(Owned::T(b));
                    }
                    TermShape::Cont(s) => work.push(Owned::S(s)),
                    _ => {}
                }
            }
        }
        Owned::S(s) => {
            if let Some(node) = Arc::get_mut(&mut s.0) {
                if let StackShape::Push(..) = node.shape {
                    let old = std::mem::replace(&mut node.shape, StackShape::Const(placeholder_const()));
                    if let StackShape::Push(t, r) = old {
                        work.push(Owned::T(t));
                        work.push(Owned::S(r));
                    }
                }
            }
        }
    }
}

fn dismantle(mut work: Vec<Owned>) {
    while let Some(mut item) = work.pop() {
        take_children(&mut item, &mut work);
        // `item` is now childless (or shared) and drops shallowly.
    }
}

impl Drop for Term {
    fn drop(&mut self) {
        if let TermShape::App(..) | TermShape::Cont(_) = self.0.shape {
            if let Some(node) = Arc::get_mut(&mut self.0) {
                let mut work = Vec::new();
                match std::mem::replace(&mut node.shape, TermShape::Comb(Comb::I)) {
                    TermShape::App(a, b) => {
                        work.push(Owned::T(a));
                        work.push(Owned::T(b));
                    }
                    TermShape::Cont(s) => work.push(Owned::S(s)),
                    _ => {}
                }
                dismantle(work);
            }
        }
    }
}

impl Drop for Stack {
    fn drop(&mut self) {
        if let StackShape::Push(..) = self.0.shape {
            if let Some(node) = Arc::get_mut(&mut self.0) {
                let old = std::mem::replace(&mut node.shape, StackShape::Const(placeholder_const()));
                if let StackShape::Push(t, r) = old {
                    dismantle(vec![Owned::T(t), Owned::S(r)]);
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Debug for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Debug for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Term {
        Term::comb(Comb::K)
    }
    fn i() -> Term {
        Term::comb(Comb::I)
    }

    #[test]
    fn numerals_are_canonical() {
        assert_eq!(Term::app(k(), i()), numeral(0));
        let one = Term::app(sigma().clone(), Term::app(k(), i()));
        assert_eq!(one, numeral(1));
        assert_eq!(one.as_numeral().map(|n| n.to_u64()), Some(Some(1)));
        match numeral(1).view() {
            TermView::App(f, a) => {
                assert_eq!(&f, sigma());
                assert_eq!(a, numeral(0));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn proof_like_tracks_continuations() {
        let t = Term::app(k(), Term::cont(Stack::pi(3)));
        assert!(!t.is_proof_like());
        assert_eq!(t.const_summary(), &ConstSummary::One(StackConst::new(3)));
        assert!(Term::app(k(), i()).is_proof_like());
        let two = Term::app(Term::cont(Stack::pi(1)), Term::cont(Stack::pi(2)));
        assert_eq!(two.const_summary(), &ConstSummary::Many);
        assert_eq!(two.stack_constants().len(), 2);
    }

    #[test]
    fn deep_structures_drop_without_overflow() {
        let mut s = Stack::pi(0);
        for _ in 0..200_000 {
            s = Stack::push(i(), s);
        }
        let mut t = i();
        for _ in 0..200_000 {
            t = Term::app(t, k());
        }
        let t2 = t.clone();
        assert_eq!(t, t2);
        drop(t);
        drop(t2);
        assert_eq!(s.depth(), 200_000);
        drop(s);
    }

    #[test]
    fn stack_helpers() {
        let s = Stack::from_terms([i(), k()], Stack::pi(4));
        assert_eq!(s.depth(), 2);
        assert_eq!(s.base(), &StackConst::new(4));
        assert_eq!(s.terms().cloned().collect::<Vec<_>>(), vec![i(), k()]);
        assert_eq!(s.suffixes().len(), 3);
    }
}
