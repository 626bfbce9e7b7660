//! The fixed bijections ℕ ↔ terms and ℕ ↔ stacks.
//!
//! Codes 0..8 are the combinators B C E I K W cc ς in that order.  For a code
//! n ≥ 8 let m = n − 8: an even m encodes the application `(a b)` with
//! ⟨a, b⟩ = m/2, an odd m the continuation of the stack with code (m−1)/2.
//! An even stack code 2j is the constant π_j, an odd one 2⟨a, b⟩+1 is the
//! stack `a · b`.  ⟨x, y⟩ = (x+y)(x+y+1)/2 + y is Cantor's pairing.

use super::{Comb, Stack, StackConst, Term, TermShape};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub fn cantor_pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

pub fn cantor_unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

pub fn decode(n: &BigUint) -> Term {
    if let Some(c) = n.to_u8().and_then(Comb::from_code) {
        return Term::comb(c);
    }
    let m = n - 8u32;
    if m.is_even() {
        let (a, b) = cantor_unpair(&(m >> 1));
        Term::app(decode(&a), decode(&b))
    } else {
        Term::cont(decode_stack(&(m >> 1)))
    }
}

pub fn decode_stack(n: &BigUint) -> Stack {
    if n.is_even() {
        Stack::constant(StackConst::from_big(n >> 1))
    } else {
        let (a, b) = cantor_unpair(&(n >> 1));
        Stack::push(decode(&a), decode_stack(&b))
    }
}

pub fn encode(t: &Term) -> BigUint {
    Encoder { max_bits: None }
        .run(Visit::T(t.clone()))
        .expect("unbounded encoding cannot fail")
}

pub fn encode_stack(s: &Stack) -> BigUint {
    Encoder { max_bits: None }
        .run(Visit::S(s.clone()))
        .expect("unbounded encoding cannot fail")
}

/// `encode(t)` when its binary length stays within `max_bits`.
///
/// Codes roughly double in length with every nesting level (numeral n has a
/// code of about 2ⁿ bits), so callers that only need codes of moderate size
/// use this to avoid materialising astronomically large integers.
pub fn encode_bounded(t: &Term, max_bits: u64) -> Option<BigUint> {
    Encoder {
        max_bits: Some(max_bits),
    }
    .run(Visit::T(t.clone()))
}

enum Visit {
    T(Term),
    S(Stack),
    App,
    Cont,
    Push,
    Sigma(BigUint),
}

struct Encoder {
    max_bits: Option<u64>,
}

impl Encoder {
    fn ok(&self, v: &BigUint) -> bool {
        self.max_bits.is_none_or(|m| v.bits() <= m)
    }

    // Post-order traversal with explicit stacks; machine-generated terms can
    // be far deeper than the native call stack allows.
    fn run(&self, root: Visit) -> Option<BigUint> {
        let mut todo = vec![root];
        let mut vals: Vec<BigUint> = Vec::new();
        while let Some(v) = todo.pop() {
            match v {
                Visit::T(t) => match &t.0.shape {
                    TermShape::Comb(c) => vals.push(BigUint::from(c.code())),
                    TermShape::App(a, b) => {
                        todo.push(Visit::App);
                        todo.push(Visit::T(b.clone()));
                        todo.push(Visit::T(a.clone()));
                    }
                    TermShape::Cont(s) => {
                        todo.push(Visit::Cont);
                        todo.push(Visit::S(s.clone()));
                    }
                    TermShape::Numeral(n) => {
                        // numeral 0 = (K I)
                        let k = BigUint::from(Comb::K.code());
                        let i = BigUint::from(Comb::I.code());
                        vals.push(app_code(&k, &i));
                        if !n.is_zero() {
                            todo.push(Visit::Sigma(n.clone()));
                        }
                    }
                },
                Visit::S(s) => match s.top() {
                    None => vals.push(s.base().index() << 1),
                    Some((t, r)) => {
                        todo.push(Visit::Push);
                        todo.push(Visit::S(r.clone()));
                        todo.push(Visit::T(t.clone()));
                    }
                },
                Visit::App => {
                    let b = vals.pop()?;
                    let a = vals.pop()?;
                    vals.push(app_code(&a, &b));
                }
                Visit::Cont => {
                    let s = vals.pop()?;
                    vals.push((s << 1) + 9u32);
                }
                Visit::Push => {
                    let r = vals.pop()?;
                    let t = vals.pop()?;
                    vals.push((cantor_pair(&t, &r) << 1) + 1u32);
                }
                Visit::Sigma(remaining) => {
                    let prev = vals.pop()?;
                    vals.push(app_code(sigma_code(), &prev));
                    if !remaining.is_one() {
                        todo.push(Visit::Sigma(remaining - 1u32));
                    }
                }
            }
            if let Some(top) = vals.last() {
                if !self.ok(top) {
                    return None;
                }
            }
        }
        vals.pop()
    }
}

fn app_code(a: &BigUint, b: &BigUint) -> BigUint {
    (cantor_pair(a, b) << 1) + 8u32
}

fn sigma_code() -> &'static BigUint {
    static CODE: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
    CODE.get_or_init(|| encode(super::sigma()))
}
