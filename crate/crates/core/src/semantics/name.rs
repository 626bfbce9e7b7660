//! Hereditarily finite names: sets of (name, stack) pairs.

use crate::terms::{parse_stack_prefix, Stack};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone)]
pub struct Name(Arc<NameNode>);

struct NameNode {
    /// Sorted, without duplicates.
    elems: Vec<(Name, Stack)>,
    rank: usize,
    hash: u64,
}

impl Name {
    pub fn empty() -> Name {
        Name::from_sorted(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = (Name, Stack)>>(pairs: I) -> Name {
        let mut elems: Vec<(Name, Stack)> = pairs.into_iter().collect();
        elems.sort();
        elems.dedup();
        Name::from_sorted(elems)
    }

    fn from_sorted(elems: Vec<(Name, Stack)>) -> Name {
        let rank = elems.iter().map(|(m, _)| m.rank() + 1).max().unwrap_or(0);
        let mut h: u64 = 0x6a09_e667_f3bc_c908 ^ elems.len() as u64;
        for (m, s) in &elems {
            h = h.rotate_left(5) ^ m.0.hash.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ s.structural_hash();
            h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        }
        Name(Arc::new(NameNode { elems, rank, hash: h }))
    }

    pub fn elements(&self) -> &[(Name, Stack)] {
        &self.0.elems
    }

    /// 0 for the empty name, otherwise one more than the largest member rank.
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    pub fn contains(&self, member: &Name, stack: &Stack) -> bool {
        self.0
            .elems
            .binary_search_by(|(m, s)| m.cmp(member).then_with(|| s.cmp(stack)))
            .is_ok()
    }

    /// Members `c` with `(c, π) ∈ self`.
    pub fn members_at<'a>(&'a self, stack: &'a Stack) -> impl Iterator<Item = &'a Name> + 'a {
        self.0.elems.iter().filter(move |(_, s)| s == stack).map(|(m, _)| m)
    }

    /// Distinct members, in canonical order.
    pub fn members(&self) -> Vec<Name> {
        let mut out: Vec<Name> = self.0.elems.iter().map(|(m, _)| m.clone()).collect();
        out.dedup();
        out
    }

    pub fn parse(src: &str) -> Result<Name, NameParseError> {
        let mut p = NameParser { src, pos: 0 };
        let n = p.name()?;
        p.ws();
        if p.pos != src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(n)
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Name) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.rank == other.0.rank && self.0.elems == other.0.elems)
    }
}
impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Name) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .rank
            .cmp(&other.0.rank)
            .then(self.0.hash.cmp(&other.0.hash))
            .then_with(|| self.0.elems.cmp(&other.0.elems))
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Name) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (m, s)) in self.0.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({}, {})", m, s)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("name syntax error at offset {offset}: {message}")]
pub struct NameParseError {
    pub offset: usize,
    pub message: String,
}

struct NameParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> NameParser<'a> {
    fn err(&self, m: &str) -> NameParseError {
        NameParseError {
            offset: self.pos,
            message: m.to_string(),
        }
    }

    fn ws(&mut self) {
        let r = self.src[self.pos..].trim_start();
        self.pos = self.src.len() - r.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<Name, NameParseError> {
        if !self.eat('{') {
            return Err(self.err("expected '{'"));
        }
        let mut pairs = Vec::new();
        if self.eat('}') {
            return Ok(Name::empty());
        }
        loop {
            if !self.eat('(') {
                return Err(self.err("expected '('"));
            }
            let m = self.name()?;
            if !self.eat(',') {
                return Err(self.err("expected ','"));
            }
            self.ws();
            let (s, used) = parse_stack_prefix(&self.src[self.pos..]).map_err(|e| NameParseError {
                offset: self.pos + e.offset,
                message: e.message,
            })?;
            self.pos += used;
            if !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            pairs.push((m, s));
            if self.eat('}') {
                return Ok(Name::new(pairs));
            }
            if !self.eat(',') {
                return Err(self.err("expected ',' or '}'"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        let e = Name::empty();
        assert_eq!(e.rank(), 0);
        let one = Name::new([(e.clone(), Stack::pi(0))]);
        assert_eq!(one.rank(), 1);
        let two = Name::new([(one.clone(), Stack::pi(0)), (e.clone(), Stack::pi(1))]);
        assert_eq!(two.rank(), 2);
        assert!(two.contains(&e, &Stack::pi(1)));
        assert!(!two.contains(&e, &Stack::pi(0)));
    }

    #[test]
    fn text_roundtrip() {
        let e = Name::empty();
        let a = Name::new([(e.clone(), Stack::pi(0)), (e.clone(), Stack::pi(2))]);
        let b = Name::new([(a.clone(), Stack::pi(1))]);
        let text = b.to_string();
        assert_eq!(Name::parse(&text).unwrap(), b);
        assert_eq!(Name::parse("{}").unwrap(), e);
        assert_eq!(Name::parse("{({}, I . pi0), ({}, I . pi0)}").unwrap().len(), 1);
        assert!(Name::parse("{({}, pi0)").is_err());
    }
}
