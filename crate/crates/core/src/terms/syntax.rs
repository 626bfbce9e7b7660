//! Canonical text syntax.
//!
//! ```text
//! term    := B | C | E | I | K | W | cc | qt
//!          | ( term term+ )          left-associated application
//!          | k[ stack ]              continuation
//!          | num[ digits ]           numeral (printed for large numerals only)
//! stack   := term . stack | pi digits
//! process := term * stack
//! ```
//! Printing is fully parenthesised with binary applications, so
//! `parse(print(x)) == x` for every term, stack and process.

use super::{Comb, Process, Stack, StackConst, Term, TermShape, TermView};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::fmt;
use thiserror::Error;

/// Numerals up to this value are printed in unfolded `(σ … (K I))` form.
pub const NUMERAL_PRINT_LIMIT: u64 = 64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

enum Out<'a> {
    T(Term),
    S(Stack),
    Str(&'a str),
}

fn write_items(f: &mut fmt::Formatter<'_>, root: Out<'_>) -> fmt::Result {
    let mut work = vec![root];
    while let Some(item) = work.pop() {
        match item {
            Out::Str(s) => f.write_str(s)?,
            Out::T(t) => {
                if let TermShape::Numeral(n) = &t.0.shape {
                    if n.to_u64().is_none_or(|k| k > NUMERAL_PRINT_LIMIT) {
                        write!(f, "num[{}]", n)?;
                        continue;
                    }
                }
                match t.view() {
                    TermView::Comb(c) => f.write_str(c.symbol())?,
                    TermView::App(a, b) => {
                        work.push(Out::Str(")"));
                        work.push(Out::T(b));
                        work.push(Out::Str(" "));
                        work.push(Out::T(a));
                        f.write_str("(")?;
                    }
                    TermView::Cont(s) => {
                        work.push(Out::Str("]"));
                        work.push(Out::S(s));
                        f.write_str("k[")?;
                    }
                }
            }
            Out::S(s) => match s.top() {
                None => write!(f, "{}", s.base())?,
                Some((t, r)) => {
                    work.push(Out::S(r.clone()));
                    work.push(Out::Str(" . "));
                    work.push(Out::T(t.clone()));
                }
            },
        }
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_items(f, Out::T(self.clone()))
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_items(f, Out::S(self.clone()))
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_items(f, Out::T(self.head.clone()))?;
        f.write_str(" * ")?;
        write_items(f, Out::S(self.stack.clone()))
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src);
    let t = p.term()?;
    p.end()?;
    Ok(t)
}

pub fn parse_stack(src: &str) -> Result<Stack, ParseError> {
    let mut p = Parser::new(src);
    let s = p.stack()?;
    p.end()?;
    Ok(s)
}

/// Parses a stack at the start of `src`, returning it with the number of
/// bytes consumed; used by formats that embed stacks in larger text.
pub fn parse_stack_prefix(src: &str) -> Result<(Stack, usize), ParseError> {
    let mut p = Parser::new(src);
    let s = p.stack()?;
    Ok((s, p.pos))
}

pub fn parse_process(src: &str) -> Result<Process, ParseError> {
    let mut p = Parser::new(src);
    let head = p.term()?;
    p.ws();
    if !(p.eat("*") || p.eat("⋆")) {
        return Err(p.error("expected '*' between head and stack"));
    }
    let stack = p.stack()?;
    p.end()?;
    Ok(Process::new(head, stack))
}

impl std::str::FromStr for Term {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Term, ParseError> {
        parse_term(s)
    }
}

impl std::str::FromStr for Stack {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Stack, ParseError> {
        parse_stack(s)
    }
}

impl std::str::FromStr for Process {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Process, ParseError> {
        parse_process(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

// Applications and pushes nest through the work stacks below rather than
// through recursion, so printed traces of arbitrary depth parse back.
enum Frame {
    App(Option<Term>),
    Cont,
    Push(Vec<Term>),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        self.ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn ident(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += len;
        &rest[..len]
    }

    fn digits(&mut self) -> Result<BigUint, ParseError> {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|(_, c)| !c.is_ascii_digit())
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("expected digits"));
        }
        self.pos += len;
        Ok(rest[..len].parse().expect("ascii digits"))
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        self.ws();
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", tok)))
        }
    }

    fn at_base(&self) -> bool {
        self.rest().starts_with("pi") || self.rest().starts_with('π')
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut frames: Vec<Frame> = Vec::new();
        loop {
            self.ws();
            let mut value = if matches!(frames.last(), Some(Frame::Push(_))) && self.at_base() {
                let base = self.stack_base()?;
                let Some(Frame::Push(terms)) = frames.pop() else {
                    unreachable!()
                };
                frames.pop();
                self.expect("]")?;
                Term::cont(Stack::from_terms(terms, base))
            } else if self.eat("(") {
                frames.push(Frame::App(None));
                continue;
            } else if self.eat("k[") {
                frames.push(Frame::Cont);
                frames.push(Frame::Push(Vec::new()));
                continue;
            } else if self.eat("num[") {
                self.ws();
                let n = self.digits()?;
                self.expect("]")?;
                Term::numeral(n)
            } else {
                let start = self.pos;
                let id = self.ident();
                match Comb::from_symbol(id) {
                    Some(c) => Term::comb(c),
                    None => {
                        self.pos = start;
                        return Err(self.error(format!("expected a term, found {:?}", id)));
                    }
                }
            };
            // feed the value upward through the frames it completes
            loop {
                match frames.pop() {
                    None => return Ok(value),
                    Some(Frame::App(acc)) => {
                        let acc = match acc {
                            None => value,
                            Some(f) => Term::app(f, value),
                        };
                        self.ws();
                        if self.eat(")") {
                            value = acc;
                            continue;
                        }
                        frames.push(Frame::App(Some(acc)));
                        break;
                    }
                    Some(Frame::Push(mut terms)) => {
                        terms.push(value);
                        self.expect(".")?;
                        frames.push(Frame::Push(terms));
                        break;
                    }
                    Some(Frame::Cont) => unreachable!("a continuation frame sits under a push frame"),
                }
            }
        }
    }

    fn stack_base(&mut self) -> Result<Stack, ParseError> {
        self.ws();
        if !(self.eat("pi") || self.eat("π")) {
            return Err(self.error("expected a stack constant pi<n>"));
        }
        let n = self.digits()?;
        Ok(Stack::constant(StackConst::from_big(n)))
    }

    fn stack(&mut self) -> Result<Stack, ParseError> {
        let mut terms = Vec::new();
        loop {
            self.ws();
            if self.at_base() {
                let base = self.stack_base()?;
                return Ok(Stack::from_terms(terms, base));
            }
            terms.push(self.term()?);
            self.expect(".")?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{numeral, sigma};

    #[test]
    fn prints_canonically() {
        assert_eq!(sigma().to_string(), "((B W) (B B))");
        assert_eq!(numeral(0).to_string(), "(K I)");
        assert_eq!(numeral(1).to_string(), "(((B W) (B B)) (K I))");
        assert_eq!(numeral(1000).to_string(), "num[1000]");
        let p = parse_process("(K I) * k[B . pi2] . pi0").unwrap();
        assert_eq!(p.to_string(), "(K I) * k[B . pi2] . pi0");
    }

    #[test]
    fn nary_application_is_left_associated() {
        let t = parse_term("(B C E)").unwrap();
        assert_eq!(t.to_string(), "((B C) E)");
    }

    #[test]
    fn bare_continuation_and_errors() {
        assert_eq!(parse_term("k[pi3]").unwrap().to_string(), "k[pi3]");
        assert!(parse_term("(B").is_err());
        assert!(parse_term("X").is_err());
        assert!(parse_stack("B . B").is_err());
        assert_eq!(parse_term("num[3]").unwrap(), numeral(3));
    }
}
