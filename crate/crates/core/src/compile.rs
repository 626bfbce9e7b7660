//! Combinatory terms with variables, λ-terms, and the compiler between them.
//!
//! `λx` is not primitive: [`abstraction`] computes a combinatory term that
//! behaves like the abstraction on the machine, case by case:
//!
//! 1. `λx t = (K)t` if x does not occur in t;
//! 2. `λx x = I`;
//! 3. `λx tu = (C λx(E)t)u` if x does not occur in u;
//! 4. `λx tx = (E)t` if x does not occur in t;
//! 5. `λx tx = (W)λx(E)t` if x occurs in t;
//! 6. `λx t(uv) = λx (B)tuv` if x occurs in uv.
//!
//! The first applicable case wins.

use crate::machine::reduction_distance;
use crate::terms::{Comb, Process, Stack, Term, TermView};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("λ-term still contains an abstraction")]
    NotCombinatory,
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
}

/// A combinatory term possibly containing free variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CTerm {
    Var(String),
    Const(Comb),
    App(Box<CTerm>, Box<CTerm>),
}

impl CTerm {
    pub fn var(x: &str) -> CTerm {
        CTerm::Var(x.to_string())
    }

    pub fn app(f: CTerm, a: CTerm) -> CTerm {
        CTerm::App(Box::new(f), Box::new(a))
    }

    pub fn apply<I: IntoIterator<Item = CTerm>>(f: CTerm, args: I) -> CTerm {
        args.into_iter().fold(f, CTerm::app)
    }

    pub fn occurs(&self, x: &str) -> bool {
        match self {
            CTerm::Var(y) => y == x,
            CTerm::Const(_) => false,
            CTerm::App(a, b) => a.occurs(x) || b.occurs(x),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            CTerm::Var(y) => {
                out.insert(y.clone());
            }
            CTerm::Const(_) => {}
            CTerm::App(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            CTerm::Var(_) | CTerm::Const(_) => 1,
            CTerm::App(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Depth with leaves at depth 1.
    pub fn depth(&self) -> usize {
        match self {
            CTerm::Var(_) | CTerm::Const(_) => 1,
            CTerm::App(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// The closed term, or the first free variable met.
    pub fn to_term(&self) -> Result<Term, CompileError> {
        instantiate(self, &HashMap::new())
    }

    /// A proof-like term read back as a combinatory term.
    pub fn from_term(t: &Term) -> Option<CTerm> {
        match t.view() {
            TermView::Comb(c) => Some(CTerm::Const(c)),
            TermView::App(a, b) => Some(CTerm::app(CTerm::from_term(&a)?, CTerm::from_term(&b)?)),
            TermView::Cont(_) => None,
        }
    }

    pub fn parse(src: &str) -> Result<CTerm, CompileError> {
        LambdaTerm::parse(src)?.to_cterm()
    }
}

impl fmt::Display for CTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CTerm::Var(x) => f.write_str(x),
            CTerm::Const(c) => f.write_str(c.symbol()),
            CTerm::App(a, b) => write!(f, "({} {})", a, b),
        }
    }
}

impl fmt::Debug for CTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn k(c: Comb) -> CTerm {
    CTerm::Const(c)
}

/// `λx t` on combinatory terms.
pub fn abstraction(x: &str, t: &CTerm) -> CTerm {
    if !t.occurs(x) {
        return CTerm::app(k(Comb::K), t.clone());
    }
    match t {
        CTerm::Var(_) => k(Comb::I),
        CTerm::Const(_) => unreachable!("x occurs in t"),
        CTerm::App(t1, u) => {
            if !u.occurs(x) {
                let inner = abstraction(x, &CTerm::app(k(Comb::E), (**t1).clone()));
                return CTerm::app(CTerm::app(k(Comb::C), inner), (**u).clone());
            }
            match &**u {
                CTerm::Var(y) if y == x => {
                    if !t1.occurs(x) {
                        CTerm::app(k(Comb::E), (**t1).clone())
                    } else {
                        let inner = abstraction(x, &CTerm::app(k(Comb::E), (**t1).clone()));
                        CTerm::app(k(Comb::W), inner)
                    }
                }
                CTerm::App(u1, v1) => {
                    let shifted = CTerm::apply(k(Comb::B), [(**t1).clone(), (**u1).clone(), (**v1).clone()]);
                    abstraction(x, &shifted)
                }
                _ => unreachable!("u contains x, so it is x itself or an application"),
            }
        }
    }
}

/// `λx1 … λxn t`.
pub fn abstract_all(vars: &[String], t: &CTerm) -> CTerm {
    vars.iter().rev().fold(t.clone(), |acc, x| abstraction(x, &acc))
}

/// λ-terms over the combinators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum LambdaTerm {
    Var(String),
    Const(Comb),
    App(Box<LambdaTerm>, Box<LambdaTerm>),
    Lam(String, Box<LambdaTerm>),
}

impl LambdaTerm {
    pub fn var(x: &str) -> LambdaTerm {
        LambdaTerm::Var(x.to_string())
    }

    pub fn app(f: LambdaTerm, a: LambdaTerm) -> LambdaTerm {
        LambdaTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: &str, body: LambdaTerm) -> LambdaTerm {
        LambdaTerm::Lam(x.to_string(), Box::new(body))
    }

    pub fn to_cterm(&self) -> Result<CTerm, CompileError> {
        match self {
            LambdaTerm::Var(x) => Ok(CTerm::Var(x.clone())),
            LambdaTerm::Const(c) => Ok(CTerm::Const(*c)),
            LambdaTerm::App(a, b) => Ok(CTerm::app(a.to_cterm()?, b.to_cterm()?)),
            LambdaTerm::Lam(..) => Err(CompileError::NotCombinatory),
        }
    }

    pub fn from_cterm(t: &CTerm) -> LambdaTerm {
        match t {
            CTerm::Var(x) => LambdaTerm::Var(x.clone()),
            CTerm::Const(c) => LambdaTerm::Const(*c),
            CTerm::App(a, b) => LambdaTerm::app(LambdaTerm::from_cterm(a), LambdaTerm::from_cterm(b)),
        }
    }

    /// `\x y. body`, juxtaposition for application, parentheses for grouping.
    /// `λ` may be used instead of `\`.
    pub fn parse(src: &str) -> Result<LambdaTerm, CompileError> {
        let mut p = LParser { src, pos: 0 };
        let t = p.expr()?;
        p.ws();
        if p.pos != src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(t)
    }
}

impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaTerm::Var(x) => f.write_str(x),
            LambdaTerm::Const(c) => f.write_str(c.symbol()),
            LambdaTerm::App(a, b) => write!(f, "({} {})", a, b),
            LambdaTerm::Lam(x, b) => write!(f, "(\\{}. {})", x, b),
        }
    }
}

impl fmt::Debug for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

struct LParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> LParser<'a> {
    fn err(&self, m: &str) -> CompileError {
        CompileError::Parse {
            offset: self.pos,
            message: m.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let r = self.rest().trim_start();
        self.pos = self.src.len() - r.len();
    }

    fn ident(&mut self) -> Option<&'a str> {
        let r = self.rest();
        let len = r
            .char_indices()
            .find(|(_, c)| !(c.is_alphanumeric() || *c == '_' || *c == '\''))
            .map_or(r.len(), |(i, _)| i);
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&r[..len])
    }

    fn expr(&mut self) -> Result<LambdaTerm, CompileError> {
        self.ws();
        if self.rest().starts_with('\\') || self.rest().starts_with('λ') {
            self.pos += self.rest().chars().next().unwrap().len_utf8();
            let mut vars = Vec::new();
            loop {
                self.ws();
                if self.rest().starts_with('.') {
                    self.pos += 1;
                    break;
                }
                match self.ident() {
                    Some(x) if Comb::from_symbol(x).is_none() => vars.push(x.to_string()),
                    _ => return Err(self.err("expected a bound variable or '.'")),
                }
            }
            if vars.is_empty() {
                return Err(self.err("abstraction binds no variable"));
            }
            let body = self.expr()?;
            return Ok(vars.iter().rev().fold(body, |b, x| LambdaTerm::lam(x, b)));
        }
        let mut acc: Option<LambdaTerm> = None;
        loop {
            self.ws();
            let r = self.rest();
            let atom = if r.is_empty() || r.starts_with(')') {
                break;
            } else if r.starts_with('\\') || r.starts_with('λ') {
                // an abstraction extends as far right as possible
                self.expr()?
            } else if r.starts_with('(') {
                self.pos += 1;
                let inner = self.expr()?;
                self.ws();
                if !self.rest().starts_with(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                inner
            } else {
                match self.ident() {
                    Some(id) => match Comb::from_symbol(id) {
                        Some(c) => LambdaTerm::Const(c),
                        None => LambdaTerm::Var(id.to_string()),
                    },
                    None => return Err(self.err("expected a term")),
                }
            };
            acc = Some(match acc {
                None => atom,
                Some(f) => LambdaTerm::app(f, atom),
            });
        }
        acc.ok_or_else(|| self.err("expected a term"))
    }
}

/// Compiles a λ-term by replacing each abstraction, innermost first.
pub fn compile(t: &LambdaTerm) -> CTerm {
    match t {
        LambdaTerm::Var(x) => CTerm::Var(x.clone()),
        LambdaTerm::Const(c) => CTerm::Const(*c),
        LambdaTerm::App(a, b) => CTerm::app(compile(a), compile(b)),
        LambdaTerm::Lam(x, body) => abstraction(x, &compile(body)),
    }
}

pub fn substitute(t: &CTerm, map: &HashMap<String, CTerm>) -> CTerm {
    match t {
        CTerm::Var(x) => map.get(x).cloned().unwrap_or_else(|| t.clone()),
        CTerm::Const(_) => t.clone(),
        CTerm::App(a, b) => CTerm::app(substitute(a, map), substitute(b, map)),
    }
}

/// Substitutes closed machine terms (possibly continuations) for every
/// variable of `t`.
pub fn instantiate(t: &CTerm, map: &HashMap<String, Term>) -> Result<Term, CompileError> {
    match t {
        CTerm::Var(x) => map.get(x).cloned().ok_or_else(|| CompileError::Unbound(x.clone())),
        CTerm::Const(c) => Ok(Term::comb(*c)),
        CTerm::App(a, b) => Ok(Term::app(instantiate(a, map)?, instantiate(b, map)?)),
    }
}

/// Checks `λx1…λxn t ⋆ ξ1·…·ξn·π ≻ t[ξ/x] ⋆ π` within `budget` steps and
/// returns the number of steps taken, if any.
pub fn abstraction_check(
    t: &CTerm,
    vars: &[String],
    args: &[Term],
    pi: &Stack,
    budget: usize,
) -> Result<Option<usize>, CompileError> {
    if vars.len() != args.len() {
        return Err(CompileError::Arity {
            expected: vars.len(),
            got: args.len(),
        });
    }
    let map: HashMap<String, Term> = vars.iter().cloned().zip(args.iter().cloned()).collect();
    let target = Process::new(instantiate(t, &map)?, pi.clone());
    let compiled = abstract_all(vars, t).to_term()?;
    let start = Process::new(compiled, Stack::from_terms(args.to_vec(), pi.clone()));
    Ok(reduction_distance(&start, &target, budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_application() {
        let t = CTerm::app(CTerm::var("x"), CTerm::var("x"));
        assert_eq!(abstraction("x", &t).to_string(), "(W (E E))");
    }

    #[test]
    fn first_projection() {
        let t = compile(&LambdaTerm::parse("\\x y. x").unwrap());
        assert_eq!(t.to_string(), "(E K)");
        let t = compile(&LambdaTerm::parse("λx.x").unwrap());
        assert_eq!(t, CTerm::Const(Comb::I));
    }

    #[test]
    fn check_reaches_target() {
        let t = CTerm::parse("(x (y z))").unwrap();
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let args = vec![
            Term::cont(Stack::pi(1)),
            Term::cont(Stack::pi(2)),
            Term::cont(Stack::pi(3)),
        ];
        let n = abstraction_check(&t, &vars, &args, &Stack::pi(0), 1000).unwrap();
        assert!(n.is_some());
    }

    #[test]
    fn lambda_parsing() {
        let t = LambdaTerm::parse("\\f. (\\x. f (x x)) (\\x. f (x x))").unwrap();
        assert_eq!(t.to_string(), "(\\f. ((\\x. (f (x x))) (\\x. (f (x x)))))");
        assert!(LambdaTerm::parse("\\. x").is_err());
        assert!(LambdaTerm::parse("(x").is_err());
    }
}
