//! Individual terms and formulas of ZF_ε.

use super::sexpr::Sexp;
use crate::semantics::Name;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("unknown function symbol {0}")]
    UnknownSymbol(String),
    #[error("symbol {symbol} expects {expected} arguments, got {got}")]
    Arity {
        symbol: String,
        expected: String,
        got: usize,
    },
    #[error("malformed {what}: {found}")]
    Malformed { what: &'static str, found: String },
    #[error("unknown parameter ${0}")]
    UnknownParam(String),
    #[error(transparent)]
    Sexp(#[from] super::sexpr::SexpError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    fn admits(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exactly(k) => write!(f, "{}", k),
            Arity::AtLeast(k) => write!(f, "at least {}", k),
        }
    }
}

/// The fixed signature of individual-term function symbols.
///
/// | symbol  | meaning                                  |
/// |---------|------------------------------------------|
/// | `0`     | the empty individual                     |
/// | `1`     | Boolean true, `s0`                       |
/// | `s`     | successor `{a} × Π`                      |
/// | `gimel` | `ℶ{e1,…,ek} = {e1,…,ek} × Π`             |
/// | `ind`   | `1_E(a)`: 1 if a ∈ {e1,…} else 0         |
/// | `pair`  | ordered pair                             |
/// | `band` `bor` `bnot` | Boolean operations on {0, 1} |
/// | `lt`    | `x < y` on integers, as a Boolean        |
/// | `add` `mul` | integer arithmetic                   |
/// | `delta` | Δ(n)                                     |
pub fn arity(symbol: &str) -> Option<Arity> {
    Some(match symbol {
        "0" | "1" => Arity::Exactly(0),
        "s" | "bnot" | "delta" => Arity::Exactly(1),
        "pair" | "band" | "bor" | "lt" | "add" | "mul" => Arity::Exactly(2),
        "gimel" => Arity::AtLeast(0),
        "ind" => Arity::AtLeast(1),
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetTerm {
    Var(String),
    Fun(String, Vec<SetTerm>),
    /// A concrete name substituted for a variable; the label is for printing.
    Param(String, Name),
}

impl SetTerm {
    pub fn var(x: &str) -> SetTerm {
        SetTerm::Var(x.to_string())
    }

    pub fn zero() -> SetTerm {
        SetTerm::Fun("0".into(), vec![])
    }

    pub fn one() -> SetTerm {
        SetTerm::Fun("1".into(), vec![])
    }

    pub fn succ(t: SetTerm) -> SetTerm {
        SetTerm::Fun("s".into(), vec![t])
    }

    /// `sⁿ0`.
    pub fn integer(n: u64) -> SetTerm {
        (0..n).fold(SetTerm::zero(), |t, _| SetTerm::succ(t))
    }

    pub fn fun(symbol: &str, args: Vec<SetTerm>) -> Result<SetTerm, SyntaxError> {
        let a = arity(symbol).ok_or_else(|| SyntaxError::UnknownSymbol(symbol.to_string()))?;
        if !a.admits(args.len()) {
            return Err(SyntaxError::Arity {
                symbol: symbol.to_string(),
                expected: a.to_string(),
                got: args.len(),
            });
        }
        Ok(SetTerm::Fun(symbol.to_string(), args))
    }

    pub fn param(label: &str, name: Name) -> SetTerm {
        SetTerm::Param(label.to_string(), name)
    }

    pub fn occurs(&self, x: &str) -> bool {
        match self {
            SetTerm::Var(y) => y == x,
            SetTerm::Fun(_, args) => args.iter().any(|a| a.occurs(x)),
            SetTerm::Param(..) => false,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            SetTerm::Var(y) => {
                out.insert(y.clone());
            }
            SetTerm::Fun(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            SetTerm::Param(..) => {}
        }
    }

    pub fn subst(&self, x: &str, tau: &SetTerm) -> SetTerm {
        match self {
            SetTerm::Var(y) if y == x => tau.clone(),
            SetTerm::Var(_) | SetTerm::Param(..) => self.clone(),
            SetTerm::Fun(f, args) => SetTerm::Fun(f.clone(), args.iter().map(|a| a.subst(x, tau)).collect()),
        }
    }

    pub fn to_sexp(&self) -> Sexp {
        match self {
            SetTerm::Var(x) => Sexp::Atom(x.clone()),
            SetTerm::Param(label, _) => Sexp::Atom(format!("${}", label)),
            SetTerm::Fun(f, args) if args.is_empty() => Sexp::Atom(f.clone()),
            SetTerm::Fun(f, args) => {
                Sexp::List(std::iter::once(Sexp::Atom(f.clone())).chain(args.iter().map(SetTerm::to_sexp)).collect())
            }
        }
    }

    /// Reads a set term; `$label` atoms are resolved through `params`.
    /// A decimal literal `n ≥ 2` stands for `sⁿ0`.
    pub fn from_sexp(s: &Sexp, params: &dyn Fn(&str) -> Option<Name>) -> Result<SetTerm, SyntaxError> {
        match s {
            Sexp::Atom(a) => {
                if let Some(label) = a.strip_prefix('$') {
                    return params(label)
                        .map(|n| SetTerm::Param(label.to_string(), n))
                        .ok_or_else(|| SyntaxError::UnknownParam(label.to_string()));
                }
                if a == "0" || a == "1" {
                    return Ok(SetTerm::Fun(a.clone(), vec![]));
                }
                if let Ok(n) = a.parse::<u64>() {
                    return Ok(SetTerm::integer(n));
                }
                if arity(a).is_some() || !is_identifier(a) {
                    return Err(SyntaxError::Malformed {
                        what: "set term",
                        found: a.clone(),
                    });
                }
                Ok(SetTerm::Var(a.clone()))
            }
            Sexp::List(_) => {
                let (head, rest) = s.as_form().ok_or_else(|| SyntaxError::Malformed {
                    what: "set term",
                    found: s.to_string(),
                })?;
                let args = rest
                    .iter()
                    .map(|r| SetTerm::from_sexp(r, params))
                    .collect::<Result<Vec<_>, _>>()?;
                SetTerm::fun(head, args)
            }
        }
    }
}

pub(crate) fn is_identifier(a: &str) -> bool {
    let mut cs = a.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Display for SetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

/// The three primitive relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    /// strong non-membership `a ε̸ b`
    NotEps,
    /// extensional non-membership `a ∉ b`
    NotIn,
    /// inclusion `a ⊆ b`
    Sub,
}

impl Rel {
    pub fn keyword(self) -> &'static str {
        match self {
            Rel::NotEps => "noteps",
            Rel::NotIn => "notin",
            Rel::Sub => "sub",
        }
    }

    pub fn from_keyword(k: &str) -> Option<Rel> {
        match k {
            "noteps" => Some(Rel::NotEps),
            "notin" => Some(Rel::NotIn),
            "sub" => Some(Rel::Sub),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Atom(Rel, SetTerm, SetTerm),
    /// An uninterpreted predicate symbol; its truth value is supplied by a
    /// valuation.
    Pred(String, Vec<SetTerm>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    /// `t = u ↪ F`
    EqCond(SetTerm, SetTerm, Box<Formula>),
    /// `∀x^ent F`
    ForallEnt(String, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: Rel, a: SetTerm, b: SetTerm) -> Formula {
        Formula::Atom(rel, a, b)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `A1, …, An → B`
    pub fn implies_all<I>(premises: I, concl: Formula) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        premises.into_iter().rev().fold(concl, |acc, p| Formula::implies(p, acc))
    }

    pub fn forall(x: &str, body: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(body))
    }

    pub fn forall_ent(x: &str, body: Formula) -> Formula {
        Formula::ForallEnt(x.to_string(), Box::new(body))
    }

    pub fn eq_cond(t: SetTerm, u: SetTerm, body: Formula) -> Formula {
        Formula::EqCond(t, u, Box::new(body))
    }

    pub fn pred(p: &str, args: Vec<SetTerm>) -> Formula {
        Formula::Pred(p.to_string(), args)
    }

    pub fn neg(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bottom)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |t: &SetTerm, bound: &Vec<String>| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(_, a, b) => {
                add(a, bound);
                add(b, bound);
            }
            Formula::Pred(_, args) => args.iter().for_each(|a| add(a, bound)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, a) | Formula::ForallEnt(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            Formula::EqCond(t, u, a) => {
                add(t, bound);
                add(u, bound);
                a.collect_free(bound, out);
            }
        }
    }

    pub fn is_free(&self, x: &str) -> bool {
        self.free_vars().contains(x)
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    fn all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Pred(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Formula::Implies(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::Forall(x, a) | Formula::ForallEnt(x, a) => {
                out.insert(x.clone());
                a.all_vars(out);
            }
            Formula::EqCond(t, u, a) => {
                t.collect_vars(out);
                u.collect_vars(out);
                a.all_vars(out);
            }
        }
    }

    /// Capture-avoiding substitution `A[τ/x]`.
    pub fn subst(&self, x: &str, tau: &SetTerm) -> Formula {
        let mut tau_vars = BTreeSet::new();
        tau.collect_vars(&mut tau_vars);
        self.subst_inner(x, tau, &tau_vars)
    }

    fn subst_inner(&self, x: &str, tau: &SetTerm, tau_vars: &BTreeSet<String>) -> Formula {
        match self {
            Formula::Top | Formula::Bottom => self.clone(),
            Formula::Atom(r, a, b) => Formula::Atom(*r, a.subst(x, tau), b.subst(x, tau)),
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|a| a.subst(x, tau)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.subst_inner(x, tau, tau_vars), b.subst_inner(x, tau, tau_vars)),
            Formula::EqCond(t, u, a) => {
                Formula::eq_cond(t.subst(x, tau), u.subst(x, tau), a.subst_inner(x, tau, tau_vars))
            }
            Formula::Forall(y, a) | Formula::ForallEnt(y, a) => {
                let rebuild = |v: &str, body: Formula| match self {
                    Formula::Forall(..) => Formula::forall(v, body),
                    _ => Formula::forall_ent(v, body),
                };
                if y == x || !a.is_free(x) {
                    return self.clone();
                }
                if tau_vars.contains(y) {
                    let mut avoid = tau_vars.clone();
                    a.all_vars(&mut avoid);
                    avoid.insert(x.to_string());
                    let fresh = fresh_var(y, &avoid);
                    let renamed = a.subst(y, &SetTerm::Var(fresh.clone()));
                    rebuild(&fresh, renamed.subst_inner(x, tau, tau_vars))
                } else {
                    rebuild(y, a.subst_inner(x, tau, tau_vars))
                }
            }
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new(), &mut Vec::new(), &mut 0)
    }

    pub fn to_sexp(&self) -> Sexp {
        let l = |h: &str, items: Vec<Sexp>| Sexp::List(std::iter::once(Sexp::atom(h)).chain(items).collect());
        match self {
            Formula::Top => Sexp::atom("top"),
            Formula::Bottom => Sexp::atom("bot"),
            Formula::Atom(r, a, b) => l(r.keyword(), vec![a.to_sexp(), b.to_sexp()]),
            Formula::Pred(p, args) => l(
                "pred",
                std::iter::once(Sexp::Atom(p.clone())).chain(args.iter().map(SetTerm::to_sexp)).collect(),
            ),
            Formula::Implies(a, b) => l("->", vec![a.to_sexp(), b.to_sexp()]),
            Formula::Forall(x, a) => l("all", vec![Sexp::Atom(x.clone()), a.to_sexp()]),
            Formula::ForallEnt(x, a) => l("all-ent", vec![Sexp::Atom(x.clone()), a.to_sexp()]),
            Formula::EqCond(t, u, a) => l("eqc", vec![t.to_sexp(), u.to_sexp(), a.to_sexp()]),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    (1..)
        .map(|i| format!("{}{}", stem, i))
        .find(|v| !avoid.contains(v))
        .expect("unbounded supply of names")
}

fn alpha_term(a: &SetTerm, b: &SetTerm, la: &[(String, usize)], lb: &[(String, usize)]) -> bool {
    let lookup = |env: &[(String, usize)], x: &str| env.iter().rev().find(|(v, _)| v == x).map(|(_, i)| *i);
    match (a, b) {
        (SetTerm::Var(x), SetTerm::Var(y)) => match (lookup(la, x), lookup(lb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (SetTerm::Fun(f, xs), SetTerm::Fun(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, la, lb))
        }
        (SetTerm::Param(_, m), SetTerm::Param(_, n)) => m == n,
        _ => false,
    }
}

fn alpha(
    a: &Formula,
    b: &Formula,
    la: &mut Vec<(String, usize)>,
    lb: &mut Vec<(String, usize)>,
    depth: &mut usize,
) -> bool {
    match (a, b) {
        (Formula::Top, Formula::Top) | (Formula::Bottom, Formula::Bottom) => true,
        (Formula::Atom(r, x1, y1), Formula::Atom(s, x2, y2)) => {
            r == s && alpha_term(x1, x2, la, lb) && alpha_term(y1, y2, la, lb)
        }
        (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, la, lb))
        }
        (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
            alpha(a1, a2, la, lb, depth) && alpha(b1, b2, la, lb, depth)
        }
        (Formula::EqCond(t1, u1, f1), Formula::EqCond(t2, u2, f2)) => {
            alpha_term(t1, t2, la, lb) && alpha_term(u1, u2, la, lb) && alpha(f1, f2, la, lb, depth)
        }
        (Formula::Forall(x, f1), Formula::Forall(y, f2)) | (Formula::ForallEnt(x, f1), Formula::ForallEnt(y, f2)) => {
            *depth += 1;
            la.push((x.clone(), *depth));
            lb.push((y.clone(), *depth));
            let r = alpha(f1, f2, la, lb, depth);
            la.pop();
            lb.pop();
            r
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> SetTerm {
        SetTerm::var(x)
    }

    #[test]
    fn substitution_avoids_capture() {
        // ∀y (x ε̸ y) [y/x]  must not capture
        let f = Formula::forall("y", Formula::atom(Rel::NotEps, v("x"), v("y")));
        let g = f.subst("x", &v("y"));
        match &g {
            Formula::Forall(z, body) => {
                assert_ne!(z, "y");
                assert_eq!(**body, Formula::atom(Rel::NotEps, v("y"), v(z)));
            }
            _ => panic!(),
        }
        assert!(g.is_free("y"));
    }

    #[test]
    fn alpha_equivalence() {
        let f = Formula::forall("y", Formula::atom(Rel::Sub, v("y"), v("x")));
        let g = Formula::forall("z", Formula::atom(Rel::Sub, v("z"), v("x")));
        let h = Formula::forall("z", Formula::atom(Rel::Sub, v("z"), v("w")));
        assert!(f.alpha_eq(&g));
        assert!(!f.alpha_eq(&h));
        assert_ne!(f, g);
    }

    #[test]
    fn signature_is_enforced() {
        assert!(SetTerm::fun("s", vec![]).is_err());
        assert!(SetTerm::fun("frob", vec![]).is_err());
        assert!(SetTerm::fun("gimel", vec![]).is_ok());
        let none = |_: &str| None;
        assert_eq!(SetTerm::from_sexp(&Sexp::atom("3"), &none).unwrap(), SetTerm::integer(3));
    }
}
