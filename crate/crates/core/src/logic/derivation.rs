//! Fully annotated natural-deduction derivations, their checker, and program
//! extraction.
//!
//! File format (one node per rule, each carrying its conclusion `C`):
//!
//! ```text
//! (derivation
//!   (context (x1 A1) … (xn An))
//!   NODE)
//!
//! NODE := (hyp C x)            ; 1  hypothesis
//!       | (mp C NODE NODE)     ; 2  A → B, A  ⊢  B
//!       | (lam C x NODE)       ; 3  discharge x : A, C = A → B
//!       | (gen C NODE)         ; 4  C = ∀z A, z not free in the context
//!       | (inst C τ NODE)      ; 5  ∀x A  ⊢  A[τ/x]
//!       | (peirce C)           ; 6  C = ((A → B) → A) → A
//!       | (efq C NODE)         ; 7  ⊥  ⊢  C
//! ```

use super::formula::{is_identifier, Formula, SetTerm, SyntaxError};
use super::sexpr::Sexp;
use super::sugar::formula_from_sexp;
use crate::compile::{compile, CTerm, LambdaTerm};
use crate::terms::Comb;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Hyp { concl: Formula, var: String },
    Mp { concl: Formula, major: Box<Node>, minor: Box<Node> },
    Lam { concl: Formula, var: String, body: Box<Node> },
    Gen { concl: Formula, body: Box<Node> },
    Inst { concl: Formula, witness: SetTerm, body: Box<Node> },
    Peirce { concl: Formula },
    Efq { concl: Formula, body: Box<Node> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub context: Vec<(String, Formula)>,
    pub root: Node,
}

impl Node {
    pub fn conclusion(&self) -> &Formula {
        match self {
            Node::Hyp { concl, .. }
            | Node::Mp { concl, .. }
            | Node::Lam { concl, .. }
            | Node::Gen { concl, .. }
            | Node::Inst { concl, .. }
            | Node::Peirce { concl }
            | Node::Efq { concl, .. } => concl,
        }
    }

    /// The rule number, 1 to 7.
    pub fn rule(&self) -> u8 {
        match self {
            Node::Hyp { .. } => 1,
            Node::Mp { .. } => 2,
            Node::Lam { .. } => 3,
            Node::Gen { .. } => 4,
            Node::Inst { .. } => 5,
            Node::Peirce { .. } => 6,
            Node::Efq { .. } => 7,
        }
    }

    fn keyword(&self) -> &'static str {
        match self {
            Node::Hyp { .. } => "hyp",
            Node::Mp { .. } => "mp",
            Node::Lam { .. } => "lam",
            Node::Gen { .. } => "gen",
            Node::Inst { .. } => "inst",
            Node::Peirce { .. } => "peirce",
            Node::Efq { .. } => "efq",
        }
    }

    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![Sexp::atom(self.keyword()), self.conclusion().to_sexp()];
        match self {
            Node::Hyp { var, .. } => items.push(Sexp::Atom(var.clone())),
            Node::Mp { major, minor, .. } => {
                items.push(major.to_sexp());
                items.push(minor.to_sexp());
            }
            Node::Lam { var, body, .. } => {
                items.push(Sexp::Atom(var.clone()));
                items.push(body.to_sexp());
            }
            Node::Gen { body, .. } | Node::Efq { body, .. } => items.push(body.to_sexp()),
            Node::Inst { witness, body, .. } => {
                items.push(witness.to_sexp());
                items.push(body.to_sexp());
            }
            Node::Peirce { .. } => {}
        }
        Sexp::List(items)
    }

    /// One-line description used in error messages.
    pub fn header(&self) -> String {
        format!("({} {} …)", self.keyword(), self.conclusion())
    }

    pub fn from_sexp(s: &Sexp) -> Result<Node, SyntaxError> {
        let bad = || SyntaxError::Malformed {
            what: "derivation node",
            found: s.to_string(),
        };
        let (head, args) = s.as_form().ok_or_else(bad)?;
        if args.is_empty() {
            return Err(bad());
        }
        let concl = formula_from_sexp(&args[0], &|_| None)?;
        let sub = |e: &Sexp| Node::from_sexp(e).map(Box::new);
        let var = |e: &Sexp| match e.as_atom() {
            Some(a) if is_identifier(a) && Comb::from_symbol(a).is_none() => Ok(a.to_string()),
            _ => Err(SyntaxError::Malformed {
                what: "proof variable",
                found: e.to_string(),
            }),
        };
        Ok(match (head, args.len()) {
            ("hyp", 2) => Node::Hyp {
                concl,
                var: var(&args[1])?,
            },
            ("mp", 3) => Node::Mp {
                concl,
                major: sub(&args[1])?,
                minor: sub(&args[2])?,
            },
            ("lam", 3) => Node::Lam {
                concl,
                var: var(&args[1])?,
                body: sub(&args[2])?,
            },
            ("gen", 2) => Node::Gen {
                concl,
                body: sub(&args[1])?,
            },
            ("inst", 3) => Node::Inst {
                concl,
                witness: SetTerm::from_sexp(&args[1], &|_| None)?,
                body: sub(&args[2])?,
            },
            ("peirce", 1) => Node::Peirce { concl },
            ("efq", 2) => Node::Efq {
                concl,
                body: sub(&args[1])?,
            },
            _ => return Err(bad()),
        })
    }
}

impl Derivation {
    pub fn new(context: Vec<(String, Formula)>, root: Node) -> Derivation {
        Derivation { context, root }
    }

    pub fn conclusion(&self) -> &Formula {
        self.root.conclusion()
    }

    pub fn to_sexp(&self) -> Sexp {
        let ctx = Sexp::List(
            std::iter::once(Sexp::atom("context"))
                .chain(
                    self.context
                        .iter()
                        .map(|(x, a)| Sexp::List(vec![Sexp::Atom(x.clone()), a.to_sexp()])),
                )
                .collect(),
        );
        Sexp::List(vec![Sexp::atom("derivation"), ctx, self.root.to_sexp()])
    }

    pub fn from_sexp(s: &Sexp) -> Result<Derivation, SyntaxError> {
        let bad = |what: &'static str| SyntaxError::Malformed {
            what,
            found: s.to_string(),
        };
        match s.as_form() {
            Some(("derivation", [ctx, root])) => {
                let entries = match ctx.as_form() {
                    Some(("context", entries)) => entries,
                    _ => return Err(bad("derivation context")),
                };
                let mut context = Vec::new();
                for e in entries {
                    match e {
                        Sexp::List(pair) if pair.len() == 2 => {
                            let x = pair[0]
                                .as_atom()
                                .filter(|a| is_identifier(a) && Comb::from_symbol(a).is_none())
                                .ok_or_else(|| bad("context entry"))?;
                            context.push((x.to_string(), formula_from_sexp(&pair[1], &|_| None)?));
                        }
                        _ => return Err(bad("context entry")),
                    }
                }
                Ok(Derivation {
                    context,
                    root: Node::from_sexp(root)?,
                })
            }
            _ => Err(bad("derivation")),
        }
    }

    pub fn parse(src: &str) -> Result<Derivation, SyntaxError> {
        Derivation::from_sexp(&Sexp::parse(src)?)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexp().pretty(78))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckFailure {
    /// The node's formulas do not have the shape its rule requires.
    Shape(String),
    /// Rule 4 with the eigenvariable free in a hypothesis.
    Eigenvariable { var: String, hypothesis: String },
    /// Rule 1 naming a variable absent from the context, or with another formula.
    Context(String),
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckFailure::Shape(m) => write!(f, "rule shape mismatch: {}", m),
            CheckFailure::Eigenvariable { var, hypothesis } => {
                write!(f, "eigenvariable {} is free in hypothesis {}", var, hypothesis)
            }
            CheckFailure::Context(m) => write!(f, "context mismatch: {}", m),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("rule {rule} at node {path:?} {node}: {failure}")]
pub struct CheckError {
    /// Child indices from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: u8,
    pub node: String,
    pub failure: CheckFailure,
}

#[derive(Clone, Debug)]
pub struct Checked {
    pub conclusion: Formula,
    /// The extracted program with its λ-binders.
    pub lambda: LambdaTerm,
    /// The extracted program compiled to combinators.
    pub term: CTerm,
}

pub fn check(d: &Derivation) -> Result<Checked, CheckError> {
    let mut ctx = d.context.clone();
    let mut path = Vec::new();
    let lambda = check_node(&d.root, &mut ctx, &mut path)?;
    Ok(Checked {
        conclusion: d.conclusion().clone(),
        term: compile(&lambda),
        lambda,
    })
}

/// Checks one derivation per component of a (possibly paired) goal.
pub fn check_goal(ds: &[Derivation], goal: &[Formula]) -> Result<Vec<Checked>, CheckError> {
    if ds.len() != goal.len() {
        return Err(CheckError {
            path: vec![],
            rule: 0,
            node: "goal".into(),
            failure: CheckFailure::Shape(format!("{} derivations for {} goal formulas", ds.len(), goal.len())),
        });
    }
    ds.iter()
        .zip(goal)
        .map(|(d, g)| {
            let c = check(d)?;
            if !c.conclusion.alpha_eq(g) {
                return Err(CheckError {
                    path: vec![],
                    rule: d.root.rule(),
                    node: d.root.header(),
                    failure: CheckFailure::Shape(format!("conclusion {} is not the goal {}", c.conclusion, g)),
                });
            }
            Ok(c)
        })
        .collect()
}

fn check_node(n: &Node, ctx: &mut Vec<(String, Formula)>, path: &mut Vec<usize>) -> Result<LambdaTerm, CheckError> {
    let fail = |failure: CheckFailure, path: &Vec<usize>| CheckError {
        path: path.clone(),
        rule: n.rule(),
        node: n.header(),
        failure,
    };
    let shape = |m: String, path: &Vec<usize>| fail(CheckFailure::Shape(m), path);
    let child = |i: usize, c: &Node, ctx: &mut Vec<(String, Formula)>, path: &mut Vec<usize>| {
        path.push(i);
        let r = check_node(c, ctx, path);
        path.pop();
        r
    };
    match n {
        Node::Hyp { concl, var } => match ctx.iter().rev().find(|(x, _)| x == var) {
            None => Err(fail(CheckFailure::Context(format!("no hypothesis named {}", var)), path)),
            Some((_, a)) if a.alpha_eq(concl) => Ok(LambdaTerm::Var(var.clone())),
            Some((_, a)) => Err(fail(
                CheckFailure::Context(format!("hypothesis {} has formula {}, not {}", var, a, concl)),
                path,
            )),
        },
        Node::Mp { concl, major, minor } => {
            let f = child(0, major, ctx, path)?;
            let a = child(1, minor, ctx, path)?;
            match major.conclusion() {
                Formula::Implies(p, q) => {
                    if !q.alpha_eq(concl) {
                        return Err(shape(format!("major premise concludes {}, not {}", q, concl), path));
                    }
                    if !p.alpha_eq(minor.conclusion()) {
                        return Err(shape(format!("minor premise proves {}, expected {}", minor.conclusion(), p), path));
                    }
                    Ok(LambdaTerm::app(f, a))
                }
                other => Err(shape(format!("major premise {} is not an implication", other), path)),
            }
        }
        Node::Lam { concl, var, body } => match concl {
            Formula::Implies(a, b) => {
                ctx.push((var.clone(), (**a).clone()));
                path.push(0);
                let r = check_node(body, ctx, path);
                path.pop();
                ctx.pop();
                let t = r?;
                if !body.conclusion().alpha_eq(b) {
                    return Err(shape(format!("body proves {}, expected {}", body.conclusion(), b), path));
                }
                Ok(LambdaTerm::lam(var, t))
            }
            other => Err(shape(format!("{} is not an implication", other), path)),
        },
        Node::Gen { concl, body } => match concl {
            Formula::Forall(z, a) => {
                if let Some((h, _)) = ctx.iter().find(|(_, f)| f.is_free(z)) {
                    return Err(fail(
                        CheckFailure::Eigenvariable {
                            var: z.clone(),
                            hypothesis: h.clone(),
                        },
                        path,
                    ));
                }
                let t = child(0, body, ctx, path)?;
                if !body.conclusion().alpha_eq(a) {
                    return Err(shape(format!("premise proves {}, expected {}", body.conclusion(), a), path));
                }
                Ok(t)
            }
            other => Err(shape(format!("{} is not a universal formula", other), path)),
        },
        Node::Inst { concl, witness, body } => {
            let t = child(0, body, ctx, path)?;
            match body.conclusion() {
                Formula::Forall(x, a) => {
                    let expected = a.subst(x, witness);
                    if !expected.alpha_eq(concl) {
                        return Err(shape(format!("instance is {}, not {}", expected, concl), path));
                    }
                    Ok(t)
                }
                other => Err(shape(format!("premise {} is not a universal formula", other), path)),
            }
        }
        Node::Peirce { concl } => {
            let ok = match concl {
                Formula::Implies(l, a3) => match &**l {
                    Formula::Implies(ab, a2) => match &**ab {
                        Formula::Implies(a1, _) => a1.alpha_eq(a2) && a2.alpha_eq(a3),
                        _ => false,
                    },
                    _ => false,
                },
                _ => false,
            };
            if ok {
                Ok(LambdaTerm::Const(Comb::Cc))
            } else {
                Err(shape(format!("{} is not of the form ((A → B) → A) → A", concl), path))
            }
        }
        Node::Efq { body, .. } => {
            let t = child(0, body, ctx, path)?;
            if *body.conclusion() != Formula::Bottom {
                return Err(shape(format!("premise proves {}, not ⊥", body.conclusion()), path));
            }
            Ok(t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checked(src: &str) -> Result<Checked, CheckError> {
        check(&Derivation::parse(src).unwrap())
    }

    #[test]
    fn identity_and_k() {
        let c = checked("(derivation (context) (lam (-> (pred A) (pred A)) x (hyp (pred A) x)))").unwrap();
        assert_eq!(c.term.to_string(), "I");
        let c = checked(
            "(derivation (context)
               (lam (-> (pred A) (-> (pred B) (pred A))) x
                 (lam (-> (pred B) (pred A)) y (hyp (pred A) x))))",
        )
        .unwrap();
        assert_eq!(c.term.to_string(), "(E K)");
    }

    #[test]
    fn peirce() {
        let c = checked("(derivation (context) (peirce (-> (-> (-> (pred A) (pred B)) (pred A)) (pred A))))").unwrap();
        assert_eq!(c.term.to_string(), "cc");
        assert!(checked("(derivation (context) (peirce (-> (-> (-> (pred A) (pred B)) (pred B)) (pred A))))").is_err());
    }

    #[test]
    fn eigenvariable_condition() {
        // x : F(y) ⊢ ∀y F(y) is not allowed
        let bad = checked("(derivation (context (h (pred F y))) (gen (all y (pred F y)) (hyp (pred F y) h)))");
        match bad {
            Err(CheckError {
                failure: CheckFailure::Eigenvariable { var, .. },
                ..
            }) => assert_eq!(var, "y"),
            other => panic!("{:?}", other),
        }
        // with y bound inside the hypothesis the rule applies
        let ok = checked(
            "(derivation (context (h (all y (pred F y))))
               (gen (all z (pred F z)) (inst (pred F z) z (hyp (all y (pred F y)) h))))",
        );
        assert!(ok.is_ok(), "{:?}", ok);
    }

    #[test]
    fn roundtrip_and_errors() {
        let src = "(derivation (context (h bot)) (efq (pred A) (hyp bot h)))";
        let d = Derivation::parse(src).unwrap();
        assert_eq!(Derivation::parse(&d.to_string()).unwrap(), d);
        assert_eq!(check(&d).unwrap().term.to_string(), "h");
        let e = checked("(derivation (context) (hyp (pred A) x))").unwrap_err();
        assert_eq!(e.rule, 1);
        assert!(matches!(e.failure, CheckFailure::Context(_)));
    }
}
