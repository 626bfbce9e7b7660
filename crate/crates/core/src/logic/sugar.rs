//! Defined connectives and their expansion into →, ∀, ⊥ and the atoms.
//!
//! `↔`, `≃` and `∼` denote *pairs* of formulas.  In premise position (`→`
//! premises, `∃x{…}` bodies, restricted `∃`) a pair contributes both of its
//! formulas; a pair standing where a single formula is required is read as
//! the conjunction of its two components.

use super::formula::{is_identifier, Formula, Rel, SetTerm, SyntaxError};
use super::sexpr::Sexp;
use crate::semantics::Name;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sugared {
    Core(Formula),
    Implies(Vec<Sugared>, Box<Sugared>),
    Forall(String, Box<Sugared>),
    ForallEnt(String, Box<Sugared>),
    EqCond(SetTerm, SetTerm, Box<Sugared>),
    Not(Box<Sugared>),
    And(Box<Sugared>, Box<Sugared>),
    Or(Box<Sugared>, Box<Sugared>),
    /// `∃x{F1, …, Fk}`
    Exists(String, Vec<Sugared>),
    ExistsEnt(String, Box<Sugared>),
    /// `a ε b`, i.e. `a ε̸ b → ⊥`
    Eps(SetTerm, SetTerm),
    /// `a ∈ b`, i.e. `a ∉ b → ⊥`
    In(SetTerm, SetTerm),
    /// `(∀x ε a) F`
    ForallIn(String, SetTerm, Box<Sugared>),
    /// `(∃x ε a) F⃗`
    ExistsIn(String, SetTerm, Vec<Sugared>),
    /// `∀x^{ℶE} F`
    ForallGimel(String, Vec<SetTerm>, Box<Sugared>),
    Int(SetTerm),
    /// strong inclusion `a ⊂ b`
    StrongSub(SetTerm, SetTerm),
    Iff(Box<Sugared>, Box<Sugared>),
    ExtEq(SetTerm, SetTerm),
    StrongEq(SetTerm, SetTerm),
}

fn b(s: Sugared) -> Box<Sugared> {
    Box::new(s)
}

fn neg(f: Formula) -> Formula {
    Formula::neg(f)
}

fn strong_sub(a: &SetTerm, c: &SetTerm) -> Formula {
    let z = fresh_for(&[a, c], "z");
    let zv = SetTerm::Var(z.clone());
    Formula::forall(
        &z,
        Formula::implies(
            Formula::atom(Rel::NotEps, zv.clone(), c.clone()),
            Formula::atom(Rel::NotEps, zv, a.clone()),
        ),
    )
}

fn fresh_for(terms: &[&SetTerm], base: &str) -> String {
    let mut avoid = std::collections::BTreeSet::new();
    for t in terms {
        t.collect_vars(&mut avoid);
    }
    if !avoid.contains(base) {
        return base.to_string();
    }
    super::formula::fresh_var(base, &avoid)
}

fn conj(fs: Vec<Formula>) -> Formula {
    let mut it = fs.into_iter().rev();
    let last = it.next().expect("at least one component");
    it.fold(last, |acc, f| {
        Formula::implies(Formula::implies_all([f, acc], Formula::Bottom), Formula::Bottom)
    })
}

impl Sugared {
    pub fn core(f: Formula) -> Sugared {
        Sugared::Core(f)
    }

    /// The formulas this sugar stands for: one, or two for a pair.
    pub fn expand(&self) -> Vec<Formula> {
        match self {
            Sugared::Iff(a, c) => vec![
                Formula::implies(a.single(), c.single()),
                Formula::implies(c.single(), a.single()),
            ],
            Sugared::ExtEq(x, y) => vec![
                Formula::atom(Rel::Sub, x.clone(), y.clone()),
                Formula::atom(Rel::Sub, y.clone(), x.clone()),
            ],
            Sugared::StrongEq(x, y) => vec![strong_sub(x, y), strong_sub(y, x)],
            _ => vec![self.single()],
        }
    }

    /// The expansion as a single formula (pairs become conjunctions).
    pub fn single(&self) -> Formula {
        match self {
            Sugared::Core(f) => f.clone(),
            Sugared::Implies(ps, c) => {
                let prem: Vec<Formula> = ps.iter().flat_map(|p| p.expand()).collect();
                Formula::implies_all(prem, c.single())
            }
            Sugared::Forall(x, a) => Formula::forall(x, a.single()),
            Sugared::ForallEnt(x, a) => Formula::forall_ent(x, a.single()),
            Sugared::EqCond(t, u, a) => Formula::eq_cond(t.clone(), u.clone(), a.single()),
            Sugared::Not(a) => neg(a.single()),
            Sugared::And(a, c) => Formula::implies(
                Formula::implies_all([a.single(), c.single()], Formula::Bottom),
                Formula::Bottom,
            ),
            Sugared::Or(a, c) => Formula::implies_all([neg(a.single()), neg(c.single())], Formula::Bottom),
            Sugared::Exists(x, fs) => {
                let prem: Vec<Formula> = fs.iter().flat_map(|f| f.expand()).collect();
                neg(Formula::forall(x, Formula::implies_all(prem, Formula::Bottom)))
            }
            Sugared::ExistsEnt(x, a) => neg(Formula::forall_ent(x, neg(a.single()))),
            Sugared::Eps(x, y) => neg(Formula::atom(Rel::NotEps, x.clone(), y.clone())),
            Sugared::In(x, y) => neg(Formula::atom(Rel::NotIn, x.clone(), y.clone())),
            Sugared::ForallIn(x, a, f) => Formula::forall(
                x,
                Formula::implies(neg(f.single()), Formula::atom(Rel::NotEps, SetTerm::Var(x.clone()), a.clone())),
            ),
            Sugared::ExistsIn(x, a, fs) => {
                let prem: Vec<Formula> = fs.iter().flat_map(|f| f.expand()).collect();
                neg(Formula::forall(
                    x,
                    Formula::implies_all(prem, Formula::atom(Rel::NotEps, SetTerm::Var(x.clone()), a.clone())),
                ))
            }
            Sugared::ForallGimel(x, es, f) => {
                let mut args = vec![SetTerm::Var(x.clone())];
                args.extend(es.iter().cloned());
                Formula::forall(x, Formula::eq_cond(SetTerm::Fun("ind".into(), args), SetTerm::one(), f.single()))
            }
            Sugared::Int(n) => {
                let x = fresh_for(&[n], "x");
                let y = fresh_for(&[n, &SetTerm::Var(x.clone())], "y");
                let xv = SetTerm::Var(x.clone());
                let yv = SetTerm::Var(y.clone());
                let step = Formula::forall(
                    &y,
                    Formula::implies(
                        Formula::atom(Rel::NotEps, SetTerm::succ(yv.clone()), xv.clone()),
                        Formula::atom(Rel::NotEps, yv, xv.clone()),
                    ),
                );
                Formula::forall(
                    &x,
                    Formula::implies_all(
                        [step, Formula::atom(Rel::NotEps, n.clone(), xv.clone())],
                        Formula::atom(Rel::NotEps, SetTerm::zero(), xv),
                    ),
                )
            }
            Sugared::StrongSub(x, y) => strong_sub(x, y),
            Sugared::Iff(..) | Sugared::ExtEq(..) | Sugared::StrongEq(..) => conj(self.expand()),
        }
    }

    pub fn from_sexp(s: &Sexp, params: &dyn Fn(&str) -> Option<Name>) -> Result<Sugared, SyntaxError> {
        let bad = || SyntaxError::Malformed {
            what: "formula",
            found: s.to_string(),
        };
        let term = |e: &Sexp| SetTerm::from_sexp(e, params);
        let sub = |e: &Sexp| Sugared::from_sexp(e, params).map(Box::new);
        let var = |e: &Sexp| -> Result<String, SyntaxError> {
            match e.as_atom() {
                Some(a) if is_identifier(a) => Ok(a.to_string()),
                _ => Err(SyntaxError::Malformed {
                    what: "bound variable",
                    found: e.to_string(),
                }),
            }
        };
        if let Some(a) = s.as_atom() {
            return match a {
                "top" => Ok(Sugared::Core(Formula::Top)),
                "bot" => Ok(Sugared::Core(Formula::Bottom)),
                _ => Err(bad()),
            };
        }
        let (head, args) = s.as_form().ok_or_else(bad)?;
        let n = args.len();
        let core = |f: Formula| Ok(Sugared::Core(f));
        match (head, n) {
            (k, 2) if Rel::from_keyword(k).is_some() => {
                core(Formula::atom(Rel::from_keyword(k).unwrap(), term(&args[0])?, term(&args[1])?))
            }
            ("pred", n) if n >= 1 => {
                let p = var(&args[0])?;
                let ts = args[1..].iter().map(term).collect::<Result<Vec<_>, _>>()?;
                core(Formula::Pred(p, ts))
            }
            ("->", n) if n >= 2 => {
                let mut parts = args.iter().map(|e| Sugared::from_sexp(e, params)).collect::<Result<Vec<_>, _>>()?;
                let c = parts.pop().unwrap();
                Ok(Sugared::Implies(parts, b(c)))
            }
            ("all", 2) => Ok(Sugared::Forall(var(&args[0])?, sub(&args[1])?)),
            ("all-ent", 2) => Ok(Sugared::ForallEnt(var(&args[0])?, sub(&args[1])?)),
            ("eqc", 3) => Ok(Sugared::EqCond(term(&args[0])?, term(&args[1])?, sub(&args[2])?)),
            ("not", 1) => Ok(Sugared::Not(sub(&args[0])?)),
            ("and", n) | ("or", n) if n >= 2 => {
                let mut parts = args.iter().map(|e| Sugared::from_sexp(e, params)).collect::<Result<Vec<_>, _>>()?;
                let last = parts.pop().unwrap();
                Ok(parts.into_iter().rev().fold(last, |acc, p| {
                    if head == "and" {
                        Sugared::And(b(p), b(acc))
                    } else {
                        Sugared::Or(b(p), b(acc))
                    }
                }))
            }
            ("ex", n) if n >= 2 => Ok(Sugared::Exists(
                var(&args[0])?,
                args[1..].iter().map(|e| Sugared::from_sexp(e, params)).collect::<Result<_, _>>()?,
            )),
            ("ex-ent", 2) => Ok(Sugared::ExistsEnt(var(&args[0])?, sub(&args[1])?)),
            ("eps", 2) => Ok(Sugared::Eps(term(&args[0])?, term(&args[1])?)),
            ("in", 2) => Ok(Sugared::In(term(&args[0])?, term(&args[1])?)),
            ("all-in", 3) => Ok(Sugared::ForallIn(var(&args[0])?, term(&args[1])?, sub(&args[2])?)),
            ("ex-in", n) if n >= 3 => Ok(Sugared::ExistsIn(
                var(&args[0])?,
                term(&args[1])?,
                args[2..].iter().map(|e| Sugared::from_sexp(e, params)).collect::<Result<_, _>>()?,
            )),
            ("all-gimel", 3) => {
                let es = match &args[1] {
                    Sexp::List(items) => items.iter().map(term).collect::<Result<Vec<_>, _>>()?,
                    _ => return Err(bad()),
                };
                Ok(Sugared::ForallGimel(var(&args[0])?, es, sub(&args[2])?))
            }
            ("int", 1) => Ok(Sugared::Int(term(&args[0])?)),
            ("ssub", 2) => Ok(Sugared::StrongSub(term(&args[0])?, term(&args[1])?)),
            ("iff", 2) => Ok(Sugared::Iff(sub(&args[0])?, sub(&args[1])?)),
            ("exteq", 2) => Ok(Sugared::ExtEq(term(&args[0])?, term(&args[1])?)),
            ("sim", 2) => Ok(Sugared::StrongEq(term(&args[0])?, term(&args[1])?)),
            _ => Err(bad()),
        }
    }

    pub fn parse(src: &str) -> Result<Sugared, SyntaxError> {
        Sugared::from_sexp(&Sexp::parse(src)?, &|_| None)
    }
}

/// Parses a formula that must not be a pair.
pub fn parse_formula(src: &str) -> Result<Formula, SyntaxError> {
    parse_formula_with(src, &|_| None)
}

pub fn parse_formula_with(src: &str, params: &dyn Fn(&str) -> Option<Name>) -> Result<Formula, SyntaxError> {
    formula_from_sexp(&Sexp::parse(src)?, params)
}

pub fn formula_from_sexp(s: &Sexp, params: &dyn Fn(&str) -> Option<Name>) -> Result<Formula, SyntaxError> {
    let sug = Sugared::from_sexp(s, params)?;
    let mut fs = sug.expand();
    if fs.len() != 1 {
        return Err(SyntaxError::Malformed {
            what: "formula (a pair was given where one formula is expected)",
            found: s.to_string(),
        });
    }
    Ok(fs.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn basic_sugar() {
        assert_eq!(f("(not (pred A))"), f("(-> (pred A) bot)"));
        assert_eq!(f("(ex x (pred F x))"), f("(-> (all x (-> (pred F x) bot)) bot)"));
        assert_eq!(f("(and (pred A) (pred B))"), f("(-> (-> (pred A) (pred B) bot) bot)"));
        assert_eq!(f("(or (pred A) (pred B))"), f("(-> (-> (pred A) bot) (-> (pred B) bot) bot)"));
    }

    #[test]
    fn int_formula() {
        let g = f("(int n)");
        let expected = f("(all x (-> (all y (-> (noteps (s y) x) (noteps y x))) (noteps n x) (noteps 0 x)))");
        assert_eq!(g, expected);
    }

    #[test]
    fn pairs() {
        let p = Sugared::parse("(iff (pred A) (pred B))").unwrap().expand();
        assert_eq!(p, vec![f("(-> (pred A) (pred B))"), f("(-> (pred B) (pred A))")]);
        // ≃ in premise position splices both inclusions
        let g = f("(-> (exteq a b) (pred F))");
        assert_eq!(g, f("(-> (sub a b) (sub b a) (pred F))"));
        assert!(parse_formula("(exteq a b)").is_err());
    }

    #[test]
    fn idempotent_on_output() {
        let g = f("(all-in x a (ex y (in y x)))");
        let again = Sugared::Core(g.clone()).expand();
        assert_eq!(again, vec![g.clone()]);
        assert_eq!(formula_from_sexp(&g.to_sexp(), &|_| None).unwrap(), g);
    }
}
