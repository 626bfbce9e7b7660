//! The axioms and axiom schemes of ZF_ε as instantiable hypotheses.
//!
//! They are meant to be placed in a derivation context; nothing here proves
//! them.  Pairs (`↔`) at the top of an axiom yield two formulas, each
//! universally closed; a `↔` under an existential is read as a conjunction.

use super::formula::{fresh_var, Formula, SetTerm};
use super::sugar::Sugared;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomScheme {
    Extensionality,
    Foundation,
    Comprehension,
    Pairing,
    Union,
    PowerSet,
    Collection,
    Infinity,
}

impl AxiomScheme {
    pub const ALL: [AxiomScheme; 8] = [
        AxiomScheme::Extensionality,
        AxiomScheme::Foundation,
        AxiomScheme::Comprehension,
        AxiomScheme::Pairing,
        AxiomScheme::Union,
        AxiomScheme::PowerSet,
        AxiomScheme::Collection,
        AxiomScheme::Infinity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomScheme::Extensionality => "extensionality",
            AxiomScheme::Foundation => "foundation",
            AxiomScheme::Comprehension => "comprehension",
            AxiomScheme::Pairing => "pairing",
            AxiomScheme::Union => "union",
            AxiomScheme::PowerSet => "power",
            AxiomScheme::Collection => "collection",
            AxiomScheme::Infinity => "infinity",
        }
    }

    pub fn by_name(name: &str) -> Option<AxiomScheme> {
        AxiomScheme::ALL.iter().copied().find(|a| a.name() == name)
    }

    /// How many distinguished variables the scheme's formula parameter has
    /// (0 for plain axioms).
    pub fn parameter_vars(self) -> usize {
        match self {
            AxiomScheme::Foundation | AxiomScheme::Comprehension => 1,
            AxiomScheme::Collection | AxiomScheme::Infinity => 2,
            _ => 0,
        }
    }

    /// Instantiates the scheme.  `param` is `F` together with its
    /// distinguished variables (`F[x]` or `F[x, y]`); all other free variables
    /// of `F` are universally closed in front.
    pub fn instantiate(self, param: Option<(&Formula, &[&str])>) -> Result<Vec<Formula>, String> {
        let needed = self.parameter_vars();
        let (f, vars) = match (needed, param) {
            (0, None) => (None, &[][..]),
            (0, Some(_)) => return Err(format!("{} takes no formula parameter", self)),
            (k, Some((f, vs))) if vs.len() == k => (Some(f), vs),
            (k, _) => return Err(format!("{} needs a formula with {} distinguished variable(s)", self, k)),
        };
        let mut avoid: BTreeSet<String> = f.map(|f| f.free_vars()).unwrap_or_default();
        avoid.extend(vars.iter().map(|v| v.to_string()));
        let mut fresh = |base: &str| {
            let v = if avoid.contains(base) { fresh_var(base, &avoid) } else { base.to_string() };
            avoid.insert(v.clone());
            v
        };
        let sv = |x: &str| SetTerm::var(x);
        let core = Sugared::Core;
        let bx = Box::new;
        // F with its distinguished variables replaced by the given ones
        let inst = |args: &[&str]| -> Sugared {
            let f = f.expect("scheme has a parameter");
            // rename through fresh intermediates so simultaneous renaming is safe
            let mut g = f.clone();
            let tmp: Vec<String> = (0..vars.len()).map(|i| format!("__p{}", i)).collect();
            for (v, t) in vars.iter().zip(&tmp) {
                g = g.subst(v, &SetTerm::var(t));
            }
            for (t, a) in tmp.iter().zip(args) {
                g = g.subst(t, &SetTerm::var(a));
            }
            core(g)
        };
        let out: Vec<Sugared> = match self {
            AxiomScheme::Extensionality => {
                let (x, y, z) = (fresh("x"), fresh("y"), fresh("z"));
                let first = Sugared::Iff(
                    bx(Sugared::In(sv(&x), sv(&y))),
                    bx(Sugared::ExistsIn(z.clone(), sv(&y), vec![Sugared::ExtEq(sv(&x), sv(&z))])),
                );
                let second = Sugared::Iff(
                    bx(core(Formula::atom(super::formula::Rel::Sub, sv(&x), sv(&y)))),
                    bx(Sugared::ForallIn(z.clone(), sv(&x), bx(Sugared::In(sv(&z), sv(&y))))),
                );
                // distribute the closure over each half of both pairs
                let close = |s: Formula| Formula::forall(&x, Formula::forall(&y, s));
                return Ok(first.expand().into_iter().chain(second.expand()).map(close).collect());
            }
            AxiomScheme::Foundation => {
                let (x, y, a) = (fresh("x"), fresh("y"), fresh("a"));
                let hyp = Sugared::Forall(
                    x.clone(),
                    bx(Sugared::Implies(
                        vec![Sugared::ForallIn(y.clone(), sv(&x), bx(inst(&[&y])))],
                        bx(inst(&[&x])),
                    )),
                );
                vec![Sugared::Forall(a.clone(), bx(Sugared::Implies(vec![hyp], bx(inst(&[&a])))))]
            }
            AxiomScheme::Comprehension => {
                let (a, b, x) = (fresh("a"), fresh("b"), fresh("x"));
                let body = Sugared::Iff(
                    bx(Sugared::Eps(sv(&x), sv(&b))),
                    bx(Sugared::And(bx(Sugared::Eps(sv(&x), sv(&a))), bx(inst(&[&x])))),
                );
                vec![Sugared::Forall(
                    a.clone(),
                    bx(Sugared::Exists(b.clone(), vec![Sugared::Forall(x.clone(), bx(body))])),
                )]
            }
            AxiomScheme::Pairing => {
                let (a, b, x) = (fresh("a"), fresh("b"), fresh("x"));
                vec![Sugared::Forall(
                    a.clone(),
                    bx(Sugared::Forall(
                        b.clone(),
                        bx(Sugared::Exists(
                            x.clone(),
                            vec![Sugared::Eps(sv(&a), sv(&x)), Sugared::Eps(sv(&b), sv(&x))],
                        )),
                    )),
                )]
            }
            AxiomScheme::Union => {
                let (a, b, x, y) = (fresh("a"), fresh("b"), fresh("x"), fresh("y"));
                let inner = Sugared::ForallIn(
                    x.clone(),
                    sv(&a),
                    bx(Sugared::ForallIn(y.clone(), sv(&x), bx(Sugared::Eps(sv(&y), sv(&b))))),
                );
                vec![Sugared::Forall(a.clone(), bx(Sugared::Exists(b.clone(), vec![inner])))]
            }
            AxiomScheme::PowerSet => {
                let (a, b, x, y, z) = (fresh("a"), fresh("b"), fresh("x"), fresh("y"), fresh("z"));
                let iff = Sugared::Iff(
                    bx(Sugared::Eps(sv(&z), sv(&y))),
                    bx(Sugared::And(bx(Sugared::Eps(sv(&z), sv(&a))), bx(Sugared::Eps(sv(&z), sv(&x))))),
                );
                let inner = Sugared::Forall(
                    x.clone(),
                    bx(Sugared::ExistsIn(y.clone(), sv(&b), vec![Sugared::Forall(z.clone(), bx(iff))])),
                );
                vec![Sugared::Forall(a.clone(), bx(Sugared::Exists(b.clone(), vec![inner])))]
            }
            AxiomScheme::Collection | AxiomScheme::Infinity => {
                let (a, b, x, y) = (fresh("a"), fresh("b"), fresh("x"), fresh("y"));
                let fxy = inst(&[&x, &y]);
                let closure = Sugared::ForallIn(
                    x.clone(),
                    sv(&b_or_a(self, &a, &b)),
                    bx(Sugared::Implies(
                        vec![Sugared::Exists(y.clone(), vec![fxy.clone()])],
                        bx(Sugared::ExistsIn(y.clone(), sv(&b), vec![fxy])),
                    )),
                );
                let body = if self == AxiomScheme::Collection {
                    vec![closure]
                } else {
                    vec![Sugared::Eps(sv(&a), sv(&b)), closure]
                };
                vec![Sugared::Forall(a.clone(), bx(Sugared::Exists(b.clone(), body)))]
            }
        };
        let params: Vec<String> = match f {
            Some(f) => f.free_vars().into_iter().filter(|v| !vars.contains(&v.as_str())).collect(),
            None => vec![],
        };
        Ok(out
            .iter()
            .map(|s| params.iter().rev().fold(s.single(), |acc, p| Formula::forall(p, acc)))
            .collect())
    }
}

// Collection ranges over a; infinity over b itself.
fn b_or_a(scheme: AxiomScheme, a: &str, b: &str) -> String {
    if scheme == AxiomScheme::Infinity {
        b.to_string()
    } else {
        a.to_string()
    }
}

impl fmt::Display for AxiomScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::sugar::parse_formula;

    #[test]
    fn pairing_axiom() {
        let f = AxiomScheme::Pairing.instantiate(None).unwrap();
        let expected =
            parse_formula("(all a (all b (-> (all x (-> (-> (noteps a x) bot) (-> (noteps b x) bot) bot)) bot)))").unwrap();
        assert_eq!(f, vec![expected]);
    }

    #[test]
    fn foundation_closes_parameters() {
        let f = parse_formula("(sub x p)").unwrap();
        let inst = AxiomScheme::Foundation.instantiate(Some((&f, &["x"]))).unwrap();
        assert_eq!(inst.len(), 1);
        assert!(inst[0].is_closed());
        assert!(matches!(&inst[0], Formula::Forall(p, _) if p == "p"));
    }

    #[test]
    fn every_scheme_instantiates_closed() {
        let f1 = parse_formula("(notin x c)").unwrap();
        let f2 = parse_formula("(sub x y)").unwrap();
        for s in AxiomScheme::ALL {
            let out = match s.parameter_vars() {
                0 => s.instantiate(None),
                1 => s.instantiate(Some((&f1, &["x"]))),
                _ => s.instantiate(Some((&f2, &["x", "y"]))),
            }
            .unwrap();
            assert!(out.iter().all(Formula::is_closed), "{}", s);
        }
        assert_eq!(AxiomScheme::Extensionality.instantiate(None).unwrap().len(), 4);
    }
}
