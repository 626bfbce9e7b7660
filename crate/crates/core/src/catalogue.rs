//! Named realizers with the head reductions their correctness arguments rely
//! on, replayed on the machine.
//!
//! Arbitrary terms in a contract ("let ξ, η be any terms") are played by
//! continuations over high, otherwise unused stack constants: they are
//! distinct from each other and from everything built out of combinators, and
//! applying them never folds into a numeral.

use crate::compile::{compile, instantiate, CTerm, CompileError, LambdaTerm};
use crate::machine::{run, RunOptions, RunStatus};
use crate::terms::{encode, numeral, sigma, Comb, Process, Stack, Term, TermView};
use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::OnceLock;

#[derive(Clone, Debug)]
pub enum Source {
    Lambda(LambdaTerm),
    Combinatory(CTerm),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Lambda(l) => write!(f, "{}", l),
            Source::Combinatory(c) => write!(f, "{}", c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractKind {
    /// The process occurs in the run.
    Reaches(Process),
    /// The processes occur in the run in this order.
    ReachesInOrder(Vec<Process>),
    /// The run is certified cyclic and the cycle passes through the process.
    Cycles(Process),
}

#[derive(Clone, Debug)]
pub struct Contract {
    pub description: String,
    pub start: Process,
    pub kind: ContractKind,
    pub budget: usize,
}

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: Source,
    /// Closed terms plugged in for the free names of the source.
    pub params: Vec<(String, Term)>,
    pub term: Term,
    pub contracts: Vec<Contract>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractOutcome {
    pub description: String,
    pub passed: bool,
    /// Step at which the (last) expected process was found.
    pub steps: Option<usize>,
    pub status: RunStatus,
    pub budget: usize,
}

#[derive(Clone, Debug)]
pub struct EntryReport {
    pub name: &'static str,
    pub outcomes: Vec<ContractOutcome>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no catalogue entry named {0}")]
pub struct UnknownEntry(pub String);

/// An opaque stand-in for an arbitrary term.
pub fn probe(j: u64) -> Term {
    Term::cont(Stack::pi(1_000 + j))
}

fn lam(src: &str) -> LambdaTerm {
    LambdaTerm::parse(src).unwrap_or_else(|e| panic!("catalogue source {:?}: {}", src, e))
}

fn build(src: &Source, params: &[(String, Term)]) -> Result<Term, CompileError> {
    let c = match src {
        Source::Lambda(l) => compile(l),
        Source::Combinatory(c) => c.clone(),
    };
    let map: HashMap<String, Term> = params.iter().cloned().collect();
    instantiate(&c, &map)
}

/// Compiles a λ-term with the given closed terms for its free names.
pub fn compile_with(src: &str, params: &[(&str, &Term)]) -> Term {
    let p: Vec<(String, Term)> = params.iter().map(|(n, t)| (n.to_string(), (*t).clone())).collect();
    build(&Source::Lambda(lam(src)), &p).expect("parameters cover the free names")
}

fn app(f: &Term, a: &Term) -> Term {
    Term::app(f.clone(), a.clone())
}

fn apps(f: &Term, args: &[&Term]) -> Term {
    args.iter().fold(f.clone(), |acc, a| app(&acc, a))
}

fn stack(terms: &[&Term], base: &Stack) -> Stack {
    Stack::from_terms(terms.iter().map(|t| (*t).clone()), base.clone())
}

fn proc(head: &Term, terms: &[&Term], base: &Stack) -> Process {
    Process::new(head.clone(), stack(terms, base))
}

fn k(s: &Stack) -> Term {
    Term::cont(s.clone())
}

/// `λfλx fⁿx`.
pub fn church(n: usize) -> Term {
    let body = (0..n).fold("x".to_string(), |acc, _| format!("(f {})", acc));
    compile_with(&format!("\\f x. {}", body), &[])
}

pub fn omega() -> Term {
    compile_with("(\\x. x x) (\\x. x x)", &[])
}

pub fn storage_t() -> Term {
    compile_with("\\n f. n (\\g x. g (sigma x)) f zero", &[("sigma", sigma()), ("zero", &numeral(0))])
}

fn entry(
    name: &'static str,
    summary: &'static str,
    source: Source,
    params: Vec<(&str, Term)>,
    contracts: impl FnOnce(&Term) -> Vec<Contract>,
) -> CatalogueEntry {
    let params: Vec<(String, Term)> = params.into_iter().map(|(n, t)| (n.to_string(), t)).collect();
    let term = build(&source, &params).unwrap_or_else(|e| panic!("catalogue entry {}: {}", name, e));
    let contracts = contracts(&term);
    CatalogueEntry {
        name,
        summary,
        source,
        params,
        term,
        contracts,
    }
}

fn reaches(description: &str, start: Process, target: Process, budget: usize) -> Contract {
    Contract {
        description: description.to_string(),
        start,
        kind: ContractKind::Reaches(target),
        budget,
    }
}

fn chain(description: &str, start: Process, targets: Vec<Process>, budget: usize) -> Contract {
    Contract {
        description: description.to_string(),
        start,
        kind: ContractKind::ReachesInOrder(targets),
        budget,
    }
}

fn cycles(description: &str, start: Process, through: Process, budget: usize) -> Contract {
    Contract {
        description: description.to_string(),
        start,
        kind: ContractKind::Cycles(through),
        budget,
    }
}

fn build_all() -> Vec<CatalogueEntry> {
    let pi = Stack::pi(0);
    let (xi, eta, zeta, alpha, phi) = (probe(1), probe(2), probe(3), probe(4), probe(5));
    let om = omega();
    let om0 = app(&om, &numeral(0));
    let om1 = app(&om, &numeral(1));
    let a_term = compile_with("\\a f. f (a a f)", &[]);
    let shift = compile_with("\\g x. g (sigma x)", &[("sigma", sigma())]);
    let kpi = k(&pi);
    let mut out = Vec::new();

    out.push(entry(
        "A",
        "half of the Turing fixed point combinator",
        Source::Lambda(lam("\\a f. f (a a f)")),
        vec![],
        |t| {
            vec![reaches(
                "A * a . f . pi  >  f * (A-style self application) . pi",
                proc(t, &[&xi, &eta], &pi),
                proc(&eta, &[&apps(&xi, &[&xi, &eta])], &pi),
                1_000,
            )]
        },
    ));

    out.push(entry(
        "Y",
        "Turing fixed point combinator A A",
        Source::Lambda(lam("a a")),
        vec![("a", a_term.clone())],
        |t| {
            vec![
                reaches("Y * xi . pi  >  xi * Y xi . pi", proc(t, &[&xi], &pi), proc(&xi, &[&app(t, &xi)], &pi), 1_000),
                reaches(
                    "Y * xi . eta . pi  >  xi * Y xi . eta . pi",
                    proc(t, &[&xi, &eta], &pi),
                    proc(&xi, &[&app(t, &xi), &eta], &pi),
                    1_000,
                ),
            ]
        },
    ));

    out.push(entry(
        "sigma",
        "successor on numerals, (B W)(B B)",
        Source::Combinatory(CTerm::app(
            CTerm::app(CTerm::Const(Comb::B), CTerm::Const(Comb::W)),
            CTerm::app(CTerm::Const(Comb::B), CTerm::Const(Comb::B)),
        )),
        vec![],
        |t| {
            vec![reaches(
                "sigma * xi . eta . zeta . pi  >  (xi eta)(eta zeta) * pi",
                proc(t, &[&xi, &eta, &zeta], &pi),
                Process::new(app(&app(&xi, &eta), &app(&eta, &zeta)), pi.clone()),
                1_000,
            )]
        },
    ));

    out.push(entry(
        "numerals",
        "numerals 0 = K I, n+1 = sigma n, unfolded one step at a time",
        Source::Combinatory(CTerm::app(CTerm::Const(Comb::K), CTerm::Const(Comb::I))),
        vec![],
        |_| {
            (0..=10u64)
                .map(|n| {
                    // n+1 * xi.a.pi > sigma * n.xi.a.pi > n * xi.(xi a).pi > ... > 0 * xi.(xi^n+1 a).pi
                    let mut targets = vec![proc(sigma(), &[&numeral(n), &xi, &alpha], &pi)];
                    let mut acc = alpha.clone();
                    for m in (0..=n).rev() {
                        acc = app(&xi, &acc);
                        targets.push(proc(&numeral(m), &[&xi, &acc], &pi));
                    }
                    targets.push(Process::new(acc, pi.clone()));
                    chain(
                        &format!("{} * xi . alpha . pi unfolds down to 0", n + 1),
                        proc(&numeral(n + 1), &[&xi, &alpha], &pi),
                        targets,
                        40 * (n as usize + 2),
                    )
                })
                .collect()
        },
    ));

    out.push(entry(
        "recurrence_I",
        "recurrence realized by I: I * n . xi . alpha . pi > n * xi . alpha . pi",
        Source::Combinatory(CTerm::Const(Comb::I)),
        vec![],
        |t| {
            (0..=10u64)
                .map(|n| {
                    let mut targets = vec![proc(&numeral(n), &[&xi, &alpha], &pi)];
                    let mut acc = alpha.clone();
                    for m in (0..n).rev() {
                        acc = app(&xi, &acc);
                        targets.push(proc(&numeral(m), &[&xi, &acc], &pi));
                    }
                    chain(
                        &format!("I * {} . xi . alpha . pi", n),
                        proc(t, &[&numeral(n), &xi, &alpha], &pi),
                        targets,
                        40 * (n as usize + 2),
                    )
                })
                .collect()
        },
    ));

    out.push(entry(
        "eq_intro",
        "from t = u -> F to the conditional form",
        Source::Lambda(lam("\\x. x I")),
        vec![],
        |t| vec![reaches("* xi . pi  >  xi * I . pi", proc(t, &[&xi], &pi), proc(&xi, &[&Term::comb(Comb::I)], &pi), 20)],
    ));

    out.push(entry(
        "eq_elim",
        "from the conditional form back to t = u -> F",
        Source::Lambda(lam("\\x y. cc (\\k. y (k x))")),
        vec![],
        |t| {
            vec![reaches(
                "* xi . eta . pi  >  eta * k_pi xi . pi",
                proc(t, &[&xi, &eta], &pi),
                proc(&eta, &[&app(&kpi, &xi)], &pi),
                1_000,
            )]
        },
    ));

    out.push(entry(
        "quant_i",
        "integer quantifier to relativized quantifier",
        Source::Lambda(lam("\\x y z. y (x z)")),
        vec![],
        |t| {
            let n = numeral(3);
            vec![reaches(
                "* xi . eta . n . pi  >  eta * xi n . pi",
                proc(t, &[&xi, &eta, &n], &pi),
                proc(&eta, &[&app(&xi, &n)], &pi),
                1_000,
            )]
        },
    ));

    out.push(entry(
        "quant_ii",
        "relativized quantifier to integer quantifier",
        Source::Lambda(lam("\\x y. cc (\\k. x k y)")),
        vec![],
        |t| {
            let n = numeral(3);
            let base = stack(&[&n], &pi);
            vec![reaches(
                "* xi . n . pi  >  xi * k_pi . n . pi",
                proc(t, &[&xi, &n], &pi),
                proc(&xi, &[&kpi, &n], &pi),
                1_000,
            )]
            .into_iter()
            .chain(std::iter::once(reaches(
                "the saved stack is the one after n",
                proc(t, &[&xi, &n], &pi),
                Process::new(xi.clone(), stack(&[&kpi], &base)),
                1_000,
            )))
            .collect()
        },
    ));

    out.push(entry(
        "succ_shift",
        "shifts an integer realizer by one",
        Source::Lambda(lam("\\g x. g (sigma x)")),
        vec![("sigma", sigma().clone())],
        |t| {
            (0..=5u64)
                .map(|n| {
                    reaches(
                        &format!("* xi . {} . pi  >  xi * {} . pi", n, n + 1),
                        proc(t, &[&xi, &numeral(n)], &pi),
                        proc(&xi, &[&numeral(n + 1)], &pi),
                        1_000,
                    )
                })
                .collect()
        },
    ));

    out.push(entry(
        "storage_T",
        "storage operator: int(n) realizers to strict numerals",
        Source::Lambda(lam("\\n f. n (\\g x. g (sigma x)) f zero")),
        vec![("sigma", sigma().clone()), ("zero", numeral(0))],
        |t| {
            let mut cs = vec![reaches(
                "T * nu . phi . pi  >  nu * shift . phi . 0 . pi",
                proc(t, &[&eta, &phi], &pi),
                proc(&eta, &[&shift, &phi, &numeral(0)], &pi),
                1_000,
            )];
            for n in 0..=10usize {
                cs.push(reaches(
                    &format!("T * church {} . phi . pi  >  phi * {} . pi", n, n),
                    proc(t, &[&church(n), &phi], &pi),
                    proc(&phi, &[&numeral(n as u64)], &pi),
                    2_000,
                ));
            }
            cs
        },
    ));

    out.push(entry(
        "bool_split",
        "selects between two realizers on the numerals 0 and 1",
        Source::Lambda(lam("\\x y f. f x y")),
        vec![],
        |t| {
            vec![
                chain(
                    "* xi . eta . 0 . pi  >  0 * xi . eta . pi  >  eta * pi",
                    proc(t, &[&xi, &eta, &numeral(0)], &pi),
                    vec![proc(&numeral(0), &[&xi, &eta], &pi), Process::new(eta.clone(), pi.clone())],
                    1_000,
                ),
                chain(
                    "* eta . xi . 1 . pi  >  1 * eta . xi . pi  >  eta * xi . pi",
                    proc(t, &[&eta, &xi, &numeral(1)], &pi),
                    vec![proc(&numeral(1), &[&eta, &xi], &pi), proc(&eta, &[&xi], &pi)],
                    1_000,
                ),
            ]
        },
    ));

    out.push(entry(
        "neac",
        "non-extensional choice via quote",
        Source::Lambda(lam("\\x. qt x x")),
        vec![],
        |t| {
            let n = Term::numeral(encode(&xi));
            vec![chain(
                "* xi . pi  >  qt * xi . xi . pi  >  xi * n_xi . pi",
                proc(t, &[&xi], &pi),
                vec![proc(&Term::comb(Comb::Quote), &[&xi, &xi], &pi), proc(&xi, &[&n], &pi)],
                1_000,
            )]
        },
    ));

    out.push(entry(
        "delta_theta",
        "dense family of the Boolean algebra via quote",
        Source::Lambda(lam("\\x y. qt y x x")),
        vec![],
        |t| {
            let n = Term::numeral(encode(&xi));
            vec![chain(
                "* xi . eta . pi  >  qt * eta . xi . xi . pi  >  eta * n_xi . xi . pi",
                proc(t, &[&xi, &eta], &pi),
                vec![
                    proc(&Term::comb(Comb::Quote), &[&eta, &xi, &xi], &pi),
                    proc(&eta, &[&n, &xi], &pi),
                ],
                1_000,
            )]
        },
    ));

    out.push(entry(
        "omega",
        "(\\x. x x)(\\x. x x)",
        Source::Lambda(lam("(\\x. x x) (\\x. x x)")),
        vec![],
        |t| {
            vec![
                cycles("omega * pi loops back to itself", Process::new(t.clone(), pi.clone()), Process::new(t.clone(), pi.clone()), 50),
                cycles(
                    "omega * xi . pi loops with xi untouched",
                    proc(t, &[&xi], &pi),
                    proc(t, &[&xi], &pi),
                    1_000,
                ),
            ]
        },
    ));

    out.push(entry("omega0", "omega applied to 0", Source::Lambda(lam("w zero")), vec![("w", om.clone()), ("zero", numeral(0))], |t| {
        vec![cycles("omega0 * pi loops at omega * 0 . pi", Process::new(t.clone(), pi.clone()), proc(&om, &[&numeral(0)], &pi), 50)]
    }));

    out.push(entry("omega1", "omega applied to 1", Source::Lambda(lam("w one")), vec![("w", om.clone()), ("one", numeral(1))], |t| {
        vec![cycles("omega1 * pi loops at omega * 1 . pi", Process::new(t.clone(), pi.clone()), proc(&om, &[&numeral(1)], &pi), 50)]
    }));

    out.push(entry(
        "t51",
        "the Boolean algebra on {0,1} is not trivial",
        Source::Lambda(lam("\\f. cc (\\k. f (w1 k) (w0 k))")),
        vec![("w0", om0.clone()), ("w1", om1.clone())],
        |t| {
            vec![reaches(
                "* xi . pi  >  xi * omega1 k_pi . omega0 k_pi . pi",
                proc(t, &[&xi], &pi),
                t51_fixture_process(),
                1_000,
            )]
        },
    ));

    out.push(entry(
        "t52",
        "the Boolean algebra on {0,1} is atomless (alpha_i = 0, 1, 2)",
        Source::Lambda(lam("\\x y. cc (\\k. (x (k y a0)) ((x (k y a1)) (k y a2)))")),
        vec![("a0", numeral(0)), ("a1", numeral(1)), ("a2", numeral(2))],
        |t| {
            let kx = |a: u64| apps(&kpi, &[&xi, &numeral(a)]);
            let rest = app(&app(&eta, &kx(1)), &kx(2));
            vec![reaches(
                "* eta . xi . pi  >  eta * k_pi xi a0 . (eta (k_pi xi a1)) (k_pi xi a2) . pi",
                proc(t, &[&eta, &xi], &pi),
                proc(&eta, &[&kx(0), &rest], &pi),
                1_000,
            )]
        },
    ));

    out.push(entry(
        "t53",
        "no surjection between finite powers (reals not well orderable)",
        Source::Lambda(lam("\\x x'. cc (\\k. x' (\\z. (x z z) (w k z)))")),
        vec![("w", om.clone())],
        |t| {
            let inner = compile_with("\\z. (x z z) (w k z)", &[("x", &xi), ("k", &kpi), ("w", &om)]);
            vec![reaches(
                "* xi . xi' . pi  >  xi' * (\\z. xi z z (omega k_pi z)) . pi",
                proc(t, &[&xi, &eta], &pi),
                proc(&eta, &[&inner], &pi),
                1_000,
            )]
        },
    ));

    out.push(entry(
        "t54",
        "no surjection from the integers onto the Boolean algebra",
        Source::Lambda(lam("\\x x'. cc (\\k. x (\\n. cc (\\h. (x' h h) ((w k) (\\f. f h n)))))")),
        vec![("w", om.clone())],
        |t| {
            let eta_t = compile_with(
                "\\n. cc (\\h. (x' h h) ((w k) (\\f. f h n)))",
                &[("x'", &eta), ("k", &kpi), ("w", &om)],
            );
            let n = numeral(2);
            let pi0 = Stack::pi(1);
            let kpi0 = k(&pi0);
            let pair = compile_with("\\f. f h n", &[("h", &kpi0), ("n", &n)]);
            let zeta0 = app(&app(&om, &kpi), &pair);
            vec![
                reaches(
                    "* xi . xi' . pi  >  xi * eta . pi",
                    proc(t, &[&xi, &eta], &pi),
                    proc(&xi, &[&eta_t], &pi),
                    1_000,
                ),
                reaches(
                    "eta * n . pi0  >  xi' * k_pi0 . k_pi0 . zeta0 . pi0",
                    proc(&eta_t, &[&n], &pi0),
                    proc(&eta, &[&kpi0, &kpi0, &zeta0], &pi0),
                    1_000,
                ),
            ]
        },
    ));

    out.push(entry(
        "t57",
        "no surjection onto a non-zero ideal of a larger finite ring",
        Source::Lambda(lam("\\a x y. cc (\\k. y (\\z. (x z z) (k a z)))")),
        vec![],
        |t| {
            let theta_p = compile_with("\\z. (x z z) (k a z)", &[("x", &xi), ("k", &kpi), ("a", &alpha)]);
            vec![reaches(
                "* alpha . xi . eta . pi  >  eta * theta' . pi",
                proc(t, &[&alpha, &xi, &eta], &pi),
                proc(&eta, &[&theta_p], &pi),
                1_000,
            )]
        },
    ));

    out
}

/// The process `ξ ⋆ ω₁k_π · ω₀k_π · π` with `ξ` = probe 1, `π` = π₀.
pub fn t51_fixture_process() -> Process {
    let pi = Stack::pi(0);
    let kpi = k(&pi);
    let om = omega();
    let om0 = app(&om, &numeral(0));
    let om1 = app(&om, &numeral(1));
    proc(&probe(1), &[&app(&om1, &kpi), &app(&om0, &kpi)], &pi)
}

/// Prints a process in juxtaposition style, replacing the named subterms and
/// stacks by their names: `(f)a` is written `fa` when `a` is atomic.
pub fn paper_style(p: &Process, terms: &[(Term, &str)], stacks: &[(Stack, &str)]) -> String {
    fn atomic(t: &Term, terms: &[(Term, &str)]) -> bool {
        terms.iter().any(|(u, _)| u == t) || !matches!(t.view(), TermView::App(..))
    }
    fn term(t: &Term, terms: &[(Term, &str)], stacks: &[(Stack, &str)], out: &mut String) {
        if let Some((_, n)) = terms.iter().find(|(u, _)| u == t) {
            out.push_str(n);
            return;
        }
        match t.view() {
            TermView::Comb(c) => out.push_str(c.symbol()),
            TermView::Cont(s) => {
                out.push_str("k_");
                match stacks.iter().find(|(u, _)| *u == s) {
                    Some((_, n)) => out.push_str(n),
                    None => {
                        out.push('[');
                        stack_str(&s, terms, stacks, out);
                        out.push(']');
                    }
                }
            }
            TermView::App(f, a) => {
                term(&f, terms, stacks, out);
                if atomic(&a, terms) {
                    term(&a, terms, stacks, out);
                } else {
                    out.push('(');
                    term(&a, terms, stacks, out);
                    out.push(')');
                }
            }
        }
    }
    fn stack_str(s: &Stack, terms: &[(Term, &str)], stacks: &[(Stack, &str)], out: &mut String) {
        let mut cur = s.clone();
        loop {
            if let Some((_, n)) = stacks.iter().find(|(u, _)| *u == cur) {
                out.push_str(n);
                return;
            }
            match cur.top() {
                None => {
                    let _ = write!(out, "{}", cur);
                    return;
                }
                Some((t, rest)) => {
                    term(t, terms, stacks, out);
                    out.push_str(" · ");
                    let r = rest.clone();
                    cur = r;
                }
            }
        }
    }
    let mut out = String::new();
    term(&p.head, terms, stacks, &mut out);
    out.push_str(" ⋆ ");
    stack_str(&p.stack, terms, stacks, &mut out);
    out
}

static CATALOGUE: OnceLock<Vec<CatalogueEntry>> = OnceLock::new();

pub fn entries() -> &'static [CatalogueEntry] {
    CATALOGUE.get_or_init(build_all)
}

pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name).collect()
}

pub fn get(name: &str) -> Result<&'static CatalogueEntry, UnknownEntry> {
    entries()
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| UnknownEntry(name.to_string()))
}

/// Replays one contract; `budget` overrides the declared budget when given.
pub fn replay(c: &Contract, budget: Option<usize>) -> ContractOutcome {
    let budget = budget.unwrap_or(c.budget);
    let report = run(&c.start, &RunOptions::with_cycles(budget));
    let (passed, steps) = match &c.kind {
        ContractKind::Reaches(target) => {
            let at = report.trace.iter().position(|e| e.process == *target);
            (at.is_some(), at)
        }
        ContractKind::ReachesInOrder(targets) => {
            let mut from = 0;
            let mut last = None;
            let mut ok = true;
            for t in targets {
                match report.trace[from..].iter().position(|e| e.process == *t) {
                    Some(i) => {
                        last = Some(from + i);
                        from += i + 1;
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            (ok, if ok { last } else { None })
        }
        ContractKind::Cycles(through) => match report.status {
            RunStatus::Cyclic { prefix, period } => {
                let at = (prefix..prefix + period).find(|&i| report.trace[i].process == *through);
                (at.is_some(), at)
            }
            _ => (false, None),
        },
    };
    ContractOutcome {
        description: c.description.clone(),
        passed,
        steps,
        status: report.status,
        budget,
    }
}

pub fn run_contracts(name: &str, budget: Option<usize>) -> Result<EntryReport, UnknownEntry> {
    let e = get(name)?;
    Ok(EntryReport {
        name: e.name,
        outcomes: e.contracts.iter().map(|c| replay(c, budget)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_contract_passes() {
        for e in entries() {
            let r = run_contracts(e.name, None).unwrap();
            for o in &r.outcomes {
                assert!(o.passed, "{}: {} ({})", e.name, o.description, o.status);
            }
            assert!(e.term.is_proof_like(), "{}", e.name);
        }
    }

    #[test]
    fn named_sources() {
        let y = get("Y").unwrap();
        let a = get("A").unwrap();
        assert_eq!(y.term, Term::app(a.term.clone(), a.term.clone()));
        assert_eq!(get("neac").unwrap().term, compile_with("\\x. qt x x", &[]));
        assert!(get("nope").is_err());
        assert_eq!(church(0), numeral(0));
    }

    #[test]
    fn t51_fixture_prints_as_displayed() {
        let om = omega();
        let names = [
            (probe(1), "ξ"),
            (Term::app(om.clone(), numeral(0)), "ω₀"),
            (Term::app(om, numeral(1)), "ω₁"),
        ];
        let s = paper_style(&t51_fixture_process(), &names, &[(Stack::pi(0), "π")]);
        assert_eq!(s, "ξ ⋆ ω₁k_π · ω₀k_π · π");
    }
}
