//! The evaluation machine: one weak-head step at a time, plus bounded runs
//! with optional cycle detection.

use crate::terms::{decode, encode_bounded, Comb, Process, Stack, Term, TermView};
use num_bigint::BigUint;
use std::collections::HashMap;
use std::fmt;

/// Binary length beyond which `ς` refuses to materialise a code.
///
/// Codes double in length with each nesting level; past this bound the
/// numeral would not fit in memory, so the step is reported instead of taken.
pub const QUOTE_CODE_BITS: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Push,
    I,
    K,
    E,
    W,
    C,
    B,
    Cc,
    Cont,
    Quote,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Push => "push",
            Rule::I => "I",
            Rule::K => "K",
            Rule::E => "E",
            Rule::W => "W",
            Rule::C => "C",
            Rule::B => "B",
            Rule::Cc => "cc",
            Rule::Cont => "k",
            Rule::Quote => "quote",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Next(Rule, Process),
    /// No rule applies: the stack is too shallow for the head combinator.
    Stuck(Process),
    /// `ς` would have to quote a term whose code exceeds [`QUOTE_CODE_BITS`].
    QuoteTooLarge(Process),
}

fn pop(s: &Stack, n: usize) -> Option<(Vec<Term>, Stack)> {
    let mut args = Vec::with_capacity(n);
    let mut cur = s;
    for _ in 0..n {
        let (t, r) = cur.top()?;
        args.push(t.clone());
        cur = r;
    }
    Some((args, cur.clone()))
}

pub fn step(p: &Process) -> StepOutcome {
    let stuck = || StepOutcome::Stuck(p.clone());
    let next = |r: Rule, head: Term, stack: Stack| StepOutcome::Next(r, Process::new(head, stack));
    match p.head.view() {
        TermView::App(f, a) => next(Rule::Push, f, Stack::push(a, p.stack.clone())),
        TermView::Cont(saved) => match p.stack.top() {
            Some((x, _)) => next(Rule::Cont, x.clone(), saved),
            None => stuck(),
        },
        TermView::Comb(c) => {
            let Some((a, rest)) = pop(&p.stack, c.arity()) else {
                return stuck();
            };
            match c {
                Comb::I => next(Rule::I, a[0].clone(), rest),
                Comb::K => next(Rule::K, a[0].clone(), rest),
                Comb::E => next(Rule::E, Term::app(a[0].clone(), a[1].clone()), rest),
                Comb::W => next(
                    Rule::W,
                    a[0].clone(),
                    Stack::push(a[1].clone(), Stack::push(a[1].clone(), rest)),
                ),
                Comb::C => next(
                    Rule::C,
                    a[0].clone(),
                    Stack::push(a[2].clone(), Stack::push(a[1].clone(), rest)),
                ),
                Comb::B => next(
                    Rule::B,
                    Term::app(a[0].clone(), Term::app(a[1].clone(), a[2].clone())),
                    rest,
                ),
                Comb::Cc => {
                    let k = Term::cont(rest.clone());
                    next(Rule::Cc, a[0].clone(), Stack::push(k, rest))
                }
                Comb::Quote => match encode_bounded(&a[1], QUOTE_CODE_BITS) {
                    Some(code) => next(Rule::Quote, a[0].clone(), Stack::push(Term::numeral(code), rest)),
                    None => StepOutcome::QuoteTooLarge(p.clone()),
                },
            }
        }
    }
}

/// The term with code `n` (re-exported here for callers of the machine).
pub fn term_of_code(n: &BigUint) -> Term {
    decode(n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Stuck,
    BudgetExhausted,
    /// `trace[prefix + k] == trace[prefix + k + period]` for all valid k.
    Cyclic { prefix: usize, period: usize },
    QuoteTooLarge,
}

impl RunStatus {
    /// A run whose future is completely known: it halted or it loops.
    pub fn is_certified(&self) -> bool {
        matches!(self, RunStatus::Stuck | RunStatus::Cyclic { .. })
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunStatus::Stuck => f.write_str("Stuck"),
            RunStatus::BudgetExhausted => f.write_str("BudgetExhausted"),
            RunStatus::Cyclic { prefix, period } => write!(f, "Cyclic(prefix={}, period={})", prefix, period),
            RunStatus::QuoteTooLarge => f.write_str("QuoteTooLarge"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub index: usize,
    /// Rule that produced this state; `None` for the initial process.
    pub rule: Option<Rule>,
    pub process: Process,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub trace: Vec<TraceEntry>,
    pub status: RunStatus,
}

impl RunReport {
    pub fn steps(&self) -> usize {
        self.trace.len() - 1
    }

    pub fn last(&self) -> &Process {
        &self.trace.last().expect("trace is never empty").process
    }

    pub fn processes(&self) -> impl Iterator<Item = &Process> {
        self.trace.iter().map(|e| &e.process)
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub budget: usize,
    pub detect_cycles: bool,
    /// States larger than this are not remembered for cycle detection.
    pub state_size_cap: u64,
}

impl RunOptions {
    pub fn new(budget: usize) -> Self {
        RunOptions {
            budget,
            detect_cycles: false,
            state_size_cap: 1_000_000,
        }
    }

    pub fn with_cycles(budget: usize) -> Self {
        RunOptions {
            detect_cycles: true,
            ..RunOptions::new(budget)
        }
    }
}

pub fn run(p: &Process, opts: &RunOptions) -> RunReport {
    let mut trace = vec![TraceEntry {
        index: 0,
        rule: None,
        process: p.clone(),
    }];
    let mut seen: HashMap<Process, usize> = HashMap::new();
    if opts.detect_cycles {
        seen.insert(p.clone(), 0);
    }
    let mut cur = p.clone();
    let status = loop {
        let (rule, nxt) = match step(&cur) {
            StepOutcome::Stuck(_) => break RunStatus::Stuck,
            StepOutcome::QuoteTooLarge(_) => break RunStatus::QuoteTooLarge,
            StepOutcome::Next(r, q) => (r, q),
        };
        let index = trace.len();
        if index > opts.budget {
            break RunStatus::BudgetExhausted;
        }
        trace.push(TraceEntry {
            index,
            rule: Some(rule),
            process: nxt.clone(),
        });
        if opts.detect_cycles && nxt.size() <= opts.state_size_cap {
            if let Some(&first) = seen.get(&nxt) {
                break RunStatus::Cyclic {
                    prefix: first,
                    period: index - first,
                };
            }
            seen.insert(nxt.clone(), index);
        }
        cur = nxt;
    };
    RunReport { trace, status }
}

/// Lazily enumerates the states reached from a process.
pub struct Evaluation {
    cur: Option<Process>,
}

impl Iterator for Evaluation {
    type Item = Process;
    fn next(&mut self) -> Option<Process> {
        let p = self.cur.take()?;
        if let StepOutcome::Next(_, q) = step(&p) {
            self.cur = Some(q);
        }
        Some(p)
    }
}

pub fn evaluate(p: &Process) -> Evaluation {
    Evaluation { cur: Some(p.clone()) }
}

/// Whether `q` occurs among the first `budget + 1` states from `p`.
pub fn reduces_to(p: &Process, q: &Process, budget: usize) -> bool {
    evaluate(p).take(budget.saturating_add(1)).any(|s| &s == q)
}

/// Position (number of steps) at which `q` first appears, if within budget.
pub fn reduction_distance(p: &Process, q: &Process, budget: usize) -> Option<usize> {
    evaluate(p).take(budget.saturating_add(1)).position(|s| &s == q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceFormat {
    Full,
    Compact,
}

/// One line per state: index, rule, process.  The compact form elides the
/// stack below the top `COMPACT_DEPTH` cells.
pub fn format_trace(report: &RunReport, format: TraceFormat) -> String {
    const COMPACT_DEPTH: usize = 4;
    let mut out = String::new();
    for e in &report.trace {
        let rule = e.rule.map_or("start", Rule::name);
        let body = match format {
            TraceFormat::Full => e.process.to_string(),
            TraceFormat::Compact => {
                let mut s = format!("{} *", e.process.head);
                let mut cur = &e.process.stack;
                let mut shown = 0;
                loop {
                    match cur.top() {
                        None => {
                            s.push_str(&format!(" {}", cur.base()));
                            break;
                        }
                        Some(_) if shown == COMPACT_DEPTH => {
                            s.push_str(&format!(" ...[{} more]", cur.depth()));
                            break;
                        }
                        Some((t, r)) => {
                            s.push_str(&format!(" {} .", t));
                            cur = r;
                            shown += 1;
                        }
                    }
                }
                s
            }
        };
        out.push_str(&format!("{}\t{}\t{}\n", e.index, rule, body));
    }
    out.push_str(&format!("status\t{}\n", report.status));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{numeral, parse_process, parse_term, Comb};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn basic_rules() {
        let p = parse_process("K * I . B . pi0").unwrap();
        assert_eq!(step(&p), StepOutcome::Next(Rule::K, parse_process("I * pi0").unwrap()));
        let p = parse_process("cc * I . pi3").unwrap();
        assert_eq!(step(&p), StepOutcome::Next(Rule::Cc, parse_process("I * k[pi3] . pi3").unwrap()));
        let p = parse_process("k[B . pi1] * I . pi0").unwrap();
        assert_eq!(step(&p), StepOutcome::Next(Rule::Cont, parse_process("I * B . pi1").unwrap()));
        let p = parse_process("B * I . pi0").unwrap();
        assert_eq!(step(&p), StepOutcome::Stuck(p.clone()));
    }

    #[test]
    fn quote_pushes_numeral_of_code() {
        let p = parse_process("qt * I . K . pi0").unwrap();
        match step(&p) {
            StepOutcome::Next(Rule::Quote, q) => {
                assert_eq!(q.head, Term::comb(Comb::I));
                assert_eq!(q.stack.top().unwrap().0, &numeral(4));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn run_statuses() {
        let r = run(&parse_process("B * I . pi0").unwrap(), &RunOptions::new(10));
        assert_eq!(r.status, RunStatus::Stuck);
        assert_eq!(r.steps(), 0);
        let d = t("(W (E E))");
        let omega = Process::new(Term::app(d.clone(), d), Stack::pi(0));
        let r = run(&omega, &RunOptions::with_cycles(100));
        assert!(matches!(r.status, RunStatus::Cyclic { .. }));
        let r = run(&omega, &RunOptions::new(5));
        assert_eq!(r.status, RunStatus::BudgetExhausted);
        assert_eq!(r.steps(), 5);
    }
}
