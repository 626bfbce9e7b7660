//! `realize`: batch front end for the realizability workbench.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use realizability::catalogue;
use realizability::compile::{compile, LambdaTerm};
use realizability::logic::{check, extract_and_smoke, parse_formula_with, Derivation, SmokeVerdict};
use realizability::machine::{run, RunOptions, RunReport};
use realizability::semantics::{Evaluator, Name, Pole, Realizes, StackUniverse, TruthQuery, UniverseParams};
use realizability::terms::{decode, encode, parse_process, parse_stack, parse_term, Comb, Stack};
use realizability::threads::run_thread;
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "realize", version, about = "Krivine machine, combinator compiler, proof checker and realizability truth values")]
struct Cli {
    /// Step budget for machine runs.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Exact cycle detection on machine runs.
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    cycles: Switch,
    /// Stack universe specification (TOML).
    #[arg(long, global = true)]
    universe: Option<PathBuf>,
    /// Pole specification (TOML).
    #[arg(long, global = true)]
    pole: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile λ-terms (one per line, `#` comments) to combinators.
    Compile { input: PathBuf },
    /// Run a process such as "I * K . pi0".
    Run {
        process: String,
        /// Print only the final process and status.
        #[arg(long)]
        quiet: bool,
    },
    /// Check a derivation and print the extracted program.
    Check {
        derivation: PathBuf,
        /// Also search this many random valuations for a counterexample.
        #[arg(long)]
        smoke: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run threads θₙ ⋆ πₙ for a range such as 0..100 or a single index.
    Threads {
        range: String,
        /// Write every thread's full trace to this file.
        #[arg(long)]
        trace_file: Option<PathBuf>,
    },
    /// Replay catalogue contracts: a name, or `all`.
    Catalogue {
        #[arg(default_value = "all")]
        name: String,
        /// List entries instead of replaying them.
        #[arg(long)]
        list: bool,
        /// Use the declared per-contract budgets instead of --budget.
        #[arg(long)]
        declared: bool,
    },
    /// Gödel code of a term.
    Encode { term: String },
    /// Term with a given Gödel code.
    Decode { code: String },
    /// Evaluate truth values described in a query file (TOML).
    Semantics { query: PathBuf },
}

/// An error in the invocation or its input files (exit 2).
#[derive(Debug)]
struct Usage(anyhow::Error);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<E: Into<anyhow::Error>>(e: E) -> anyhow::Error {
    anyhow::Error::new(Usage(e.into()))
}

struct Out {
    format: Format,
    buf: String,
}

impl Out {
    fn human(&mut self, line: impl AsRef<str>) {
        if self.format == Format::Human {
            self.buf.push_str(line.as_ref());
            self.buf.push('\n');
        }
    }

    fn record(&mut self, v: Value) {
        if self.format == Format::Records {
            self.buf.push_str(&v.to_string());
            self.buf.push('\n');
        }
    }
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct UniverseSpec {
    constant_count: Option<u64>,
    max_depth: Option<usize>,
    max_term_size: Option<usize>,
    combinators: Option<Vec<String>>,
    /// Explicit stacks; replaces generation when present.
    stacks: Option<Vec<String>>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct PoleSpec {
    budget: Option<usize>,
    #[serde(default)]
    generators: Vec<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct QuerySpec {
    formula: String,
    /// Term whose forcing/realizing of the formula is reported.
    term: Option<String>,
    /// Stacks tested for membership in the falsity value; defaults to the universe.
    stacks: Option<Vec<String>>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    /// Named parameters, usable as `$label` and ranged over by ∀.
    #[serde(default)]
    pool: BTreeMap<String, String>,
    arith_cap: Option<u64>,
    universe: Option<UniverseSpec>,
    pole: Option<PoleSpec>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)
}

fn load_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    toml::from_str(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(usage)
}

fn build_universe(spec: &UniverseSpec) -> Result<StackUniverse> {
    if let Some(stacks) = &spec.stacks {
        let parsed = stacks
            .iter()
            .map(|s| parse_stack(s).map_err(|e| usage(anyhow!("stack {:?}: {}", s, e))))
            .collect::<Result<Vec<Stack>>>()?;
        return Ok(StackUniverse::from_stacks(parsed));
    }
    let mut p = UniverseParams::default();
    if let Some(c) = spec.constant_count {
        p.constant_count = c;
    }
    if let Some(d) = spec.max_depth {
        p.max_depth = d;
    }
    if let Some(s) = spec.max_term_size {
        p.max_term_size = s;
    }
    if let Some(cs) = &spec.combinators {
        p.combinators = cs
            .iter()
            .map(|c| Comb::from_symbol(c).ok_or_else(|| usage(anyhow!("unknown combinator {:?}", c))))
            .collect::<Result<_>>()?;
    }
    Ok(StackUniverse::generate(p))
}

fn build_pole(spec: &PoleSpec, default_budget: usize) -> Result<Pole> {
    let gens = spec
        .generators
        .iter()
        .map(|g| parse_process(g).map_err(|e| usage(anyhow!("generator {:?}: {}", g, e))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Pole::generated(gens, spec.budget.unwrap_or(default_budget)))
}

fn run_options(cli: &Cli) -> RunOptions {
    if cli.cycles == Switch::On {
        RunOptions::with_cycles(cli.budget)
    } else {
        RunOptions::new(cli.budget)
    }
}

fn status_record(r: &RunReport) -> Value {
    use realizability::machine::RunStatus::*;
    match &r.status {
        Cyclic { prefix, period } => json!({"status": "Cyclic", "prefix": prefix, "period": period, "steps": r.steps()}),
        s => json!({"status": s.to_string(), "steps": r.steps()}),
    }
}

/// Returns whether the command succeeded (exit 0) or reported a failure (exit 1).
fn dispatch(cli: &Cli, out: &mut Out) -> Result<bool> {
    match &cli.command {
        Command::Compile { input } => {
            let src = read(input)?;
            for (i, line) in src.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let l = LambdaTerm::parse(line).map_err(|e| usage(anyhow!("line {}: {}", i + 1, e)))?;
                let c = compile(&l);
                out.human(c.to_string());
                let free: Vec<String> = c.free_vars().into_iter().collect();
                out.record(json!({"line": i + 1, "source": line, "compiled": c.to_string(), "free": free}));
            }
            Ok(true)
        }
        Command::Run { process, quiet } => {
            let p = parse_process(process).map_err(|e| usage(anyhow!("process: {}", e)))?;
            let r = run(&p, &run_options(cli));
            for e in &r.trace {
                if *quiet && e.index + 1 != r.trace.len() {
                    continue;
                }
                match e.rule {
                    Some(rule) => out.human(format!("{:>6} [{}] {}", e.index, rule, e.process)),
                    None => out.human(format!("{:>6}      {}", e.index, e.process)),
                }
                out.record(json!({"step": e.index, "rule": e.rule.map(|r| r.name()), "process": e.process.to_string()}));
            }
            out.human(format!("status: {}", r.status));
            out.record(status_record(&r));
            Ok(true)
        }
        Command::Check { derivation, smoke, seed } => {
            let d = Derivation::parse(&read(derivation)?).map_err(|e| usage(anyhow!("derivation: {}", e)))?;
            match check(&d) {
                Err(e) => {
                    out.human(format!("rejected: {}", e));
                    out.record(json!({"accepted": false, "error": e.to_string()}));
                    return Ok(false);
                }
                Ok(c) => {
                    out.human(format!("conclusion: {}", c.conclusion));
                    out.human(format!("program: {}", c.lambda));
                    out.human(c.term.to_string());
                    out.record(json!({
                        "accepted": true,
                        "conclusion": c.conclusion.to_string(),
                        "program": c.lambda.to_string(),
                        "term": c.term.to_string(),
                    }));
                }
            }
            if let Some(samples) = smoke {
                let q = TruthQuery::new(universe_from_flags(cli, None)?, pole_from_flags(cli, None)?);
                let r = extract_and_smoke(&d, &q, *samples, *seed)?;
                match &r.verdict {
                    SmokeVerdict::Unrefuted => {
                        out.human(format!("smoke: unrefuted after {} valuations", r.valuations_tried));
                        out.record(json!({"smoke": "Unrefuted", "valuations": r.valuations_tried}));
                    }
                    SmokeVerdict::Refuted { stack, .. } => {
                        out.human(format!("smoke: refuted by stack {}", stack));
                        out.record(json!({"smoke": "Refuted", "valuations": r.valuations_tried, "stack": stack.to_string()}));
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        Command::Threads { range, trace_file } => {
            let (lo, hi) = parse_range(range)?;
            let mut dump = String::new();
            for n in lo..hi {
                let t = run_thread(n, cli.budget);
                let consts: Vec<String> = t.constants_seen.iter().map(|c| c.index().to_string()).collect();
                out.human(format!(
                    "thread {:>5}  {:<28}  steps {:>6}  local {:<5}  theta {}",
                    n,
                    t.status.to_string(),
                    t.run.steps(),
                    t.is_local(),
                    t.theta
                ));
                out.record(json!({
                    "thread": n,
                    "theta": t.theta.to_string(),
                    "status": t.status.to_string(),
                    "steps": t.run.steps(),
                    "constants": consts,
                    "local": t.is_local(),
                }));
                if trace_file.is_some() {
                    let _ = writeln!(dump, "# thread {} {}", n, t.status);
                    for e in &t.run.trace {
                        let _ = writeln!(dump, "{}\t{}", e.index, e.process);
                    }
                }
            }
            if let Some(path) = trace_file {
                std::fs::write(path, dump).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(true)
        }
        Command::Catalogue { name, list, declared } => {
            let entries: Vec<&catalogue::CatalogueEntry> = if name == "all" {
                catalogue::entries().iter().collect()
            } else {
                vec![catalogue::get(name).map_err(usage)?]
            };
            if *list {
                for e in entries {
                    out.human(format!("{:<14} {}", e.name, e.summary));
                    out.human(format!("{:<14} source {}", "", e.source));
                    out.human(format!("{:<14} term   {}", "", e.term));
                    out.record(json!({
                        "entry": e.name,
                        "summary": e.summary,
                        "source": e.source.to_string(),
                        "term": e.term.to_string(),
                        "contracts": e.contracts.len(),
                    }));
                }
                return Ok(true);
            }
            let budget = if *declared { None } else { Some(cli.budget) };
            let mut all_ok = true;
            for e in entries {
                out.human(format!("{} = {}", e.name, e.term));
                for c in &e.contracts {
                    let o = catalogue::replay(c, budget);
                    all_ok &= o.passed;
                    out.human(format!(
                        "  {} {}  [{}, step {}]",
                        if o.passed { "ok  " } else { "FAIL" },
                        o.description,
                        o.status,
                        o.steps.map_or("-".to_string(), |s| s.to_string())
                    ));
                    out.human(format!("       {}", c.start));
                    out.record(json!({
                        "entry": e.name,
                        "contract": o.description,
                        "passed": o.passed,
                        "step": o.steps,
                        "status": o.status.to_string(),
                        "budget": o.budget,
                        "start": c.start.to_string(),
                    }));
                }
            }
            Ok(all_ok)
        }
        Command::Encode { term } => {
            let t = parse_term(term).map_err(|e| usage(anyhow!("term: {}", e)))?;
            let n = encode(&t);
            out.human(n.to_string());
            out.record(json!({"term": t.to_string(), "code": n.to_string()}));
            Ok(true)
        }
        Command::Decode { code } => {
            let n: BigUint = code.trim().parse().map_err(|_| usage(anyhow!("not a natural number: {:?}", code)))?;
            let t = decode(&n);
            out.human(t.to_string());
            out.record(json!({"code": n.to_string(), "term": t.to_string()}));
            Ok(true)
        }
        Command::Semantics { query } => semantics(cli, query, out),
    }
}

fn universe_from_flags(cli: &Cli, inline: Option<&UniverseSpec>) -> Result<StackUniverse> {
    match (&cli.universe, inline) {
        (Some(p), _) => build_universe(&load_toml(p)?),
        (None, Some(s)) => build_universe(s),
        (None, None) => build_universe(&UniverseSpec::default()),
    }
}

fn pole_from_flags(cli: &Cli, inline: Option<&PoleSpec>) -> Result<Pole> {
    match (&cli.pole, inline) {
        (Some(p), _) => build_pole(&load_toml(p)?, cli.budget),
        (None, Some(s)) => build_pole(s, cli.budget),
        (None, None) => Ok(Pole::empty()),
    }
}

fn semantics(cli: &Cli, path: &Path, out: &mut Out) -> Result<bool> {
    let spec: QuerySpec = load_toml(path)?;
    let universe = universe_from_flags(cli, spec.universe.as_ref())?;
    let pole = pole_from_flags(cli, spec.pole.as_ref())?;
    let pool = spec
        .pool
        .iter()
        .map(|(k, v)| Ok((k.clone(), Name::parse(v).map_err(|e| usage(anyhow!("pool {}: {}", k, e)))?)))
        .collect::<Result<Vec<(String, Name)>>>()?;
    let lookup = |l: &str| pool.iter().find(|(k, _)| k == l).map(|(_, n)| n.clone());
    let f = parse_formula_with(&spec.formula, &lookup).map_err(|e| usage(anyhow!("formula: {}", e)))?;
    let fingerprint = universe.fingerprint();
    let mut q = TruthQuery::new(universe, pole).with_pool(pool.clone());
    if let Some(cap) = spec.arith_cap {
        q.arith_cap = cap;
    }
    for (p, stacks) in &spec.valuation {
        let set = stacks
            .iter()
            .map(|s| parse_stack(s).map_err(|e| usage(anyhow!("valuation {}: {}", p, e))))
            .collect::<Result<BTreeSet<Stack>>>()?;
        q = q.with_predicate(p, set);
    }
    let stacks: Vec<Stack> = match &spec.stacks {
        Some(v) => v
            .iter()
            .map(|s| parse_stack(s).map_err(|e| usage(anyhow!("stack {:?}: {}", s, e))))
            .collect::<Result<_>>()?,
        None => q.universe.stacks().to_vec(),
    };
    out.human(format!("formula: {}", f));
    out.human(format!("universe: {} ({} stacks)", fingerprint, q.universe.len()));
    out.human(format!("pole: {}", q.pole));
    let ev = Evaluator::new(&q);
    for s in &stacks {
        let v = ev.member(s, &f).map_err(usage)?;
        out.human(format!("  {} in falsity value: {}", s, v));
        out.record(json!({
            "formula": f.to_string(),
            "stack": s.to_string(),
            "verdict": v.to_string(),
            "universe": fingerprint,
        }));
    }
    if let Some(t) = &spec.term {
        let t = parse_term(t).map_err(|e| usage(anyhow!("term: {}", e)))?;
        let forces = ev.forces(&t, &f).map_err(usage)?;
        let realizes = ev.realizes(&t, &f).map_err(usage)?;
        let (verdict, witness) = match &realizes {
            Realizes::Refuted(s) => ("Refuted", Some(s.to_string())),
            Realizes::Unrefuted => ("Unrefuted", None),
        };
        out.human(format!("  {} forces: {}", t, forces));
        match &witness {
            Some(w) => out.human(format!("  {} realizes: refuted by {}", t, w)),
            None => out.human(format!("  {} realizes: unrefuted", t)),
        }
        out.record(json!({
            "formula": f.to_string(),
            "term": t.to_string(),
            "forces": forces.to_string(),
            "realizes": verdict,
            "witness": witness,
            "universe": fingerprint,
        }));
    }
    Ok(true)
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || usage(anyhow!("expected N or A..B, got {:?}", s));
    match s.split_once("..") {
        Some((a, b)) => {
            let lo = a.trim().parse().map_err(|_| bad())?;
            let hi = b.trim().parse().map_err(|_| bad())?;
            if hi < lo {
                bail!(bad());
            }
            Ok((lo, hi))
        }
        None => {
            let n: usize = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n + 1))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Out {
        format: cli.format,
        buf: String::new(),
    };
    let result = dispatch(&cli, &mut out);
    print!("{}", out.buf);
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("realize: {:#}", e);
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
