//! The `lams` command line: argument model, dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 parse, type or usage error, 2 property
//! failure (including a failed `diff`, `equiv` or `test`), 3 fuel
//! exhaustion.

pub mod render;

use clap::{Args, Parser, Subcommand};
use lams_core::ast::{Dist, Term};
use lams_core::rewrite::{RewriteError, Rewriter};
use lams_core::semantics::{denote, denote_dist, sem_eq_dist, SemError};
use lams_core::syntax::{parse_closed_term, parse_program, print_term, ParseError};
use lams_core::typing::{type_of, TypeError};
use lams_harness::opequiv::contexts;
use lams_harness::{op_equiv, run_property_suite, HarnessError, Suite};
use render::{dist_json, dist_text, sem_dist_json, sem_dist_text};
use serde_json::json;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PROPERTY: i32 = 2;
pub const EXIT_FUEL: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "lams", version, about = "Type, run, trace and denote quantum lambda terms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print the minimal type.
    Check(Source),
    /// Normalize and print the outcome distribution.
    Run(Source),
    /// Print every reduction step with its rule name.
    Trace(Source),
    /// Print the denotation.
    Sem(Source),
    /// Compare the denotation of a term with that of its normal form.
    Diff(Source),
    /// Run a property suite.
    Test {
        /// soundness, subject-reduction, progress, normalization,
        /// confluence, derivation-independence or oracle
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        opts: Opts,
    },
    /// Bounded operational equivalence of two terms (inline or `.lams` files).
    Equiv {
        left: String,
        right: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Inline term.
    #[arg(short = 'e', value_name = "TERM", conflicts_with = "file")]
    pub expr: Option<String>,
    /// A `.lams` source whose `main` is used.
    pub file: Option<PathBuf>,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    #[arg(long, default_value_t = 100_000, value_parser = positive_usize)]
    pub fuel: usize,
    #[arg(long, default_value_t = 1e-9, value_parser = positive_f64)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    ParseIn { path: String, source: ParseError },
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("{0}: no `main` term")]
    NoMain(String),
    #[error("fuel exhausted after {steps} steps")]
    Fuel { partial: Dist<Term>, steps: usize },
    #[error("rewrite error: {0}")]
    Rewrite(RewriteError),
    #[error("semantic error: {0}")]
    Sem(#[from] SemError),
    #[error("{0}")]
    Harness(HarnessError),
}

impl From<RewriteError> for CliError {
    fn from(e: RewriteError) -> Self {
        match e {
            RewriteError::FuelExhausted { partial, steps } => CliError::Fuel { partial, steps },
            e => CliError::Rewrite(e),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Parse(e) => CliError::Parse(e),
            HarnessError::Type(e) => CliError::Type(e),
            HarnessError::Rewrite(e) => e.into(),
            HarnessError::Sem(e) => CliError::Sem(e),
            HarnessError::UnknownSuite(s) => CliError::Usage(format!("unknown suite `{s}`")),
            e => CliError::Harness(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Io { .. }
            | CliError::ParseIn { .. }
            | CliError::Parse(_)
            | CliError::Type(_)
            | CliError::NoMain(_) => EXIT_INPUT,
            CliError::Fuel { .. } => EXIT_FUEL,
            CliError::Rewrite(_) | CliError::Sem(_) | CliError::Harness(_) => EXIT_PROPERTY,
        }
    }
}

/// Rendered output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }
}

/// Parses `args` (program name first) and runs the command. Help and
/// version requests exit 0; malformed arguments exit 1.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_command(&cli),
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run_command(cli: &Cli) -> Outcome {
    let json = match &cli.command {
        Command::Check(s) | Command::Run(s) | Command::Trace(s) | Command::Sem(s) | Command::Diff(s) => s.opts.json,
        Command::Test { opts, .. } | Command::Equiv { opts, .. } => opts.json,
    };
    match dispatch(cli) {
        Ok(out) => out,
        Err(e) => failure(e, json),
    }
}

fn failure(e: CliError, json: bool) -> Outcome {
    let code = e.exit_code();
    let partial = match &e {
        CliError::Fuel { partial, .. } => Some(partial),
        _ => None,
    };
    if json {
        let mut v = json!({"error": e.to_string(), "exit": code});
        if let Some(d) = partial {
            v["partial"] = dist_json(d);
        }
        return Outcome { code, stdout: format!("{v:#}\n"), stderr: String::new() };
    }
    let stdout = partial.map(|d| format!("{}\n", dist_text(d))).unwrap_or_default();
    Outcome { code, stdout, stderr: format!("error: {e}\n") }
}

fn read_term(path: &Path) -> Result<Term, CliError> {
    let shown = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    let prog = parse_program(&src).map_err(|source| CliError::ParseIn { path: shown.clone(), source })?;
    prog.main.ok_or(CliError::NoMain(shown))
}

fn source_term(s: &Source) -> Result<Term, CliError> {
    match (&s.expr, &s.file) {
        (Some(e), _) => Ok(parse_closed_term(e)?),
        (None, Some(p)) => read_term(p),
        (None, None) => Err(CliError::Usage("give a term with -e or a .lams file".into())),
    }
}

/// An `equiv` operand: a `.lams` file if one exists at that path, else
/// inline term text.
fn operand(arg: &str) -> Result<Term, CliError> {
    let p = Path::new(arg);
    if arg.ends_with(".lams") && p.exists() {
        read_term(p)
    } else {
        Ok(parse_closed_term(arg)?)
    }
}

fn text(s: String) -> Outcome {
    Outcome::ok(format!("{s}\n"))
}

fn json_out(code: i32, v: serde_json::Value) -> Outcome {
    Outcome::with_code(code, format!("{v:#}\n"))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check(s) => {
            let t = source_term(s)?;
            let a = type_of(&t)?;
            Ok(if s.opts.json {
                json_out(EXIT_OK, json!({"term": print_term(&t), "type": a.to_string()}))
            } else {
                text(a.to_string())
            })
        }
        Command::Run(s) => {
            let t = source_term(s)?;
            let a = type_of(&t)?;
            let (d, steps) = Rewriter::new().run(&t, s.opts.fuel, None, |_| {})?;
            Ok(if s.opts.json {
                json_out(EXIT_OK, json!({"type": a.to_string(), "steps": steps, "distribution": dist_json(&d)}))
            } else {
                text(dist_text(&d))
            })
        }
        Command::Trace(s) => trace(s),
        Command::Sem(s) => {
            let t = source_term(s)?;
            let a = type_of(&t)?;
            let d = denote(&t, &a)?;
            Ok(if s.opts.json {
                json_out(EXIT_OK, json!({"type": a.to_string(), "denotation": sem_dist_json(&d, Some(&a))}))
            } else {
                text(sem_dist_text(&d, Some(&a)))
            })
        }
        Command::Diff(s) => diff(s),
        Command::Test { suite, trials, opts } => {
            let suite: Suite = suite.parse()?;
            let r = run_property_suite(suite, *trials, opts.seed);
            let code = if r.passed() { EXIT_OK } else { EXIT_PROPERTY };
            Ok(if opts.json {
                Outcome::with_code(code, format!("{}\n", r.to_json()))
            } else {
                Outcome::with_code(code, r.to_string())
            })
        }
        Command::Equiv { left, right, depth, opts } => {
            let (t, r) = (operand(left)?, operand(right)?);
            let (a, b) = (type_of(&t)?, type_of(&r)?);
            let (equal, observed) = if a == b {
                (op_equiv(&t, &r, *depth)?, contexts(&t, &r, *depth).len())
            } else {
                (false, 0)
            };
            let code = if equal { EXIT_OK } else { EXIT_PROPERTY };
            Ok(if opts.json {
                json_out(code, json!({"equivalent": equal, "depth": depth, "contexts": observed,
                    "left_type": a.to_string(), "right_type": b.to_string()}))
            } else if a != b {
                Outcome::with_code(code, format!("not equivalent: types {a} and {b} differ\n"))
            } else {
                let verdict = if equal { "equivalent" } else { "not equivalent" };
                Outcome::with_code(code, format!("{verdict} under {observed} contexts of depth <= {depth}\n"))
            })
        }
    }
}

fn trace(s: &Source) -> Result<Outcome, CliError> {
    let t = source_term(s)?;
    type_of(&t)?;
    let mut steps = Vec::new();
    let res = Rewriter::new().run(&t, s.opts.fuel, None, |st| steps.push(st));
    let (code, err) = match res {
        Ok(_) => (EXIT_OK, None),
        Err(e) => {
            let e = CliError::from(e);
            (e.exit_code(), Some(e.to_string()))
        }
    };
    let start = print_term(&t.canonicalize());
    if s.opts.json {
        let rows: Vec<_> = steps
            .iter()
            .map(|st| json!({"rule": st.rule.name(), "path": st.path, "result": dist_json(&st.dist)}))
            .collect();
        let mut v = json!({"start": start, "steps": rows});
        if let Some(e) = err {
            v["error"] = json!(e);
        }
        return Ok(json_out(code, v));
    }
    let mut out = format!("{:>4}  {:<14}{start}\n", 0, "");
    for (i, st) in steps.iter().enumerate() {
        let shown = dist_text(&st.dist).replace('\n', " || ");
        out.push_str(&format!("{:>4}  {:<14}{shown}\n", i + 1, st.rule.name()));
    }
    Ok(Outcome { code, stdout: out, stderr: err.map(|e| format!("error: {e}\n")).unwrap_or_default() })
}

/// `⟦t⟧` against `⟦nf(t)⟧`, naming the first step that changes the
/// denotation when they differ.
fn diff(s: &Source) -> Result<Outcome, CliError> {
    let t = source_term(s)?;
    let a = type_of(&t)?;
    let before = denote(&t, &a)?;
    let mut dists: Vec<(String, Dist<Term>)> = Vec::new();
    let (nf, _) = Rewriter::new().run(&t, s.opts.fuel, None, |st| dists.push((st.rule.name().to_string(), st.dist)))?;
    let after = denote_dist(&nf, &a)?;
    let equal = sem_eq_dist(&before, &after, &a, s.opts.tol);
    let mut first_change = None;
    if !equal {
        for (i, (rule, d)) in dists.iter().enumerate() {
            if !sem_eq_dist(&before, &denote_dist(d, &a)?, &a, s.opts.tol) {
                first_change = Some((i + 1, rule.clone()));
                break;
            }
        }
    }
    let code = if equal { EXIT_OK } else { EXIT_PROPERTY };
    if s.opts.json {
        return Ok(json_out(
            code,
            json!({
                "type": a.to_string(),
                "equal": equal,
                "term": sem_dist_json(&before, Some(&a)),
                "normal_form": dist_json(&nf),
                "normal_form_denotation": sem_dist_json(&after, Some(&a)),
                "first_change": first_change.as_ref().map(|(i, r)| json!({"step": i, "rule": r})),
            }),
        ));
    }
    let mut out = format!(
        "type: {a}\nterm:        {}\nnormal form: {}\n",
        sem_dist_text(&before, Some(&a)).replace('\n', " || "),
        sem_dist_text(&after, Some(&a)).replace('\n', " || ")
    );
    match first_change {
        None if equal => out.push_str(&format!("equal within {}\n", s.opts.tol)),
        None => out.push_str("differ\n"),
        Some((i, r)) => out.push_str(&format!("differ: step {i} ({r}) changes the denotation\n")),
    }
    Ok(Outcome::with_code(code, out))
}

