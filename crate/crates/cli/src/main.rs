//! `freezeml`: infer FreezeML types from the command line.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use freezeml::constraint::dump_constraint;
use freezeml::gen::{minimize, random_term, rng_from_seed, TermShape};
use freezeml::oracle::{check_typing, ground};
use freezeml::prelude::{bind_literals, default_prelude, parse_prelude};
use freezeml::solver::{initial_constraint, run, RunConfig, SolveError, SolverState};
use freezeml::surface::{print_inferred, print_term, residual_names, ParseError, Session};
use freezeml::syntax::{NameSupply, Restriction, Term, TermContext, TermVar, Type, TypeContext};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "freezeml", version, about = "Constraint-based type inference for FreezeML")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer the type of an expression.
    Infer(InferArgs),
    /// Run the randomized invariant checks.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct InferArgs {
    /// Source file: `val` declarations followed by an expression.
    file: Option<PathBuf>,
    /// Expression to check instead of a file.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
    /// Prelude of `val NAME : TYPE` lines; defaults to the built-in one.
    #[arg(long)]
    prelude: Option<PathBuf>,
    /// Print every solver step.
    #[arg(long)]
    trace: bool,
    /// Print the generated constraint before solving.
    #[arg(long)]
    constraint: bool,
    /// Emit a single JSON document.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    count: usize,
}

const EXIT_OK: u8 = 0;
const EXIT_TYPE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Serialize, Default)]
struct Report {
    status: &'static str,
    #[serde(rename = "type")]
    ty: Option<String>,
    residuals: Vec<Residual>,
    error: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constraint: Option<String>,
    trace: Option<Vec<String>>,
}

#[derive(Serialize)]
struct Residual {
    name: String,
    restriction: &'static str,
}

#[derive(Serialize)]
struct ErrorReport {
    message: String,
    line: Option<usize>,
    column: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Infer(args) => cmd_infer(&args),
        Command::Selftest(args) => cmd_selftest(&args),
    };
    ExitCode::from(code)
}

fn parse_failure(args: &InferArgs, message: String, line: Option<usize>, column: Option<usize>) -> u8 {
    let report = Report {
        status: "parse-error",
        error: Some(ErrorReport { message: message.clone(), line, column }),
        ..Report::default()
    };
    if args.json {
        emit_json(&report);
    }
    eprintln!("parse error: {message}");
    EXIT_PARSE
}

fn from_parse_error(args: &InferArgs, origin: &str, e: &ParseError) -> u8 {
    let mut message = format!("{origin}: {e}");
    if !e.expected.is_empty() {
        message.push_str(&format!(" (expected {})", e.expected.join(", ")));
    }
    parse_failure(args, message, Some(e.span.line), Some(e.span.column))
}

/// Writes a line to stdout, ignoring a closed pipe.
fn say(text: &str) {
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn emit_json(report: &Report) {
    say(&serde_json::to_string_pretty(report).expect("reports serialize"));
}

/// The prelude and the term to check.
fn load(args: &InferArgs, sess: &mut Session) -> Result<(TermContext, Term), u8> {
    let mut gamma = match &args.prelude {
        Some(path) => {
            let src = fs::read_to_string(path)
                .map_err(|e| parse_failure(args, format!("cannot read {}: {e}", path.display()), None, None))?;
            parse_prelude(sess, &src).map_err(|e| from_parse_error(args, &path.display().to_string(), &e))?
        }
        None => default_prelude(sess),
    };
    let m = match (&args.expr, &args.file) {
        (Some(src), _) => sess.parse_term(src).map_err(|e| from_parse_error(args, "expression", &e))?,
        (None, Some(path)) => {
            let src = fs::read_to_string(path)
                .map_err(|e| parse_failure(args, format!("cannot read {}: {e}", path.display()), None, None))?;
            let origin = path.display().to_string();
            let program = sess.parse_program(&src).map_err(|e| from_parse_error(args, &origin, &e))?;
            for decl in program.decls {
                if let Some(a) = decl.ty.ftv_ordered().first() {
                    let msg = format!("{origin}: the type of `{}` mentions the unbound type variable `{}`", decl.name, a.name);
                    return Err(parse_failure(args, msg, Some(decl.span.line), Some(decl.span.column)));
                }
                gamma.insert(decl.name, decl.ty);
            }
            match program.body {
                Some(m) => m,
                None => return Err(parse_failure(args, format!("{origin}: no expression to check"), None, None)),
            }
        }
        (None, None) => return Err(parse_failure(args, "no input: give a FILE or -e EXPR".into(), None, None)),
    };
    Ok((bind_literals(&m, &gamma), m))
}

fn cmd_infer(args: &InferArgs) -> u8 {
    let mut sess = Session::new();
    let (gamma, m) = match load(args, &mut sess) {
        Ok(x) => x,
        Err(code) => return code,
    };

    let mut report = Report { status: "ok", ..Report::default() };
    let mut supply = NameSupply::new();
    let (c, a) = match initial_constraint(&TypeContext::new(), &gamma, &m, &mut supply) {
        Ok(x) => x,
        Err(e) => return type_failure(args, report, e.to_string(), e.span),
    };
    if args.constraint {
        let dump = dump_constraint(&c);
        if args.json {
            report.constraint = Some(dump);
        } else {
            say(&format!("constraint: {dump}"));
        }
    }

    let config = RunConfig { check_invariants: true, record_trace: args.trace, ..RunConfig::default() };
    let out = run(SolverState::initial(c), &mut supply, &config);
    if args.trace {
        let lines: Vec<String> = out.trace.iter().map(ToString::to_string).collect();
        if !args.json {
            for l in &lines {
                say(l);
            }
        }
        report.trace = Some(lines);
    }

    match out.outcome {
        Ok(state) => {
            let t = state.subst.image(&a);
            let residual = t
                .ftv_ordered()
                .into_iter()
                .filter_map(|v| state.theta_env.get(&v).map(|r| (v, r)))
                .collect();
            report.residuals = residual_names(&t, &residual)
                .into_iter()
                .map(|(_, name, r)| Residual { name, restriction: restriction_word(r) })
                .collect();
            let shown = print_inferred(&t, &residual);
            if args.json {
                report.ty = Some(shown);
                emit_json(&report);
            } else {
                say(&shown);
            }
            EXIT_OK
        }
        Err(SolveError::Type(e)) => type_failure(args, report, e.to_string(), e.span),
        Err(SolveError::Internal(e)) => {
            report.status = "internal-error";
            let message = format!("internal error at step {}: {:?}: {}", e.step, e.kind, e.message);
            report.error = Some(ErrorReport { message: message.clone(), line: None, column: None });
            if args.json {
                emit_json(&report);
            }
            eprintln!("{message}");
            EXIT_INTERNAL
        }
    }
}

fn restriction_word(r: Restriction) -> &'static str {
    match r {
        Restriction::Mono => "monomorphic",
        Restriction::Poly => "polymorphic",
    }
}

fn type_failure(args: &InferArgs, mut report: Report, message: String, span: Option<freezeml::surface::SourceSpan>) -> u8 {
    report.status = "type-error";
    report.error = Some(ErrorReport { message: message.clone(), line: span.map(|s| s.line), column: span.map(|s| s.column) });
    if args.json {
        emit_json(&report);
    }
    eprintln!("{message}");
    EXIT_TYPE
}

#[derive(Default)]
struct Failures {
    determinism: usize,
    measure: usize,
    wf: usize,
    soundness: usize,
}

impl Failures {
    fn total(&self) -> usize {
        self.determinism + self.measure + self.wf + self.soundness
    }
}

/// The first invariant `m` violates, if any.
fn violation(gamma: &TermContext, m: &Term) -> Option<(&'static str, String)> {
    let gamma = bind_literals(m, gamma);
    let checked = RunConfig { check_invariants: true, record_trace: true, ..RunConfig::default() };
    let mut supply = NameSupply::new();
    let (c, a) = initial_constraint(&TypeContext::new(), &gamma, m, &mut supply).ok()?;
    let out = run(SolverState::initial(c.clone()), &mut supply, &checked);
    let state = match out.outcome {
        Ok(state) => state,
        Err(SolveError::Type(_)) => return None,
        Err(SolveError::Internal(e)) => {
            use freezeml::solver::InvariantKind::*;
            let suite = match e.kind {
                Determinism | RankPartition => "determinism",
                Measure | StepBudget => "measure",
                WellFormedness => "wf",
            };
            return Some((suite, format!("step {}: {}", e.step, e.message)));
        }
    };

    let plain = RunConfig { record_trace: true, ..RunConfig::default() };
    let again = run(SolverState::initial(c), &mut NameSupply::above(supply.peek()), &plain);
    let rules = |t: &[freezeml::solver::TraceRecord]| t.iter().map(|r| r.rule).collect::<Vec<_>>();
    if rules(&again.trace) != rules(&out.trace) {
        return Some(("determinism", "a second run took a different path".into()));
    }

    let t = state.subst.image(&a);
    let residual: Vec<_> = t.ftv_ordered().into_iter().filter(|v| state.theta_env.contains(v)).collect();
    let grounded = ground(&t, residual, &Type::int());
    if !check_typing(&TypeContext::new(), &gamma, m, &grounded) {
        return Some(("soundness", format!("the checker rejects `{}`", freezeml::surface::print_type(&grounded))));
    }
    None
}

fn cmd_selftest(args: &SelftestArgs) -> u8 {
    let gamma = default_prelude(&mut Session::new());
    let globals: Vec<TermVar> = gamma.iter().map(|(x, _)| x.clone()).collect();
    let shape = TermShape { max_size: 25, globals };
    let mut rng = rng_from_seed(args.seed);
    let mut failures = Failures::default();

    for i in 0..args.count {
        let m = random_term(&mut rng, &shape, &mut NameSupply::above(gamma.max_uid()));
        let Some((suite, detail)) = violation(&gamma, &m) else {
            continue;
        };
        match suite {
            "determinism" => failures.determinism += 1,
            "measure" => failures.measure += 1,
            "wf" => failures.wf += 1,
            _ => failures.soundness += 1,
        }
        let small = minimize(&m, |n| violation(&gamma, n).is_some_and(|(s, _)| s == suite));
        say(&format!("FAIL {suite} on sample {i}: {detail}"));
        say(&format!("  term:   {}", print_term(&m)));
        say(&format!("  shrunk: {}", print_term(&small)));
    }

    say(&format!(
        "selftest seed={} count={}: determinism {} failures, measure {} failures, wf {} failures, soundness {} failures",
        args.seed, args.count, failures.determinism, failures.measure, failures.wf, failures.soundness
    ));
    if failures.total() == 0 {
        EXIT_OK
    } else {
        EXIT_TYPE
    }
}
