//! The `tree-arden` command line.
//!
//! Input files are recognized by their headers: a `states:` line makes an
//! automaton, a `vars:` line an equation system, anything else a single
//! expression (optionally preceded by an `alphabet:` line).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::eqsys::{automaton_to_expression_with, solve_with, EquationSystem, Order};
use crate::error::{Error, Position};
use crate::fta::{random_automaton_seeded, RandomFtaConfig, TreeAutomaton};
use crate::langset::FiniteTreeSet;
use crate::lexer::{content_lines, split_header};
use crate::rexpr::{closedness, denote_bounded, parse_at, parse_inferring_at, Context, RExpr};
use crate::trees::RankedAlphabet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIFFERENT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tree-arden",
    version,
    about = "Rational expressions for finite tree automata"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an automaton (prints an expression for its language) or an
    /// equation system (prints the solved system).
    Solve {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        /// Append the solver steps as `#` comment lines.
        #[arg(long)]
        trace: bool,
    },
    /// Print the trees of height at most H, one per line, in canonical order.
    Enumerate {
        path: PathBuf,
        #[command(flatten)]
        height: HeightFlag,
    },
    /// Compare two languages up to height H; exit 1 with a witness if they differ.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        height: HeightFlag,
    },
    /// Check that an expression or system is closed; exit 1 with a witness if not.
    CheckClosed { path: PathBuf },
    /// Print a random trimmed automaton.
    RandomFta {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        #[arg(long, default_value_t = 6)]
        max_transitions: usize,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
}

#[derive(Debug, Args)]
pub struct SolverFlags {
    /// Elimination order: desc, asc or min-occ.
    #[arg(long, default_value = "desc", value_parser = parse_order)]
    pub order: Order,
    /// Keep the raw factorize/contract output.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Debug, Args)]
pub struct HeightFlag {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub height: u32,
}

fn parse_order(s: &str) -> Result<Order, String> {
    s.parse()
}

/// A parsed input file.
pub enum Input {
    Automaton(TreeAutomaton),
    System(EquationSystem),
    Expression(RExpr),
}

fn has_header(text: &str, key: &str) -> bool {
    content_lines(text).any(|(pos, line)| split_header(line, pos, key).is_some())
}

fn parse_expression_file(text: &str) -> Result<RExpr, Error> {
    let mut alphabet: Option<RankedAlphabet> = None;
    let mut expr = None;
    for (pos, line) in content_lines(text) {
        if let Some((rest, at)) = split_header(line, pos, "alphabet") {
            if expr.is_some() {
                return Err(Error::syntax(
                    pos,
                    "`alphabet:` must precede the expression",
                ));
            }
            alphabet = Some(RankedAlphabet::parse_at(rest, at)?);
        } else if expr.is_some() {
            return Err(Error::syntax(pos, "expected a single expression line"));
        } else {
            expr = Some(match &alphabet {
                Some(sigma) => parse_at(line, pos, sigma, &[])?,
                None => parse_inferring_at(line, pos, &RankedAlphabet::new(), &[])?.0,
            });
        }
    }
    expr.ok_or_else(|| Error::syntax(Position::default(), "no expression found"))
}

impl Input {
    pub fn parse(text: &str) -> Result<Input, Error> {
        if has_header(text, "states") {
            TreeAutomaton::parse(text).map(Input::Automaton)
        } else if has_header(text, "vars") {
            EquationSystem::parse(text).map(Input::System)
        } else {
            parse_expression_file(text).map(Input::Expression)
        }
    }
}

/// Failure of a command, already rendered for the user.
struct Failure {
    code: i32,
    message: String,
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn located(path: &Path, err: &Error) -> String {
    match err.position() {
        Some(_) => format!("{}:{err}", path.display()),
        None => format!("{}: {err}", path.display()),
    }
}

fn load(path: &Path) -> Result<Input, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
    Input::parse(&text).map_err(|e| input_failure(located(path, &e)))
}

fn language(path: &Path, h: u32) -> Result<FiniteTreeSet, Failure> {
    match load(path)? {
        Input::Automaton(a) => Ok(a.enumerate_accepted(h)),
        Input::Expression(e) => {
            denote_bounded(&e, &Context::new(), h).map_err(|err| input_failure(located(path, &err)))
        }
        Input::System(_) => Err(input_failure(format!(
            "{}: expected an automaton or an expression, found an equation system",
            path.display()
        ))),
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure {
        code: EXIT_INPUT,
        message: e.to_string(),
    };
    match command {
        Command::Solve {
            path,
            solver,
            trace,
        } => {
            let normalize = !solver.no_normalize;
            let solve_failure = |e: Error| Failure {
                code: EXIT_DIFFERENT,
                message: located(path, &e),
            };
            let (text, steps) = match load(path)? {
                Input::Automaton(a) => {
                    let (expr, sol) = automaton_to_expression_with(&a, solver.order, normalize)
                        .map_err(solve_failure)?;
                    (format!("{expr}\n"), sol.trace.lines(sol.system.variables()))
                }
                Input::System(x) => {
                    let sol = solve_with(&x, solver.order, normalize).map_err(solve_failure)?;
                    (sol.system.to_string(), sol.trace.lines(x.variables()))
                }
                Input::Expression(_) => {
                    return Err(input_failure(format!(
                        "{}: expected an automaton or an equation system",
                        path.display()
                    )))
                }
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            if *trace {
                for line in steps {
                    writeln!(out, "# {line}").map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate { path, height } => {
            for t in language(path, height.height)?.iter() {
                writeln!(out, "{t}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Equiv {
            left,
            right,
            height,
        } => {
            let l = language(left, height.height)?;
            let r = language(right, height.height)?;
            match l.first_difference(&r) {
                None => {
                    writeln!(out, "equivalent up to height {}", height.height).map_err(io)?;
                    Ok(EXIT_OK)
                }
                Some(t) => {
                    let side = if l.contains(&t) { left } else { right };
                    writeln!(out, "different: witness {t} is only in {}", side.display())
                        .map_err(io)?;
                    Ok(EXIT_DIFFERENT)
                }
            }
        }
        Command::CheckClosed { path } => {
            let report = match load(path)? {
                Input::Expression(e) => closedness(&e),
                Input::System(x) => x.closedness(),
                Input::Automaton(a) => a.to_equation_system().closedness(),
            };
            let list = |s: &std::collections::BTreeSet<crate::trees::Symbol>| {
                s.iter().map(|c| format!(" {c}")).collect::<String>()
            };
            match &report.witness {
                None => {
                    writeln!(out, "closed").map_err(io)?;
                    writeln!(out, "bounded:{}", list(&report.bounded_symbols)).map_err(io)?;
                    writeln!(out, "free:{}", list(&report.free_symbols)).map_err(io)?;
                    Ok(EXIT_OK)
                }
                Some(w) => {
                    writeln!(out, "not closed: {w}").map_err(io)?;
                    Ok(EXIT_DIFFERENT)
                }
            }
        }
        Command::RandomFta {
            seed,
            max_states,
            max_transitions,
            max_arity,
        } => {
            let config = RandomFtaConfig {
                max_states: *max_states,
                max_transitions: *max_transitions,
                max_arity: *max_arity,
            };
            write!(out, "{}", random_automaton_seeded(*seed, &config)).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line `args` (program name first), writing the report
/// to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}
