//! The `adb` command-line front end.
//!
//! Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for usage
//! and input errors, 3 when a resource bound is hit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    is_empty, member_timed, member_untimed, model_check, AnalysisError, Emptiness, Limits, Verdict,
};
use crate::automaton::Adb;
use crate::constructions::{concat, intersect_regular, lift_regular, star, union};
use crate::format::{parse_adb, parse_nfa, print_adb};
use crate::oracle::{
    brute_member_timed, differential_check, language_sample, untimed_sample, OracleError,
};
use crate::regular::Nfa;
use crate::words::{oword, parse_labels, TimedWord, UntimedWord};

#[derive(Debug, Parser)]
#[command(name = "adb", version, about = "Automata with delay blocks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse an ADB or NFA file and print a summary.
    Validate { path: PathBuf },
    /// Decide whether the ADB accepts anything.
    Empty { path: PathBuf },
    /// Decide timed or untimed membership of a word.
    Member {
        path: PathBuf,
        #[command(flatten)]
        word: WordArg,
    },
    /// Check that every untimed output is accepted by a regular specification.
    Modelcheck {
        path: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Build a new ADB from existing ones.
    Construct {
        op: Op,
        inputs: Vec<PathBuf>,
        /// Regular specification for `intersect`.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Write the result here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the outputs of all accepting runs within a bound.
    Enumerate {
        path: PathBuf,
        #[arg(long)]
        max_transitions: usize,
        #[arg(long)]
        untimed: bool,
    },
    /// Timed membership by brute-force search.
    OracleMember {
        path: PathBuf,
        #[arg(long)]
        timed: String,
    },
    /// Evaluate a label sequence to its timed output.
    Oword {
        #[arg(long, allow_hyphen_values = true)]
        labels: String,
    },
    /// Compare the membership procedure with the brute-force oracle.
    Diffcheck {
        path: PathBuf,
        #[arg(long, default_value_t = 10)]
        bound: usize,
        #[arg(long, default_value_t = 200)]
        per_word: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct WordArg {
    #[arg(long)]
    timed: Option<String>,
    #[arg(long)]
    untimed: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Op {
    Union,
    Concat,
    Star,
    Lift,
    Intersect,
}

enum Failure {
    Input(String),
    Bound(String),
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::StateLimit(_) => Failure::Bound(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BoundExceeded(_) | OracleError::Analysis(AnalysisError::StateLimit(_)) => {
                Failure::Bound(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Bound(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            3
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_adb(path: &Path) -> Result<Adb, Failure> {
    parse_adb(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_nfa(path: &Path) -> Result<Nfa, Failure> {
    parse_nfa(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn is_nfa_text(text: &str) -> bool {
    text.lines()
        .any(|l| l.split_whitespace().next() == Some("states"))
}

fn timed_word(s: &str) -> Result<TimedWord, Failure> {
    s.parse()
        .map_err(|e| Failure::Input(format!("bad timed word: {e}")))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let limits = Limits::from_env();
    match command {
        Command::Validate { path } => {
            let text = read(&path)?;
            if is_nfa_text(&text) {
                let nfa = load_nfa(&path)?;
                writeln!(
                    out,
                    "{} states, {} transitions",
                    nfa.num_states(),
                    nfa.transitions().len()
                )?;
            } else {
                let a = load_adb(&path)?;
                writeln!(
                    out,
                    "{} locations, {} transitions, max delay {}",
                    a.num_locations(),
                    a.transitions().len(),
                    a.max_delay()
                )?;
            }
            Ok(0)
        }
        Command::Empty { path } => {
            let a = load_adb(&path)?;
            match is_empty(&a) {
                Emptiness::Empty => {
                    writeln!(out, "EMPTY")?;
                    Ok(1)
                }
                Emptiness::NonEmpty(run) => {
                    writeln!(out, "NONEMPTY")?;
                    writeln!(out, "{}", run.display(&a))?;
                    Ok(0)
                }
            }
        }
        Command::Member { path, word } => {
            let a = load_adb(&path)?;
            let member = match (word.timed, word.untimed) {
                (Some(w), _) => member_timed(&a, &timed_word(&w)?)?,
                (_, Some(u)) => {
                    let u: UntimedWord = u
                        .parse()
                        .map_err(|e| Failure::Input(format!("bad word: {e}")))?;
                    member_untimed(&a, &u)?
                }
                (None, None) => unreachable!("clap requires one of the word flags"),
            };
            verdict(out, member, "MEMBER", "NOT MEMBER")
        }
        Command::Modelcheck { path, spec } => {
            let a = load_adb(&path)?;
            let spec = load_nfa(&spec)?;
            match model_check(&a, &spec)? {
                Verdict::Holds => {
                    writeln!(out, "HOLDS")?;
                    Ok(0)
                }
                Verdict::Fails {
                    counterexample,
                    witness,
                } => {
                    writeln!(out, "FAILS")?;
                    writeln!(out, "{counterexample}")?;
                    writeln!(out, "run: {}", witness.display(&a))?;
                    Ok(1)
                }
            }
        }
        Command::Construct {
            op,
            inputs,
            spec,
            out: target,
        } => {
            let result = construct(op, &inputs, spec.as_deref(), &limits)?;
            let text = print_adb(&result);
            let summary = format!(
                "{} locations, {} transitions",
                result.num_locations(),
                result.transitions().len()
            );
            match target {
                Some(p) => {
                    fs::write(&p, text)
                        .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
                    writeln!(out, "{summary}")?;
                }
                None => {
                    write!(out, "{text}")?;
                    writeln!(err, "{summary}")?;
                }
            }
            Ok(0)
        }
        Command::Enumerate {
            path,
            max_transitions,
            untimed,
        } => {
            let a = load_adb(&path)?;
            if untimed {
                for u in untimed_sample(&a, max_transitions)? {
                    writeln!(out, "{u}")?;
                }
            } else {
                for w in language_sample(&a, max_transitions)? {
                    writeln!(out, "{w}")?;
                }
            }
            Ok(0)
        }
        Command::OracleMember { path, timed } => {
            let a = load_adb(&path)?;
            let w = timed_word(&timed)?;
            if let Some(l) = w.letters().iter().find(|l| !a.has_symbol(&l.symbol)) {
                return Err(AnalysisError::UnknownSymbol(l.symbol.to_string()).into());
            }
            verdict(out, brute_member_timed(&a, &w), "MEMBER", "NOT MEMBER")
        }
        Command::Oword { labels } => {
            let labels =
                parse_labels(&labels).map_err(|e| Failure::Input(format!("bad labels: {e}")))?;
            let w = crate::words::try_oword(&labels).map_err(|e| Failure::Input(e.to_string()))?;
            debug_assert_eq!(w, oword(&labels));
            writeln!(out, "{w}")?;
            Ok(0)
        }
        Command::Diffcheck {
            path,
            bound,
            per_word,
            seed,
        } => {
            let a = load_adb(&path)?;
            let report = differential_check(&a, bound, per_word, seed)?;
            writeln!(
                out,
                "{} cases, {} disagreements",
                report.cases,
                report.disagreements.len()
            )?;
            for (w, expected) in &report.disagreements {
                writeln!(
                    out,
                    "{w}\texpected {}",
                    if *expected { "MEMBER" } else { "NOT MEMBER" }
                )?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn verdict(out: &mut dyn Write, yes: bool, pos: &str, neg: &str) -> Outcome {
    writeln!(out, "{}", if yes { pos } else { neg })?;
    Ok(if yes { 0 } else { 1 })
}

fn construct(
    op: Op,
    inputs: &[PathBuf],
    spec: Option<&Path>,
    limits: &Limits,
) -> Result<Adb, Failure> {
    let arity = match op {
        Op::Union | Op::Concat => 2,
        Op::Star | Op::Lift | Op::Intersect => 1,
    };
    if inputs.len() != arity {
        return Err(Failure::Input(format!(
            "`{op:?}` takes {arity} input file(s), got {}",
            inputs.len()
        )));
    }
    if matches!(op, Op::Intersect) != spec.is_some() {
        return Err(Failure::Input(
            "`--spec` is required by `intersect` and only by it".into(),
        ));
    }
    Ok(match op {
        Op::Union => union(&load_adb(&inputs[0])?, &load_adb(&inputs[1])?),
        Op::Concat => concat(&load_adb(&inputs[0])?, &load_adb(&inputs[1])?),
        Op::Star => star(&load_adb(&inputs[0])?),
        Op::Lift => lift_regular(&load_nfa(&inputs[0])?),
        Op::Intersect => intersect_regular(
            &load_adb(&inputs[0])?,
            &load_nfa(spec.expect("checked above"))?,
            limits,
        )?,
    })
}
