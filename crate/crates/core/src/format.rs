//! Line-oriented text formats for automata.
//!
//! ADB files:
//!
//! ```text
//! # comment
//! alphabet a b c
//! locations l0 l1 l2
//! start l0
//! accept l0
//! trans l0 l1 out a 0
//! trans l1 l2 tick
//! trans l2 l0 eps
//! ```
//!
//! NFA files use `states` instead of `locations` and `trans <src> <dst> on <sym>`
//! or `trans <src> <dst> eps`. A regular specification may also be written as
//! an ADB file whose transitions are all `out <sym> 0` or `eps`.
//!
//! Sections appear in the order shown; each header at most once. A line whose
//! first non-blank character is `#` is a comment (`#` is a legal symbol, so
//! comments never start mid-line).

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{Adb, AdbBuilder, AdbError};
use crate::regular::{Nfa, NfaBuilder, NfaError};
use crate::words::{Label, Symbol, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Adb(#[from] AdbError),
    #[error(transparent)]
    Nfa(#[from] NfaError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A diagnostic tied to a 1-based line; line 0 means end of input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "end of input: {}", self.kind)
        } else {
            write!(f, "line {}: {}", self.line, self.kind)
        }
    }
}

fn at<E: Into<ParseErrorKind>>(line: usize) -> impl Fn(E) -> ParseError {
    move |e| ParseError {
        line,
        kind: e.into(),
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

/// Meaningful lines as `(line number, tokens)`.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed.split_whitespace().collect()))
        }
    })
}

/// Enforces the fixed header order.
struct SectionOrder {
    headers: &'static [&'static str],
    last: Option<usize>,
}

impl SectionOrder {
    fn new(headers: &'static [&'static str]) -> Self {
        SectionOrder {
            headers,
            last: None,
        }
    }

    fn enter(&mut self, line: usize, keyword: &str) -> Result<(), ParseError> {
        let pos = self
            .headers
            .iter()
            .position(|h| *h == keyword)
            .ok_or_else(|| syntax(line, format!("unknown keyword `{keyword}`")))?;
        let is_trans = pos + 1 == self.headers.len();
        match self.last {
            Some(last) if pos < last || (pos == last && !is_trans) => Err(syntax(
                line,
                format!("`{keyword}` is out of order or repeated"),
            )),
            _ => {
                self.last = Some(pos);
                Ok(())
            }
        }
    }
}

const ADB_HEADERS: &[&str] = &["alphabet", "locations", "start", "accept", "trans"];
const NFA_HEADERS: &[&str] = &["alphabet", "states", "start", "accept", "trans"];

pub fn parse_adb(text: &str) -> Result<Adb, ParseError> {
    let mut b = AdbBuilder::new();
    let mut order = SectionOrder::new(ADB_HEADERS);
    let mut alphabet = Vec::new();
    for (n, toks) in lines(text) {
        let keyword = toks[0];
        order.enter(n, keyword)?;
        let args = &toks[1..];
        match keyword {
            "alphabet" => {
                for s in args {
                    let s = Symbol::new(s).map_err(|e| at::<AdbError>(n)(e.into()))?;
                    alphabet.push(s.clone());
                    b.add_symbol(s);
                }
            }
            "locations" => {
                for l in args {
                    b.add_location(l).map_err(at(n))?;
                }
            }
            "start" => {
                let [name] = args else {
                    return Err(syntax(n, "expected `start <location>`"));
                };
                let l = b.location(name).map_err(at(n))?;
                b.set_start(l);
            }
            "accept" => {
                for name in args {
                    let l = b.location(name).map_err(at(n))?;
                    b.accept(l);
                }
            }
            _ => {
                let (src, dst, label) = match args {
                    [src, dst, "out", sym, delay] => {
                        let sym = Symbol::new(sym).map_err(|e| at::<AdbError>(n)(e.into()))?;
                        if !alphabet.contains(&sym) {
                            return Err(at(n)(AdbError::UnknownSymbol(sym.to_string())));
                        }
                        let delay = delay
                            .parse::<u64>()
                            .map_err(|_| syntax(n, format!("invalid delay `{delay}`")))?;
                        (src, dst, Label::out(sym, delay))
                    }
                    [src, dst, "eps"] => (src, dst, Label::Eps),
                    [src, dst, "tick"] => (src, dst, Label::Tick),
                    _ => {
                        return Err(syntax(
                            n,
                            "expected `trans <src> <dst> out <sym> <delay>`, `trans <src> <dst> eps` or `trans <src> <dst> tick`",
                        ))
                    }
                };
                let src = b.location(src).map_err(at(n))?;
                let dst = b.location(dst).map_err(at(n))?;
                b.add_transition(src, label, dst);
            }
        }
    }
    b.build().map_err(at(0))
}

pub fn print_adb(adb: &Adb) -> String {
    let mut out = String::new();
    let alphabet: Vec<String> = adb.alphabet().iter().map(|s| s.to_string()).collect();
    let locations: Vec<&str> = adb.locations().map(|l| adb.name(l)).collect();
    let accepting: Vec<&str> = adb.accepting().map(|l| adb.name(l)).collect();
    writeln!(out, "{}", header("alphabet", &alphabet)).unwrap();
    writeln!(out, "{}", header("locations", &locations)).unwrap();
    writeln!(out, "start {}", adb.name(adb.start())).unwrap();
    writeln!(out, "{}", header("accept", &accepting)).unwrap();
    for t in adb.transitions() {
        let label = match &t.label {
            Label::Out { symbol, delay } => format!("out {symbol} {delay}"),
            Label::Eps => "eps".to_string(),
            Label::Tick => "tick".to_string(),
        };
        writeln!(out, "trans {} {} {label}", adb.name(t.src), adb.name(t.dst)).unwrap();
    }
    out
}

fn header<T: AsRef<str>>(keyword: &str, items: &[T]) -> String {
    let mut line = keyword.to_string();
    for item in items {
        line.push(' ');
        line.push_str(item.as_ref());
    }
    line
}

/// Parses a regular specification, in either the NFA format or the
/// restricted ADB format.
pub fn parse_nfa(text: &str) -> Result<Nfa, ParseError> {
    if lines(text).any(|(_, toks)| toks[0] == "locations") {
        let adb = parse_adb(text)?;
        return regular_from_adb(&adb).map_err(|msg| syntax(0, msg));
    }
    let mut order = SectionOrder::new(NFA_HEADERS);
    let mut alphabet = Vec::new();
    let mut states: Vec<String> = Vec::new();
    let mut start = None;
    let mut accepting = Vec::new();
    let mut transitions = Vec::new();
    let lookup = |states: &[String], n: usize, name: &str| {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| at(n)(NfaError::UnknownState(name.to_string())))
    };
    for (n, toks) in lines(text) {
        let keyword = toks[0];
        order.enter(n, keyword)?;
        let args = &toks[1..];
        match keyword {
            "alphabet" => {
                for s in args {
                    alphabet.push(Symbol::new(s).map_err(at(n))?);
                }
            }
            "states" => {
                for s in args {
                    if states.iter().any(|x| x == s) {
                        return Err(at(n)(NfaError::DuplicateState(s.to_string())));
                    }
                    states.push(s.to_string());
                }
            }
            "start" => {
                let [name] = args else {
                    return Err(syntax(n, "expected `start <state>`"));
                };
                start = Some(lookup(&states, n, name)?);
            }
            "accept" => {
                for name in args {
                    accepting.push(lookup(&states, n, name)?);
                }
            }
            _ => {
                let (src, dst, letter) = match args {
                    [src, dst, "on", sym] => {
                        let sym = Symbol::new(sym).map_err(at(n))?;
                        if !alphabet.contains(&sym) {
                            return Err(at(n)(NfaError::UnknownSymbol(sym.to_string())));
                        }
                        (src, dst, Some(sym))
                    }
                    [src, dst, "eps"] => (src, dst, None),
                    _ => {
                        return Err(syntax(
                            n,
                            "expected `trans <src> <dst> on <sym>` or `trans <src> <dst> eps`",
                        ))
                    }
                };
                transitions.push((lookup(&states, n, src)?, letter, lookup(&states, n, dst)?));
            }
        }
    }
    let mut b = NfaBuilder::new(alphabet);
    for s in &states {
        b.add_state(s).map_err(at(0))?;
    }
    b.set_start(start.ok_or_else(|| at(0)(NfaError::MissingStart))?);
    for a in accepting {
        b.accept(a);
    }
    for (src, l, dst) in transitions {
        b.add_transition(src, l, dst);
    }
    b.build().map_err(at(0))
}

/// Reads an ADB with only zero-delay outputs and ε-moves as an NFA.
pub fn regular_from_adb(adb: &Adb) -> Result<Nfa, String> {
    let mut b = NfaBuilder::new(adb.alphabet().iter().cloned());
    for l in adb.locations() {
        b.add_state(adb.name(l)).map_err(|e| e.to_string())?;
    }
    b.set_start(adb.start().index());
    for l in adb.accepting() {
        b.accept(l.index());
    }
    for t in adb.transitions() {
        let letter = match &t.label {
            Label::Out { symbol, delay: 0 } => Some(symbol.clone()),
            Label::Eps => None,
            other => {
                return Err(format!(
                    "transition {} -> {} on `{other}` is not allowed in a regular specification",
                    adb.name(t.src),
                    adb.name(t.dst)
                ))
            }
        };
        b.add_transition(t.src.index(), letter, t.dst.index());
    }
    b.build().map_err(|e| e.to_string())
}

pub fn print_nfa(nfa: &Nfa) -> String {
    let mut out = String::new();
    let alphabet: Vec<String> = nfa.alphabet().iter().map(|s| s.to_string()).collect();
    let states: Vec<&str> = (0..nfa.num_states()).map(|s| nfa.state_name(s)).collect();
    let accepting: Vec<&str> = nfa.accepting_states().map(|s| nfa.state_name(s)).collect();
    writeln!(out, "{}", header("alphabet", &alphabet)).unwrap();
    writeln!(out, "{}", header("states", &states)).unwrap();
    writeln!(out, "start {}", nfa.state_name(nfa.start())).unwrap();
    writeln!(out, "{}", header("accept", &accepting)).unwrap();
    for t in nfa.transitions() {
        let (src, dst) = (nfa.state_name(t.src), nfa.state_name(t.dst));
        match t.letter {
            Some(l) => writeln!(out, "trans {src} {dst} on {}", nfa.alphabet()[l]).unwrap(),
            None => writeln!(out, "trans {src} {dst} eps").unwrap(),
        }
    }
    out
}
