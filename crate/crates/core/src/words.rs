//! Timed and untimed words, transition labels, and the `oword` evaluation
//! that turns a label sequence into the timed word it outputs.
//!
//! Text forms used throughout the crate:
//!
//! * timed word: `a@0 b@1 c@2`
//! * untimed word: `a b c`
//! * label sequence: `a/0 b/1 tick eps c/2`
//!
//! The empty string denotes the empty word in every form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Tokens that can never be used as output symbols.
pub const RESERVED: [&str; 2] = ["tick", "eps"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid symbol `{0}`")]
    InvalidSymbol(String),
    #[error("`{0}` is reserved and cannot be used as an output symbol")]
    ReservedSymbol(String),
    #[error("timestamp decreases at letter {0}")]
    DecreasingTimestamp(usize),
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("timestamp overflow")]
    Overflow,
}

/// An output symbol. Compared by name, case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: &str) -> Result<Self, WordError> {
        if RESERVED.contains(&name) {
            return Err(WordError::ReservedSymbol(name.to_string()));
        }
        let valid = !name.is_empty()
            && name
                .chars()
                .all(|c| c.is_alphanumeric() || matches!(c, '_' | '#' | '-'));
        if !valid {
            return Err(WordError::InvalidSymbol(name.to_string()));
        }
        Ok(Symbol(name.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Symbol {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Symbol::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimedLetter {
    pub symbol: Symbol,
    pub timestamp: u64,
}

impl TimedLetter {
    pub fn new(symbol: Symbol, timestamp: u64) -> Self {
        TimedLetter { symbol, timestamp }
    }
}

impl fmt::Display for TimedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.symbol, self.timestamp)
    }
}

/// A finite word of `(symbol, timestamp)` pairs with non-decreasing timestamps.
///
/// Ordered by length first, then lexicographically by letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TimedWord {
    letters: Vec<TimedLetter>,
}

impl TimedWord {
    pub fn empty() -> Self {
        TimedWord::default()
    }

    /// Checks the timestamp order. Fails with the index of the first letter
    /// whose timestamp is smaller than its predecessor's.
    pub fn new(letters: Vec<TimedLetter>) -> Result<Self, WordError> {
        if let Some(i) =
            (1..letters.len()).find(|&i| letters[i].timestamp < letters[i - 1].timestamp)
        {
            return Err(WordError::DecreasingTimestamp(i));
        }
        Ok(TimedWord { letters })
    }

    pub fn letters(&self) -> &[TimedLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest timestamp, `None` for the empty word.
    pub fn end_time(&self) -> Option<u64> {
        self.letters.last().map(|l| l.timestamp)
    }

    pub fn untime(&self) -> UntimedWord {
        UntimedWord(self.letters.iter().map(|l| l.symbol.clone()).collect())
    }

    /// Advances every timestamp by `delta`. Panics on overflow.
    pub fn shift(&self, delta: u64) -> TimedWord {
        let letters = self
            .letters
            .iter()
            .map(|l| {
                let timestamp = l.timestamp.checked_add(delta).expect("timestamp overflow");
                TimedLetter::new(l.symbol.clone(), timestamp)
            })
            .collect();
        TimedWord { letters }
    }

    pub fn into_letters(self) -> Vec<TimedLetter> {
        self.letters
    }
}

impl Ord for TimedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for TimedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.letters)
    }
}

impl FromStr for TimedWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .split_whitespace()
            .map(|tok| {
                let (sym, t) = tok
                    .split_once('@')
                    .ok_or_else(|| WordError::MalformedToken(tok.to_string()))?;
                let t = t
                    .parse::<u64>()
                    .map_err(|_| WordError::MalformedToken(tok.to_string()))?;
                Ok(TimedLetter::new(Symbol::new(sym)?, t))
            })
            .collect::<Result<Vec<_>, WordError>>()?;
        TimedWord::new(letters)
    }
}

/// Builds a timed word from raw `(name, timestamp)` pairs, checking every
/// symbol and the timestamp order.
pub fn validate_timed_word(raw: &[(&str, u64)]) -> Result<TimedWord, WordError> {
    let letters = raw
        .iter()
        .map(|&(name, t)| Ok(TimedLetter::new(Symbol::new(name)?, t)))
        .collect::<Result<Vec<_>, WordError>>()?;
    TimedWord::new(letters)
}

/// A finite sequence of symbols. Ordered by length, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UntimedWord(pub Vec<Symbol>);

impl UntimedWord {
    pub fn empty() -> Self {
        UntimedWord::default()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &UntimedWord) -> UntimedWord {
        UntimedWord(self.0.iter().chain(&other.0).cloned().collect())
    }
}

impl Ord for UntimedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for UntimedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for UntimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.0)
    }
}

impl FromStr for UntimedWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(Symbol::new)
            .collect::<Result<Vec<_>, _>>()
            .map(UntimedWord)
    }
}

/// `u` with every symbol stamped at time `t`.
pub fn kappa(u: &UntimedWord, t: u64) -> TimedWord {
    TimedWord {
        letters: u.0.iter().map(|s| TimedLetter::new(s.clone(), t)).collect(),
    }
}

/// `w` repeated `i` times.
pub fn rep<T: Clone>(w: &[T], i: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(w.len() * i);
    for _ in 0..i {
        out.extend_from_slice(w);
    }
    out
}

/// A transition label: a delayed output, a silent move, or a time step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Out { symbol: Symbol, delay: u64 },
    Eps,
    Tick,
}

impl Label {
    pub fn out(symbol: Symbol, delay: u64) -> Self {
        Label::Out { symbol, delay }
    }

    pub fn is_out(&self) -> bool {
        matches!(self, Label::Out { .. })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Out { symbol, delay } => write!(f, "{symbol}/{delay}"),
            Label::Eps => f.write_str("eps"),
            Label::Tick => f.write_str("tick"),
        }
    }
}

impl FromStr for Label {
    type Err = WordError;

    fn from_str(tok: &str) -> Result<Self, Self::Err> {
        match tok {
            "tick" => Ok(Label::Tick),
            "eps" => Ok(Label::Eps),
            _ => {
                let (sym, d) = tok
                    .split_once('/')
                    .ok_or_else(|| WordError::MalformedToken(tok.to_string()))?;
                let delay = d
                    .parse::<u64>()
                    .map_err(|_| WordError::MalformedToken(tok.to_string()))?;
                Ok(Label::out(Symbol::new(sym)?, delay))
            }
        }
    }
}

pub fn parse_labels(s: &str) -> Result<Vec<Label>, WordError> {
    s.split_whitespace().map(str::parse).collect()
}

pub fn format_labels(labels: &[Label]) -> String {
    labels
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Stamped letters in generation order, before sorting.
fn stamp(labels: &[Label]) -> Result<Vec<TimedLetter>, WordError> {
    let mut now: u64 = 0;
    let mut letters = Vec::new();
    for label in labels {
        match label {
            Label::Eps => {}
            Label::Tick => now = now.checked_add(1).ok_or(WordError::Overflow)?,
            Label::Out { symbol, delay } => {
                let t = now.checked_add(*delay).ok_or(WordError::Overflow)?;
                letters.push(TimedLetter::new(symbol.clone(), t));
            }
        }
    }
    Ok(letters)
}

/// Timed output of a label sequence; fails only on timestamp overflow.
pub fn try_oword(labels: &[Label]) -> Result<TimedWord, WordError> {
    let mut letters = stamp(labels)?;
    // stable: equal timestamps keep generation order
    letters.sort_by_key(|l| l.timestamp);
    Ok(TimedWord { letters })
}

/// Timed output of a label sequence: each output is stamped with the number
/// of preceding ticks plus its delay, then the letters are stably sorted by
/// timestamp. Panics on timestamp overflow.
pub fn oword(labels: &[Label]) -> TimedWord {
    try_oword(labels).expect("timestamp overflow")
}

fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}
