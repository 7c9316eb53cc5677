//! Automata with delay blocks: the data model, validation, runs and the
//! regular view over delay-stamped letters.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::regular::{Nfa, NfaBuilder};
use crate::words::{oword, Label, Symbol, TimedWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdbError {
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("duplicate location `{0}`")]
    DuplicateLocation(String),
    #[error("invalid location name `{0}`")]
    InvalidLocationName(String),
    #[error("no start location")]
    MissingStart,
    #[error("`{0}` is reserved and cannot be an output symbol")]
    ReservedSymbol(String),
    #[error("invalid symbol `{0}`")]
    InvalidSymbol(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("run step {0} is not a transition of the automaton")]
    InvalidStep(usize),
    #[error(transparent)]
    Word(WordError),
}

impl From<WordError> for AdbError {
    fn from(e: WordError) -> Self {
        match e {
            WordError::ReservedSymbol(s) => AdbError::ReservedSymbol(s),
            WordError::InvalidSymbol(s) => AdbError::InvalidSymbol(s),
            other => AdbError::Word(other),
        }
    }
}

/// Index of a location within its automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loc(pub usize);

impl Loc {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub src: Loc,
    pub label: Label,
    pub dst: Loc,
}

/// Name-level label, before symbols are checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawLabel {
    Out(String, u64),
    Eps,
    Tick,
}

/// Name-level automaton definition, as read from a file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawAdb {
    pub alphabet: Vec<String>,
    pub locations: Vec<String>,
    pub start: Option<String>,
    pub accepting: Vec<String>,
    pub transitions: Vec<(String, RawLabel, String)>,
}

/// A validated automaton with delay blocks.
///
/// The set of delay blocks is implicit: it is the set of delays on `Out`
/// transitions. Transitions are kept in insertion order with duplicates
/// removed, and indexed by source location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adb {
    names: Vec<String>,
    alphabet: Vec<Symbol>,
    start: Loc,
    accepting: Vec<bool>,
    transitions: Vec<Transition>,
    outgoing: Vec<Vec<usize>>,
    max_delay: u64,
}

impl Adb {
    pub fn num_locations(&self) -> usize {
        self.names.len()
    }

    pub fn locations(&self) -> impl Iterator<Item = Loc> {
        (0..self.names.len()).map(Loc)
    }

    pub fn name(&self, loc: Loc) -> &str {
        &self.names[loc.0]
    }

    pub fn loc(&self, name: &str) -> Option<Loc> {
        self.names.iter().position(|n| n == name).map(Loc)
    }

    /// Sorted, duplicate-free.
    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn has_symbol(&self, s: &Symbol) -> bool {
        self.alphabet.binary_search(s).is_ok()
    }

    pub fn start(&self) -> Loc {
        self.start
    }

    pub fn is_accepting(&self, loc: Loc) -> bool {
        self.accepting[loc.0]
    }

    pub fn accepting(&self) -> impl Iterator<Item = Loc> + '_ {
        self.locations().filter(|&l| self.accepting[l.0])
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, loc: Loc) -> impl Iterator<Item = &Transition> + '_ {
        self.outgoing[loc.0].iter().map(|&i| &self.transitions[i])
    }

    /// Largest delay over all `Out` transitions, reachable or not; 0 when
    /// there are none.
    pub fn max_delay(&self) -> u64 {
        self.max_delay
    }

    /// Sorted targets of `loc` on exactly `label`.
    pub fn successors(&self, loc: Loc, label: &Label) -> Vec<Loc> {
        let mut out: Vec<Loc> = self
            .outgoing(loc)
            .filter(|t| &t.label == label)
            .map(|t| t.dst)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn check_run(&self, run: &Run) -> Result<(), AdbError> {
        if run.start.0 >= self.num_locations() {
            return Err(AdbError::InvalidStep(0));
        }
        let mut at = run.start;
        for (i, (label, dst)) in run.steps.iter().enumerate() {
            let ok = dst.0 < self.num_locations()
                && self
                    .outgoing(at)
                    .any(|t| &t.label == label && t.dst == *dst);
            if !ok {
                return Err(AdbError::InvalidStep(i));
            }
            at = *dst;
        }
        Ok(())
    }

    pub fn is_accepting_run(&self, run: &Run) -> Result<bool, AdbError> {
        self.check_run(run)?;
        Ok(run.start == self.start && self.is_accepting(run.last()))
    }

    pub fn run_output(&self, run: &Run) -> Result<TimedWord, AdbError> {
        self.check_run(run)?;
        Ok(oword(&run.labels()))
    }

    /// The automaton read as a classical NFA over `(symbol, delay)` letters
    /// plus `tick`.
    pub fn reg_view(&self) -> Nfa<RegLetter> {
        let mut alphabet = vec![RegLetter::Tick];
        for s in &self.alphabet {
            for t in 0..=self.max_delay {
                alphabet.push(RegLetter::Stamped(s.clone(), t));
            }
        }
        let mut b = NfaBuilder::new(alphabet);
        for n in &self.names {
            b.add_state(n).expect("validated names");
        }
        b.set_start(self.start.0);
        for l in self.accepting() {
            b.accept(l.0);
        }
        for t in &self.transitions {
            b.add_transition(t.src.0, RegLetter::from_label(&t.label), t.dst.0);
        }
        b.build().expect("derived from a valid automaton")
    }

    /// Name-level copy of this automaton.
    pub fn to_raw(&self) -> RawAdb {
        RawAdb {
            alphabet: self.alphabet.iter().map(|s| s.to_string()).collect(),
            locations: self.names.clone(),
            start: Some(self.name(self.start).to_string()),
            accepting: self.accepting().map(|l| self.name(l).to_string()).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| {
                    let label = match &t.label {
                        Label::Out { symbol, delay } => RawLabel::Out(symbol.to_string(), *delay),
                        Label::Eps => RawLabel::Eps,
                        Label::Tick => RawLabel::Tick,
                    };
                    (
                        self.name(t.src).to_string(),
                        label,
                        self.name(t.dst).to_string(),
                    )
                })
                .collect(),
        }
    }
}

/// Letters of the regular view.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegLetter {
    Tick,
    Stamped(Symbol, u64),
}

impl RegLetter {
    /// `None` for `Eps`.
    pub fn from_label(label: &Label) -> Option<RegLetter> {
        match label {
            Label::Out { symbol, delay } => Some(RegLetter::Stamped(symbol.clone(), *delay)),
            Label::Tick => Some(RegLetter::Tick),
            Label::Eps => None,
        }
    }

    pub fn to_label(&self) -> Label {
        match self {
            RegLetter::Tick => Label::Tick,
            RegLetter::Stamped(s, d) => Label::out(s.clone(), *d),
        }
    }
}

impl fmt::Display for RegLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegLetter::Tick => f.write_str("tick"),
            RegLetter::Stamped(s, d) => write!(f, "{s}/{d}"),
        }
    }
}

/// Incremental construction of an [`Adb`]; `build` checks every invariant.
#[derive(Debug, Clone, Default)]
pub struct AdbBuilder {
    alphabet: BTreeSet<Symbol>,
    names: Vec<String>,
    index: HashMap<String, usize>,
    start: Option<Loc>,
    accepting: BTreeSet<Loc>,
    transitions: Vec<Transition>,
}

impl AdbBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_symbol(&mut self, symbol: Symbol) {
        self.alphabet.insert(symbol);
    }

    pub fn add_location(&mut self, name: &str) -> Result<Loc, AdbError> {
        if name.is_empty() || name.starts_with('#') || name.chars().any(char::is_whitespace) {
            return Err(AdbError::InvalidLocationName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(AdbError::DuplicateLocation(name.to_string()));
        }
        let loc = Loc(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), loc.0);
        Ok(loc)
    }

    /// Adds a location named `base`, primed until the name is unused.
    pub fn fresh_location(&mut self, base: &str) -> Loc {
        let mut name = base.to_string();
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        self.add_location(&name).expect("fresh names are valid")
    }

    pub fn location(&self, name: &str) -> Result<Loc, AdbError> {
        self.index
            .get(name)
            .map(|&i| Loc(i))
            .ok_or_else(|| AdbError::UnknownLocation(name.to_string()))
    }

    pub fn set_start(&mut self, loc: Loc) {
        self.start = Some(loc);
    }

    pub fn accept(&mut self, loc: Loc) {
        self.accepting.insert(loc);
    }

    pub fn add_transition(&mut self, src: Loc, label: Label, dst: Loc) {
        self.transitions.push(Transition { src, label, dst });
    }

    pub fn build(self) -> Result<Adb, AdbError> {
        let n = self.names.len();
        let start = self.start.ok_or(AdbError::MissingStart)?;
        let in_range = |l: Loc| -> Result<(), AdbError> {
            if l.0 < n {
                Ok(())
            } else {
                Err(AdbError::UnknownLocation(format!("#{}", l.0)))
            }
        };
        in_range(start)?;
        for &l in &self.accepting {
            in_range(l)?;
        }
        let mut seen = HashSet::new();
        let mut transitions = Vec::with_capacity(self.transitions.len());
        let mut max_delay = 0;
        for t in self.transitions {
            in_range(t.src)?;
            in_range(t.dst)?;
            if let Label::Out { symbol, delay } = &t.label {
                if !self.alphabet.contains(symbol) {
                    return Err(AdbError::UnknownSymbol(symbol.to_string()));
                }
                max_delay = max_delay.max(*delay);
            }
            if seen.insert(t.clone()) {
                transitions.push(t);
            }
        }
        let mut outgoing = vec![Vec::new(); n];
        for (i, t) in transitions.iter().enumerate() {
            outgoing[t.src.0].push(i);
        }
        let mut accepting = vec![false; n];
        for l in self.accepting {
            accepting[l.0] = true;
        }
        Ok(Adb {
            names: self.names,
            alphabet: self.alphabet.into_iter().collect(),
            start,
            accepting,
            transitions,
            outgoing,
            max_delay,
        })
    }
}

/// Checks a name-level definition and builds the automaton.
pub fn validate_adb(raw: &RawAdb) -> Result<Adb, AdbError> {
    let mut b = AdbBuilder::new();
    for s in &raw.alphabet {
        b.add_symbol(Symbol::new(s)?);
    }
    for l in &raw.locations {
        b.add_location(l)?;
    }
    let start = raw.start.as_deref().ok_or(AdbError::MissingStart)?;
    let start = b.location(start)?;
    b.set_start(start);
    for a in &raw.accepting {
        let a = b.location(a)?;
        b.accept(a);
    }
    for (src, label, dst) in &raw.transitions {
        let src = b.location(src)?;
        let dst = b.location(dst)?;
        let label = match label {
            RawLabel::Out(s, d) => Label::out(Symbol::new(s)?, *d),
            RawLabel::Eps => Label::Eps,
            RawLabel::Tick => Label::Tick,
        };
        b.add_transition(src, label, dst);
    }
    b.build()
}

/// A location sequence `l0 -α0-> l1 -α1-> … ln`. The empty run is just `l0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    start: Loc,
    steps: Vec<(Label, Loc)>,
}

impl Run {
    pub fn new(start: Loc) -> Self {
        Run {
            start,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(start: Loc, steps: Vec<(Label, Loc)>) -> Self {
        Run { start, steps }
    }

    pub fn push(&mut self, label: Label, dst: Loc) {
        self.steps.push((label, dst));
    }

    pub fn start(&self) -> Loc {
        self.start
    }

    pub fn steps(&self) -> &[(Label, Loc)] {
        &self.steps
    }

    /// Number of transitions.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> Loc {
        self.steps.last().map_or(self.start, |s| s.1)
    }

    /// Location before transition `i` (`i == len()` gives the last one).
    pub fn location_at(&self, i: usize) -> Loc {
        if i == 0 {
            self.start
        } else {
            self.steps[i - 1].1
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        self.steps.iter().map(|s| s.0.clone()).collect()
    }

    pub fn display<'a>(&'a self, adb: &'a Adb) -> RunDisplay<'a> {
        RunDisplay { run: self, adb }
    }
}

pub struct RunDisplay<'a> {
    run: &'a Run,
    adb: &'a Adb,
}

impl fmt::Display for RunDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.adb.name(self.run.start))?;
        for (label, dst) in &self.run.steps {
            write!(f, " -{label}-> {}", self.adb.name(*dst))?;
        }
        Ok(())
    }
}
