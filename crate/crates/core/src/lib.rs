//! Automata with delay blocks (ADBs): finite automata whose outputs surface a
//! fixed number of time units after they are generated.
//!
//! The crate covers the output semantics ([`words::oword`]), the automaton
//! model, language constructions, decision procedures for emptiness,
//! membership and regular model checking, brute-force oracles for testing,
//! and a command-line front end.

pub mod analysis;
pub mod automaton;
pub mod cli;
pub mod constructions;
pub mod format;
pub mod oracle;
pub mod regular;
pub mod words;

pub use analysis::{
    is_empty, member_timed, member_untimed, model_check, AnalysisError, Emptiness, Intersection,
    Limits, Verdict,
};
pub use automaton::{Adb, AdbBuilder, AdbError, Loc, Run};
pub use regular::{Dfa, Nfa};
pub use words::{oword, Label, Symbol, TimedWord, UntimedWord};
