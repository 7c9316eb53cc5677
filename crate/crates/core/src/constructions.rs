//! Language constructions on ADBs: lifting regular automata, union,
//! concatenation, Kleene star and intersection with a regular language.
//!
//! Union, concatenation and star work on renamed copies (`1$…`, `2$…`) of
//! their inputs, so every output is a valid ADB. Concatenation and star pad
//! the seam with `M` ticks, `M` being the maximal delay of the left operand,
//! so that everything the left part still has pending is emitted before the
//! right part starts.

use crate::automaton::{Adb, AdbBuilder, Loc};
use crate::regular::Nfa;
use crate::words::Label;

pub use crate::analysis::intersect_regular;

/// Reads an NFA as an ADB emitting every letter with delay 0.
pub fn lift_regular(nfa: &Nfa) -> Adb {
    let mut b = AdbBuilder::new();
    for s in nfa.alphabet() {
        b.add_symbol(s.clone());
    }
    let locs: Vec<Loc> = (0..nfa.num_states())
        .map(|q| b.fresh_location(nfa.state_name(q)))
        .collect();
    b.set_start(locs[nfa.start()]);
    for q in nfa.accepting_states() {
        b.accept(locs[q]);
    }
    for t in nfa.transitions() {
        let label = match t.letter {
            Some(i) => Label::out(nfa.alphabet()[i].clone(), 0),
            None => Label::Eps,
        };
        b.add_transition(locs[t.src], label, locs[t.dst]);
    }
    b.build().expect("lifted from a valid automaton")
}

/// Copies `adb` into `b` under `prefix`; returns the new location of each
/// original one. Accepting locations are left to the caller.
fn copy_into(b: &mut AdbBuilder, adb: &Adb, prefix: &str) -> Vec<Loc> {
    for s in adb.alphabet() {
        b.add_symbol(s.clone());
    }
    let locs: Vec<Loc> = adb
        .locations()
        .map(|l| b.fresh_location(&format!("{prefix}${}", adb.name(l))))
        .collect();
    for t in adb.transitions() {
        b.add_transition(locs[t.src.0], t.label.clone(), locs[t.dst.0]);
    }
    locs
}

/// `len` ticks from `from` through fresh locations named after `base`, then
/// ε to `to`. With `land_on_target` the last tick enters `to` directly. A
/// zero-length chain is a single ε.
fn tick_chain(b: &mut AdbBuilder, from: Loc, to: Loc, len: u64, base: &str, land_on_target: bool) {
    let mut prev = from;
    for k in 1..=len {
        let next = if land_on_target && k == len {
            to
        } else {
            b.fresh_location(&format!("{base}$tick${k}"))
        };
        b.add_transition(prev, Label::Tick, next);
        prev = next;
    }
    if prev != to || len == 0 {
        b.add_transition(prev, Label::Eps, to);
    }
}

pub fn union(a1: &Adb, a2: &Adb) -> Adb {
    let mut b = AdbBuilder::new();
    let start = b.fresh_location("start");
    b.set_start(start);
    for (prefix, a) in [("1", a1), ("2", a2)] {
        let locs = copy_into(&mut b, a, prefix);
        b.add_transition(start, Label::Eps, locs[a.start().0]);
        for l in a.accepting() {
            b.accept(locs[l.0]);
        }
    }
    b.build().expect("union of valid automata")
}

pub fn concat(a1: &Adb, a2: &Adb) -> Adb {
    let mut b = AdbBuilder::new();
    let left = copy_into(&mut b, a1, "1");
    let right = copy_into(&mut b, a2, "2");
    b.set_start(left[a1.start().0]);
    for f in a1.accepting() {
        let name = format!("1${}", a1.name(f));
        tick_chain(
            &mut b,
            left[f.0],
            right[a2.start().0],
            a1.max_delay(),
            &name,
            false,
        );
    }
    for l in a2.accepting() {
        b.accept(right[l.0]);
    }
    b.build().expect("concatenation of valid automata")
}

pub fn star(a: &Adb) -> Adb {
    let mut b = AdbBuilder::new();
    let start = b.fresh_location("start");
    let locs = copy_into(&mut b, a, "1");
    b.set_start(start);
    b.accept(start);
    b.add_transition(start, Label::Eps, locs[a.start().0]);
    for f in a.accepting() {
        let name = format!("1${}", a.name(f));
        tick_chain(&mut b, locs[f.0], start, a.max_delay(), &name, true);
    }
    b.build().expect("star of a valid automaton")
}
