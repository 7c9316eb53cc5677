//! Brute-force reference procedures used to test the analyses: bounded run
//! enumeration, a direct membership search, run pumping and seeded mutation
//! testing.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analysis::{member_timed, AnalysisError};
use crate::automaton::{Adb, AdbError, Loc, Run};
use crate::words::{oword, rep, Label, TimedLetter, TimedWord, UntimedWord};

/// Default cap on the number of run prefixes explored by the enumeration.
pub const DEFAULT_RUN_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("more than {0} runs within the bound")]
    BoundExceeded(usize),
    #[error("window spans {len} transitions, at least {needed} needed")]
    WindowTooShort { len: usize, needed: usize },
    #[error("window {start}..{end} is outside a run of length {len}")]
    InvalidWindow {
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("run is not accepting")]
    NotAccepting,
    #[error(transparent)]
    Run(#[from] AdbError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// All accepting runs with at most `max_transitions` transitions, shortest
/// first.
pub fn enumerate_accepting_runs(
    adb: &Adb,
    max_transitions: usize,
) -> Result<Vec<Run>, OracleError> {
    enumerate_accepting_runs_capped(adb, max_transitions, DEFAULT_RUN_CAP)
}

/// As [`enumerate_accepting_runs`], failing once more than `cap` run
/// prefixes have been explored.
pub fn enumerate_accepting_runs_capped(
    adb: &Adb,
    max_transitions: usize,
    cap: usize,
) -> Result<Vec<Run>, OracleError> {
    let mut found = Vec::new();
    let mut stack = vec![Run::new(adb.start())];
    let mut explored = 0usize;
    while let Some(run) = stack.pop() {
        explored += 1;
        if explored > cap {
            return Err(OracleError::BoundExceeded(cap));
        }
        if adb.is_accepting(run.last()) {
            found.push(run.clone());
        }
        if run.len() == max_transitions {
            continue;
        }
        for t in adb
            .outgoing(run.last())
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
        {
            let mut next = run.clone();
            next.push(t.label.clone(), t.dst);
            stack.push(next);
        }
    }
    found.sort_by_key(Run::len);
    Ok(found)
}

/// Outputs of all accepting runs within the bound.
pub fn language_sample(
    adb: &Adb,
    max_transitions: usize,
) -> Result<BTreeSet<TimedWord>, OracleError> {
    Ok(enumerate_accepting_runs(adb, max_transitions)?
        .iter()
        .map(|r| oword(&r.labels()))
        .collect())
}

pub fn untimed_sample(
    adb: &Adb,
    max_transitions: usize,
) -> Result<BTreeSet<UntimedWord>, OracleError> {
    Ok(language_sample(adb, max_transitions)?
        .iter()
        .map(TimedWord::untime)
        .collect())
}

/// Membership by direct search over `(location, ticks so far, letters
/// consumed per timestamp)`. An output at time `τ` must be the next
/// unconsumed letter stamped `τ`; the word is accepted once every letter is
/// consumed in an accepting location. Letters at different timestamps never
/// constrain each other, which is what the stable sort of the output
/// semantics amounts to.
pub fn brute_member_timed(adb: &Adb, word: &TimedWord) -> bool {
    let letters = word.letters();
    let Some(t_end) = word.end_time() else {
        return empty_word_member(adb);
    };
    let Ok(slots) = usize::try_from(t_end + 1) else {
        return false;
    };
    let mut by_time: Vec<Vec<&TimedLetter>> = vec![Vec::new(); slots];
    for l in letters {
        by_time[l.timestamp as usize].push(l);
    }
    let init = (adb.start(), 0u64, vec![0usize; slots]);
    let mut seen = HashSet::from([init.clone()]);
    let mut queue = VecDeque::from([init]);
    while let Some((loc, ticks, used)) = queue.pop_front() {
        if adb.is_accepting(loc) && used.iter().zip(&by_time).all(|(u, seg)| *u == seg.len()) {
            return true;
        }
        for t in adb.outgoing(loc) {
            let next = match &t.label {
                Label::Eps => Some((t.dst, ticks, used.clone())),
                Label::Tick => Some((t.dst, (ticks + 1).min(t_end + 1), used.clone())),
                Label::Out { symbol, delay } => ticks
                    .checked_add(*delay)
                    .filter(|&tau| tau <= t_end)
                    .and_then(|tau| {
                        let tau = tau as usize;
                        let seg = &by_time[tau];
                        (used[tau] < seg.len() && &seg[used[tau]].symbol == symbol).then(|| {
                            let mut used = used.clone();
                            used[tau] += 1;
                            (t.dst, ticks, used)
                        })
                    }),
            };
            if let Some(n) = next {
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
    }
    false
}

fn empty_word_member(adb: &Adb) -> bool {
    let mut seen = HashSet::from([adb.start()]);
    let mut stack = vec![adb.start()];
    while let Some(l) = stack.pop() {
        if adb.is_accepting(l) {
            return true;
        }
        for t in adb.outgoing(l).filter(|t| !t.label.is_out()) {
            if seen.insert(t.dst) {
                stack.push(t.dst);
            }
        }
    }
    false
}

/// A run split as `r0 · rs0 · rp · rs1 · r1`, where the window is
/// `rs0 · rp · rs1` and `rp` is a nonempty cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    run: Run,
    window: Range<usize>,
    pumped: Range<usize>,
}

impl Decomposition {
    pub fn run(&self) -> &Run {
        &self.run
    }

    pub fn window(&self) -> Range<usize> {
        self.window.clone()
    }

    /// Transition indices of `rp`.
    pub fn pumped(&self) -> Range<usize> {
        self.pumped.clone()
    }

    pub fn r0(&self) -> &[(Label, Loc)] {
        &self.run.steps()[..self.window.start]
    }

    pub fn rs0(&self) -> &[(Label, Loc)] {
        &self.run.steps()[self.window.start..self.pumped.start]
    }

    pub fn rp(&self) -> &[(Label, Loc)] {
        &self.run.steps()[self.pumped.clone()]
    }

    pub fn rs1(&self) -> &[(Label, Loc)] {
        &self.run.steps()[self.pumped.end..self.window.end]
    }

    pub fn r1(&self) -> &[(Label, Loc)] {
        &self.run.steps()[self.window.end..]
    }
}

/// Finds the earliest cycle of at most `|L|` transitions inside `window`
/// (transition indices) of an accepting run.
pub fn pump_decompose(
    adb: &Adb,
    run: &Run,
    window: Range<usize>,
) -> Result<Decomposition, OracleError> {
    if !adb.is_accepting_run(run)? {
        return Err(OracleError::NotAccepting);
    }
    if window.start > window.end || window.end > run.len() {
        return Err(OracleError::InvalidWindow {
            start: window.start,
            end: window.end,
            len: run.len(),
        });
    }
    let needed = adb.num_locations();
    if window.len() < needed {
        return Err(OracleError::WindowTooShort {
            len: window.len(),
            needed,
        });
    }
    let mut first_seen = vec![None; adb.num_locations()];
    for j in window.start..=window.end {
        let l = run.location_at(j).index();
        if let Some(i) = first_seen[l] {
            return Ok(Decomposition {
                run: run.clone(),
                window,
                pumped: i..j,
            });
        }
        first_seen[l] = Some(j);
    }
    unreachable!("more positions than locations in the window")
}

/// `r0 · rs0 · rp^i · rs1 · r1`.
pub fn pump(d: &Decomposition, i: usize) -> Run {
    let steps = d.run.steps();
    let mut out = steps[..d.pumped.start].to_vec();
    out.extend(rep(d.rp(), i));
    out.extend_from_slice(&steps[d.pumped.end..]);
    Run::from_steps(d.run.start(), out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    SwapSymbol,
    ShiftTimestamp,
    Delete,
}

/// One random single-letter change of `word` that is still a valid timed
/// word over `adb`'s alphabet, or `None` if the attempt produced none.
pub fn mutate(adb: &Adb, word: &TimedWord, rng: &mut impl Rng) -> Option<(Mutation, TimedWord)> {
    if word.is_empty() {
        return None;
    }
    let mut letters = word.letters().to_vec();
    let i = rng.gen_range(0..letters.len());
    let kind = *[
        Mutation::SwapSymbol,
        Mutation::ShiftTimestamp,
        Mutation::Delete,
    ]
    .choose(rng)?;
    match kind {
        Mutation::SwapSymbol => {
            let others: Vec<_> = adb
                .alphabet()
                .iter()
                .filter(|s| **s != letters[i].symbol)
                .collect();
            letters[i].symbol = (*others.choose(rng)?).clone();
        }
        Mutation::ShiftTimestamp => {
            let t = letters[i].timestamp;
            letters[i].timestamp = if rng.gen() {
                t.checked_add(1)?
            } else {
                t.checked_sub(1)?
            };
        }
        Mutation::Delete => {
            letters.remove(i);
        }
    }
    TimedWord::new(letters).ok().map(|w| (kind, w))
}

/// Up to `n` valid mutations of `word`, giving up after `4 n` attempts.
pub fn mutations(adb: &Adb, word: &TimedWord, n: usize, rng: &mut impl Rng) -> Vec<TimedWord> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..4 * n {
        if out.len() == n {
            break;
        }
        if let Some((_, w)) = mutate(adb, word, rng) {
            out.push(w);
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub cases: usize,
    /// Words on which the two procedures disagree, with the oracle's answer.
    pub disagreements: Vec<(TimedWord, bool)>,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares [`member_timed`] with [`brute_member_timed`] on every sampled
/// word and `per_word` seeded mutations of each.
pub fn differential_check(
    adb: &Adb,
    bound: usize,
    per_word: usize,
    seed: u64,
) -> Result<DiffReport, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DiffReport::default();
    for w in language_sample(adb, bound)? {
        let mut words = vec![w.clone()];
        words.extend(mutations(adb, &w, per_word, &mut rng));
        for m in words {
            report.cases += 1;
            let expected = brute_member_timed(adb, &m);
            if member_timed(adb, &m)? != expected {
                report.disagreements.push((m, expected));
            }
        }
    }
    Ok(report)
}
