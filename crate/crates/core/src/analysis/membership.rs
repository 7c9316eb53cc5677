//! Timed-word membership.
//!
//! The word is cut into one segment per timestamp `0..=t_end`. The search
//! runs the ADB together with `M + 1` cursors into the word, cursor `j`
//! reading the segment `j` time units ahead of the current time. Outputs with
//! delay `d` must match the next letter under cursor `d`; a tick needs the
//! current segment to be fully read and then shifts the cursors. Once the ADB
//! sits in an accepting location it may keep ticking in a sink so that
//! segments still ahead of it get checked.

use crate::automaton::{Adb, Loc, Run};
use crate::words::{Label, TimedWord};

use super::{search, AnalysisError, Limits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordCursor {
    /// Nothing of segment `k` read yet.
    SegStart(u64),
    /// Letter `j` was the last one read.
    AfterLetter(usize),
    /// Past the end of the word.
    Sink,
}

struct Segments<'w> {
    word: &'w TimedWord,
    t_end: u64,
}

impl Segments<'_> {
    fn time(&self, c: WordCursor) -> Option<u64> {
        match c {
            WordCursor::SegStart(k) => Some(k),
            WordCursor::AfterLetter(j) => Some(self.word.letters()[j].timestamp),
            WordCursor::Sink => None,
        }
    }

    /// Index of the letter the cursor reads next, if its segment has one.
    fn next_letter(&self, c: WordCursor) -> Option<usize> {
        let letters = self.word.letters();
        let (i, t) = match c {
            WordCursor::SegStart(k) => (letters.partition_point(|l| l.timestamp < k), k),
            WordCursor::AfterLetter(j) => (j + 1, letters[j].timestamp),
            WordCursor::Sink => return None,
        };
        (i < letters.len() && letters[i].timestamp == t).then_some(i)
    }

    fn complete(&self, c: WordCursor) -> bool {
        c == WordCursor::Sink || self.next_letter(c).is_none()
    }

    fn successor(&self, c: WordCursor) -> WordCursor {
        match self.time(c) {
            Some(k) if k < self.t_end => WordCursor::SegStart(k + 1),
            _ => WordCursor::Sink,
        }
    }

    fn finished(&self, c: WordCursor) -> bool {
        match c {
            WordCursor::Sink => true,
            WordCursor::AfterLetter(j) => j + 1 == self.word.len(),
            WordCursor::SegStart(_) => false,
        }
    }
}

/// `None` is the sink entered by ticking out of an accepting location.
type Node = (Option<Loc>, Vec<WordCursor>);

/// Whether some accepting run of `adb` outputs exactly `word`.
pub fn member_timed(adb: &Adb, word: &TimedWord) -> Result<bool, AnalysisError> {
    Ok(member_timed_run(adb, word, &Limits::from_env())?.is_some())
}

/// An accepting run outputting `word`, if there is one.
pub fn member_timed_run(
    adb: &Adb,
    word: &TimedWord,
    limits: &Limits,
) -> Result<Option<Run>, AnalysisError> {
    if let Some(l) = word.letters().iter().find(|l| !adb.has_symbol(&l.symbol)) {
        return Err(AnalysisError::UnknownSymbol(l.symbol.to_string()));
    }
    let segs = Segments {
        word,
        t_end: word.end_time().unwrap_or(0),
    };
    // Cursors beyond t_end + 1 slots ahead are always at the sink, so they
    // need not be stored.
    let width = match word.end_time() {
        None => 0,
        Some(t) => adb.max_delay().min(t.saturating_add(1)),
    };
    if width >= limits.max_states as u64 {
        return Err(AnalysisError::StateLimit(limits.max_states));
    }
    let cursors: Vec<WordCursor> = (0..=width)
        .map(|j| match word.end_time() {
            Some(t) if j <= t => WordCursor::SegStart(j),
            _ => WordCursor::Sink,
        })
        .collect();
    let successors = |(loc, cs): &Node| {
        let mut out: Vec<(Label, Node)> = Vec::new();
        let tick = |cs: &Vec<WordCursor>| -> Option<Vec<WordCursor>> {
            if !segs.complete(cs[0]) {
                return None;
            }
            let mut next = cs[1..].to_vec();
            next.push(segs.successor(*cs.last().expect("at least one cursor")));
            Some(next)
        };
        let Some(l) = *loc else {
            if let Some(next) = tick(cs) {
                out.push((Label::Tick, (None, next)));
            }
            return out.into_iter();
        };
        for t in adb.outgoing(l) {
            match &t.label {
                Label::Eps => out.push((Label::Eps, (Some(t.dst), cs.clone()))),
                Label::Out { symbol, delay } => {
                    let Some(&c) = usize::try_from(*delay).ok().and_then(|d| cs.get(d)) else {
                        continue;
                    };
                    if let Some(i) = segs.next_letter(c) {
                        if &word.letters()[i].symbol == symbol {
                            let mut next = cs.clone();
                            next[*delay as usize] = WordCursor::AfterLetter(i);
                            out.push((t.label.clone(), (Some(t.dst), next)));
                        }
                    }
                }
                Label::Tick => {
                    if let Some(next) = tick(cs) {
                        out.push((Label::Tick, (Some(t.dst), next)));
                    }
                }
            }
        }
        if adb.is_accepting(l) {
            if let Some(next) = tick(cs) {
                out.push((Label::Tick, (None, next)));
            }
        }
        out.into_iter()
    };
    let accept = |(loc, cs): &Node| {
        loc.is_none_or(|l| adb.is_accepting(l)) && cs.iter().all(|&c| segs.finished(c))
    };
    let path = search::shortest_path(
        (Some(adb.start()), cursors),
        successors,
        accept,
        limits.max_states,
    )?;
    Ok(path.map(|steps| {
        let mut run = Run::new(adb.start());
        for (label, (loc, _)) in steps {
            if let Some(l) = loc {
                run.push(label, l);
            }
        }
        run
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::{a1, a2, a3, adb};
    use crate::oracle::{brute_member_timed, language_sample};
    use proptest::prelude::*;

    fn tw(s: &str) -> TimedWord {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert!(member_timed(&a1(), &tw("a@0 b@1 c@2")).unwrap());
        assert!(member_timed(&a1(), &tw("")).unwrap());
        assert!(!member_timed(&a1(), &tw("a@0 b@1")).unwrap());
        assert!(member_timed(
            &a2(),
            &tw("a@0 a@0 b@1 b@1 c@2 c@2 a@2 b@3 c@4 a@6 b@7 c@8")
        )
        .unwrap());
        assert!(member_timed(&a3(), &tw("a@0 a@0 b@0 a@0 b@0 c@1 c@1 c@1 d@2 d@2")).unwrap());
        assert!(!member_timed(&a1(), &tw("a@0 b@2 c@2")).unwrap());
        assert!(!member_timed(&a1(), &tw("a@1 b@2 c@3")).unwrap());
    }

    #[test]
    fn unknown_symbols_are_rejected() {
        assert_eq!(
            member_timed(&a1(), &tw("z@0")),
            Err(AnalysisError::UnknownSymbol("z".into()))
        );
    }

    #[test]
    fn witness_run_outputs_the_word() {
        let w = tw("a@0 a@0 b@1 b@1 c@2 c@2 a@2 b@3 c@4");
        let run = member_timed_run(&a2(), &w, &Limits::default())
            .unwrap()
            .unwrap();
        assert!(a2().is_accepting_run(&run).unwrap());
        assert_eq!(a2().run_output(&run).unwrap(), w);
    }

    #[test]
    fn empty_word_needs_an_output_free_run() {
        let a = adb(&["a"], 2, &[1], &[(0, "tick", 0), (0, "eps", 1)]);
        assert!(member_timed(&a, &tw("")).unwrap());
        let b = adb(&["a"], 2, &[1], &[(0, "a/0", 1)]);
        assert!(!member_timed(&b, &tw("")).unwrap());
    }

    #[test]
    fn huge_delays_do_not_allocate() {
        let a = adb(&["a"], 2, &[1], &[(0, "a/18446744073709551615", 1)]);
        assert!(!member_timed(&a, &tw("a@0")).unwrap());
        let b = adb(&["a"], 2, &[1], &[(0, "a/1000000000", 1), (0, "a/0", 1)]);
        assert!(member_timed(&b, &tw("a@0")).unwrap());
    }

    #[test]
    fn leading_ticks_shift_the_word() {
        let a = adb(&["a"], 2, &[1], &[(0, "tick", 0), (0, "a/1", 1)]);
        assert!(member_timed(&a, &tw("a@1")).unwrap());
        assert!(member_timed(&a, &tw("a@4")).unwrap());
        assert!(!member_timed(&a, &tw("a@0")).unwrap());
    }

    fn mutations(w: &TimedWord) -> Vec<TimedWord> {
        let mut out = Vec::new();
        let letters = w.letters();
        for i in 0..letters.len() {
            let mut del = letters.to_vec();
            del.remove(i);
            out.extend(TimedWord::new(del).ok());
            for dt in [-1i64, 1] {
                let mut m = letters.to_vec();
                if let Some(t) = m[i].timestamp.checked_add_signed(dt) {
                    m[i].timestamp = t;
                    out.extend(TimedWord::new(m).ok());
                }
            }
        }
        out
    }

    #[test]
    fn agrees_with_the_oracle_on_corpus_mutations() {
        for a in [a1(), a2(), a3()] {
            for w in language_sample(&a, 9).unwrap() {
                assert!(member_timed(&a, &w).unwrap(), "{w}");
                for m in mutations(&w) {
                    assert_eq!(
                        member_timed(&a, &m).unwrap(),
                        brute_member_timed(&a, &m),
                        "{m}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_the_oracle_on_random_words(
            letters in prop::collection::vec((0..4usize, 0..4u64), 0..6),
            which in 0..3usize,
        ) {
            let a = [a1(), a2(), a3()][which].clone();
            let names = ["a", "b", "c", "d"];
            let mut raw: Vec<(&str, u64)> = letters
                .iter()
                .map(|&(s, t)| (names[s % a.alphabet().len()], t))
                .collect();
            raw.sort_by_key(|&(_, t)| t);
            let w = crate::words::validate_timed_word(&raw).unwrap();
            prop_assert_eq!(member_timed(&a, &w).unwrap(), brute_member_timed(&a, &w));
        }
    }
}
