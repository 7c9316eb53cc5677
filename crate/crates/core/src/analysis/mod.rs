//! Decision procedures: emptiness, timed and untimed membership,
//! intersection with a regular language, and regular model checking.

mod membership;
mod product;
pub(crate) mod search;

use thiserror::Error;

use crate::automaton::{Adb, Run};
use crate::regular::{
    complement, determinize, eliminate_eps, nfa_member, single_word_nfa, Nfa, NfaError,
};
use crate::words::{oword, UntimedWord};

pub use membership::{member_timed, member_timed_run, WordCursor};
pub use product::{intersect_regular, GuessProduct, ProductEdge, ProductNode, ProductState};

/// Environment variable overriding [`Limits::default`].
pub const MAX_STATES_VAR: &str = "ADB_MAX_STATES";

/// Resource bounds for the product searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 1_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with `ADB_MAX_STATES` taking precedence when it parses.
    pub fn from_env() -> Self {
        std::env::var(MAX_STATES_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|max_states| Limits { max_states })
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("symbol `{0}` is not in the automaton's alphabet")]
    UnknownSymbol(String),
    #[error("specification alphabet lacks {}", .0.join(", "))]
    IncompatibleAlphabet(Vec<String>),
    #[error("state limit of {0} exceeded")]
    StateLimit(usize),
    #[error("counterexample failed verification: {0}")]
    InternalVerificationFailure(String),
    #[error(transparent)]
    Nfa(#[from] NfaError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    /// A shortest run reaching an accepting location.
    NonEmpty(Run),
}

/// Reachability of an accepting location, ignoring labels.
pub fn is_empty(adb: &Adb) -> Emptiness {
    let path = search::shortest_path(
        adb.start(),
        |&l| {
            adb.outgoing(l)
                .map(|t| (t.label.clone(), t.dst))
                .collect::<Vec<_>>()
                .into_iter()
        },
        |&l| adb.is_accepting(l),
        usize::MAX,
    )
    .expect("unbounded search over finitely many locations");
    match path {
        Some(steps) => Emptiness::NonEmpty(Run::from_steps(adb.start(), steps)),
        None => Emptiness::Empty,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    /// `word` is in both languages; `run` is an accepting run of the ADB
    /// whose output untimes to `word`.
    Witness {
        word: UntimedWord,
        run: Run,
    },
}

impl Intersection {
    pub fn is_empty(&self) -> bool {
        matches!(self, Intersection::Empty)
    }
}

/// Decides whether `ulan(adb) ∩ L(spec)` is empty by searching the
/// guess-tuple product on the fly.
pub fn intersect_regular_empty(adb: &Adb, spec: &Nfa) -> Result<Intersection, AnalysisError> {
    intersect_regular_empty_with(adb, spec, &Limits::from_env())
}

pub fn intersect_regular_empty_with(
    adb: &Adb,
    spec: &Nfa,
    limits: &Limits,
) -> Result<Intersection, AnalysisError> {
    let product = GuessProduct::new(adb, spec, limits)?;
    let path = search::shortest_path(
        ProductNode::Initial,
        |n| product.successors(n),
        |n| product.is_accepting(n),
        limits.max_states,
    )?;
    let Some(path) = path else {
        return Ok(Intersection::Empty);
    };
    let mut run = Run::new(adb.start());
    for (edge, node) in path {
        if let (Some(label), ProductNode::State(s)) = (edge, node) {
            run.push(label, s.loc);
        }
    }
    let word = oword(&run.labels()).untime();
    Ok(Intersection::Witness { word, run })
}

/// Whether `word` is the untimed output of some accepting run.
pub fn member_untimed(adb: &Adb, word: &UntimedWord) -> Result<bool, AnalysisError> {
    member_untimed_with(adb, word, &Limits::from_env())
}

pub fn member_untimed_with(
    adb: &Adb,
    word: &UntimedWord,
    limits: &Limits,
) -> Result<bool, AnalysisError> {
    if let Some(s) = word.symbols().iter().find(|s| !adb.has_symbol(s)) {
        return Err(AnalysisError::UnknownSymbol(s.to_string()));
    }
    let spec = single_word_nfa(word, adb.alphabet())?;
    Ok(!intersect_regular_empty_with(adb, &spec, limits)?.is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails {
        counterexample: UntimedWord,
        witness: Run,
    },
}

/// Decides `ulan(adb) ⊆ L(spec)`.
pub fn model_check(adb: &Adb, spec: &Nfa) -> Result<Verdict, AnalysisError> {
    model_check_with(adb, spec, &Limits::from_env())
}

pub fn model_check_with(adb: &Adb, spec: &Nfa, limits: &Limits) -> Result<Verdict, AnalysisError> {
    let bad = complement(&determinize(&eliminate_eps(spec))).to_nfa();
    match intersect_regular_empty_with(adb, &bad, limits)? {
        Intersection::Empty => Ok(Verdict::Holds),
        Intersection::Witness { word, run } => {
            if adb.run_output(&run).map(|w| w.untime()).as_ref() != Ok(&word)
                || !adb.is_accepting_run(&run).unwrap_or(false)
            {
                return Err(AnalysisError::InternalVerificationFailure(format!(
                    "witness run does not produce `{word}`"
                )));
            }
            if !member_untimed_with(adb, &word, limits)? {
                return Err(AnalysisError::InternalVerificationFailure(format!(
                    "`{word}` is not an untimed output"
                )));
            }
            if nfa_member(spec, word.symbols())? {
                return Err(AnalysisError::InternalVerificationFailure(format!(
                    "`{word}` satisfies the specification"
                )));
            }
            Ok(Verdict::Fails {
                counterexample: word,
                witness: run,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::{a1, a2, a3, adb};
    use crate::automaton::AdbBuilder;
    use crate::constructions::lift_regular;
    use crate::oracle::untimed_sample;
    use crate::regular::tests::{nfa, sym};
    use proptest::prelude::*;

    fn uw(s: &str) -> UntimedWord {
        s.parse().unwrap()
    }

    fn abc_star() -> Nfa {
        nfa(
            "abc",
            3,
            &[0, 1, 2],
            &[
                (0, 'a', 0),
                (0, 'b', 1),
                (1, 'b', 1),
                (0, 'c', 2),
                (1, 'c', 2),
                (2, 'c', 2),
            ],
        )
    }

    fn bac_star() -> Nfa {
        nfa(
            "abc",
            3,
            &[0, 1, 2],
            &[
                (0, 'b', 0),
                (0, 'a', 1),
                (1, 'a', 1),
                (0, 'c', 2),
                (1, 'c', 2),
                (2, 'c', 2),
            ],
        )
    }

    fn sigma_star(alphabet: &str) -> Nfa {
        let edges: Vec<_> = alphabet.chars().map(|c| (0, c, 0)).collect();
        nfa(alphabet, 1, &[0], &edges)
    }

    fn aabbcc() -> Nfa {
        let edges: Vec<_> = "aabbcc"
            .chars()
            .enumerate()
            .map(|(i, c)| (i, c, i + 1))
            .collect();
        nfa("abc", 7, &[6], &edges)
    }

    fn a_star_b() -> Nfa {
        nfa("abc", 2, &[1], &[(0, 'a', 0), (0, 'b', 1)])
    }

    fn unreachable_accept() -> Adb {
        adb(&["a"], 3, &[2], &[(0, "a/0", 1), (1, "tick", 0)])
    }

    #[test]
    fn emptiness_examples() {
        assert_eq!(is_empty(&a1()), Emptiness::NonEmpty(Run::new(a1().start())));
        assert_eq!(is_empty(&unreachable_accept()), Emptiness::Empty);
        assert!(matches!(is_empty(&a3()), Emptiness::NonEmpty(_)));
        let deep = adb(&["a"], 3, &[2], &[(0, "a/0", 1), (1, "tick", 2)]);
        let Emptiness::NonEmpty(run) = is_empty(&deep) else {
            panic!()
        };
        assert_eq!(run.len(), 2);
        assert!(deep.is_accepting_run(&run).unwrap());
    }

    #[test]
    fn intersection_examples() {
        match intersect_regular_empty(&a1(), &aabbcc()).unwrap() {
            Intersection::Witness { word, run } => {
                assert_eq!(word, uw("a a b b c c"));
                assert!(a1().is_accepting_run(&run).unwrap());
            }
            Intersection::Empty => panic!("expected a witness"),
        }
        assert_eq!(
            intersect_regular_empty(&a1(), &a_star_b()).unwrap(),
            Intersection::Empty
        );
        match intersect_regular_empty(&a1(), &sigma_star("abc")).unwrap() {
            Intersection::Witness { word, .. } => assert!(word.is_empty()),
            Intersection::Empty => panic!("expected ε"),
        }
    }

    #[test]
    fn intersection_rejects_smaller_spec_alphabets() {
        assert_eq!(
            intersect_regular_empty(&a1(), &sigma_star("ab")),
            Err(AnalysisError::IncompatibleAlphabet(vec!["c".into()]))
        );
    }

    #[test]
    fn untimed_membership_examples() {
        assert!(member_untimed(&a1(), &uw("a b c")).unwrap());
        assert!(!member_untimed(&a1(), &uw("a b")).unwrap());
        assert!(member_untimed(&a3(), &uw("a b c d")).unwrap());
        assert!(member_untimed(&a1(), &uw("")).unwrap());
        assert!(member_untimed(&a2(), &uw("a b c a b c")).unwrap());
        assert_eq!(
            member_untimed(&a1(), &uw("z")),
            Err(AnalysisError::UnknownSymbol("z".into()))
        );
    }

    #[test]
    fn untimed_membership_sees_reordering() {
        // a/1 then b/0 outputs b before a.
        let swap = adb(&["a", "b"], 3, &[2], &[(0, "a/1", 1), (1, "b/0", 2)]);
        assert!(member_untimed(&swap, &uw("b a")).unwrap());
        assert!(!member_untimed(&swap, &uw("a b")).unwrap());
    }

    #[test]
    fn model_check_examples() {
        assert_eq!(model_check(&a1(), &abc_star()).unwrap(), Verdict::Holds);
        match model_check(&a1(), &bac_star()).unwrap() {
            Verdict::Fails {
                counterexample,
                witness,
            } => {
                assert_eq!(counterexample, uw("a b c"));
                assert!(a1().is_accepting_run(&witness).unwrap());
            }
            Verdict::Holds => panic!("expected a counterexample"),
        }
        for spec in [abc_star(), aabbcc(), a_star_b()] {
            assert_eq!(
                model_check(&lift_regular(&spec), &spec).unwrap(),
                Verdict::Holds
            );
        }
    }

    #[test]
    fn model_check_needs_the_whole_alphabet() {
        assert!(matches!(
            model_check(&a1(), &sigma_star("ab")),
            Err(AnalysisError::IncompatibleAlphabet(_))
        ));
    }

    #[test]
    fn state_limit_is_reported() {
        let limits = Limits { max_states: 3 };
        assert_eq!(
            intersect_regular_empty_with(&a3(), &aabbcc().extend_alphabet([sym("d")]), &limits),
            Err(AnalysisError::StateLimit(3))
        );
    }

    #[test]
    fn product_respects_the_size_bound() {
        for a in [a1(), a2(), a3()] {
            let spec = aabbcc().extend_alphabet([sym("d")]);
            let p = intersect_regular(&a, &spec, &Limits::default()).unwrap();
            let m = a.max_delay() as u32;
            let bound = 1 + a.num_locations() * spec.num_states().pow(2 * m + 1);
            assert!(p.num_locations() <= bound);
        }
    }

    #[test]
    fn product_without_delays_is_synchronous() {
        let a = lift_regular(&abc_star());
        let p = intersect_regular(&a, &aabbcc(), &Limits::default()).unwrap();
        assert!(p.num_locations() <= 1 + a.num_locations() * aabbcc().num_states());
        assert_eq!(untimed_sample(&p, 12).unwrap(), [uw("a a b b c c")].into());
    }

    #[test]
    fn product_language_is_the_intersection() {
        let spec = sigma_star("abc");
        let p = intersect_regular(&a1(), &spec, &Limits::default()).unwrap();
        let expected = untimed_sample(&a1(), 9).unwrap();
        let got = untimed_sample(&p, 30).unwrap();
        assert!(expected.iter().all(|u| got.contains(u)));
        assert!(got.iter().all(|u| member_untimed(&a1(), u).unwrap()));
    }

    fn small_adb() -> impl Strategy<Value = Adb> {
        let label = prop_oneof![
            (0..2usize, 0..3u64).prop_map(|(s, d)| format!("{}/{d}", ["a", "b"][s])),
            Just("tick".to_string()),
            Just("eps".to_string()),
        ];
        (
            1..4usize,
            prop::collection::vec((0..4usize, label, 0..4usize), 0..7),
            prop::collection::vec(0..4usize, 1..3),
        )
            .prop_map(|(n, edges, acc)| {
                let mut b = AdbBuilder::new();
                b.add_symbol(sym("a"));
                b.add_symbol(sym("b"));
                let locs: Vec<_> = (0..n)
                    .map(|i| b.add_location(&format!("l{i}")).unwrap())
                    .collect();
                b.set_start(locs[0]);
                for a in acc {
                    b.accept(locs[a % n]);
                }
                for (s, l, d) in edges {
                    b.add_transition(locs[s % n], l.parse().unwrap(), locs[d % n]);
                }
                b.build().unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn witnesses_are_sound(a in small_adb(), accept_b in any::<bool>()) {
            let spec = if accept_b {
                nfa("ab", 2, &[1], &[(0, 'a', 0), (0, 'b', 1), (1, 'a', 1), (1, 'b', 1)])
            } else {
                nfa("ab", 2, &[0], &[(0, 'a', 1), (1, 'a', 0), (0, 'b', 0), (1, 'b', 1)])
            };
            if let Intersection::Witness { word, run } = intersect_regular_empty(&a, &spec).unwrap() {
                prop_assert!(a.is_accepting_run(&run).unwrap());
                prop_assert_eq!(a.run_output(&run).unwrap().untime(), word.clone());
                prop_assert!(nfa_member(&spec, word.symbols()).unwrap());
            }
        }

        #[test]
        fn emptiness_is_consistent(a in small_adb()) {
            let by_product = intersect_regular_empty(&a, &sigma_star("ab")).unwrap().is_empty();
            prop_assert_eq!(by_product, is_empty(&a) == Emptiness::Empty);
        }

        #[test]
        fn untimed_membership_matches_enumeration(a in small_adb()) {
            let sample = untimed_sample(&a, 6).unwrap();
            for u in &sample {
                prop_assert!(member_untimed(&a, u).unwrap());
            }
        }

        #[test]
        fn model_check_duality(a in small_adb()) {
            let spec = nfa("ab", 2, &[0], &[(0, 'a', 1), (1, 'a', 0), (0, 'b', 0), (1, 'b', 1)]);
            match model_check(&a, &spec).unwrap() {
                Verdict::Holds => {
                    for u in untimed_sample(&a, 8).unwrap() {
                        prop_assert!(nfa_member(&spec, u.symbols()).unwrap());
                    }
                }
                Verdict::Fails { counterexample, .. } => {
                    prop_assert!(!nfa_member(&spec, counterexample.symbols()).unwrap());
                    prop_assert!(member_untimed(&a, &counterexample).unwrap());
                }
            }
        }
    }
}
