//! Classical finite automata used as regular specifications: ε-closure,
//! ε-elimination, subset construction, complementation and membership.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::words::{Symbol, UntimedWord, WordError};

/// Anything usable as an automaton letter.
pub trait Letter: Clone + Ord + Hash + fmt::Display + fmt::Debug {}

impl<T: Clone + Ord + Hash + fmt::Display + fmt::Debug> Letter for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NfaError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("invalid state name `{0}`")]
    InvalidStateName(String),
    #[error("no start state")]
    MissingStart,
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NfaTransition {
    pub src: usize,
    /// Index into the alphabet; `None` is an ε-move.
    pub letter: Option<usize>,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa<S = Symbol> {
    states: Vec<String>,
    alphabet: Vec<S>,
    start: usize,
    accepting: Vec<bool>,
    transitions: Vec<NfaTransition>,
    outgoing: Vec<Vec<usize>>,
}

impl<S: Letter> Nfa<S> {
    pub fn builder(alphabet: impl IntoIterator<Item = S>) -> NfaBuilder<S> {
        NfaBuilder::new(alphabet)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.states[state]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// Sorted, duplicate-free.
    pub fn alphabet(&self) -> &[S] {
        &self.alphabet
    }

    pub fn letter_index(&self, letter: &S) -> Option<usize> {
        self.alphabet.binary_search(letter).ok()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&s| self.accepting[s])
    }

    pub fn transitions(&self) -> &[NfaTransition] {
        &self.transitions
    }

    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = &NfaTransition> + '_ {
        self.outgoing[state].iter().map(|&t| &self.transitions[t])
    }

    /// Targets of `state` on `letter` (an alphabet index, or `None` for ε).
    pub fn successors(
        &self,
        state: usize,
        letter: Option<usize>,
    ) -> impl Iterator<Item = usize> + '_ {
        self.outgoing(state)
            .filter(move |t| t.letter == letter)
            .map(|t| t.dst)
    }

    pub fn has_eps(&self) -> bool {
        self.transitions.iter().any(|t| t.letter.is_none())
    }

    /// Same automaton over a larger alphabet; the language is unchanged.
    pub fn extend_alphabet(&self, extra: impl IntoIterator<Item = S>) -> Nfa<S> {
        let mut b = NfaBuilder::new(self.alphabet.iter().cloned().chain(extra));
        for name in &self.states {
            b.add_state(name).expect("names are already unique");
        }
        b.set_start(self.start);
        for s in self.accepting_states() {
            b.accept(s);
        }
        for t in &self.transitions {
            b.add_transition(t.src, t.letter.map(|l| self.alphabet[l].clone()), t.dst);
        }
        b.build().expect("extension of a valid automaton")
    }

    fn letter_indices(&self, word: &[S]) -> Result<Vec<usize>, NfaError> {
        word.iter()
            .map(|l| {
                self.letter_index(l)
                    .ok_or_else(|| NfaError::UnknownSymbol(l.to_string()))
            })
            .collect()
    }
}

pub struct NfaBuilder<S> {
    alphabet: Vec<S>,
    states: Vec<String>,
    index: HashMap<String, usize>,
    start: Option<usize>,
    accepting: BTreeSet<usize>,
    transitions: Vec<(usize, Option<S>, usize)>,
}

impl<S: Letter> NfaBuilder<S> {
    pub fn new(alphabet: impl IntoIterator<Item = S>) -> Self {
        let mut alphabet: Vec<S> = alphabet.into_iter().collect();
        alphabet.sort();
        alphabet.dedup();
        NfaBuilder {
            alphabet,
            states: Vec::new(),
            index: HashMap::new(),
            start: None,
            accepting: BTreeSet::new(),
            transitions: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: &str) -> Result<usize, NfaError> {
        if name.is_empty() || name.starts_with('#') || name.chars().any(char::is_whitespace) {
            return Err(NfaError::InvalidStateName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(NfaError::DuplicateState(name.to_string()));
        }
        let id = self.states.len();
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn state(&self, name: &str) -> Result<usize, NfaError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| NfaError::UnknownState(name.to_string()))
    }

    pub fn set_start(&mut self, state: usize) {
        self.start = Some(state);
    }

    pub fn accept(&mut self, state: usize) {
        self.accepting.insert(state);
    }

    pub fn add_transition(&mut self, src: usize, letter: Option<S>, dst: usize) {
        self.transitions.push((src, letter, dst));
    }

    pub fn build(self) -> Result<Nfa<S>, NfaError> {
        let start = self.start.ok_or(NfaError::MissingStart)?;
        let n = self.states.len();
        let mut transitions = Vec::with_capacity(self.transitions.len());
        let mut seen = std::collections::HashSet::new();
        for (src, letter, dst) in self.transitions {
            let letter = match letter {
                None => None,
                Some(l) => Some(
                    self.alphabet
                        .binary_search(&l)
                        .map_err(|_| NfaError::UnknownSymbol(l.to_string()))?,
                ),
            };
            let t = NfaTransition { src, letter, dst };
            if seen.insert(t) {
                transitions.push(t);
            }
        }
        let mut outgoing = vec![Vec::new(); n];
        for (i, t) in transitions.iter().enumerate() {
            outgoing[t.src].push(i);
        }
        let mut accepting = vec![false; n];
        for s in self.accepting {
            accepting[s] = true;
        }
        Ok(Nfa {
            states: self.states,
            alphabet: self.alphabet,
            start,
            accepting,
            transitions,
            outgoing,
        })
    }
}

/// Name-level NFA definition, as read from a file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawNfa {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub start: Option<String>,
    pub accepting: Vec<String>,
    /// `(src, letter, dst)`; `None` is ε.
    pub transitions: Vec<(String, Option<String>, String)>,
}

pub fn validate_nfa(raw: &RawNfa) -> Result<Nfa, NfaError> {
    let alphabet = raw
        .alphabet
        .iter()
        .map(|s| Symbol::new(s))
        .collect::<Result<Vec<_>, _>>()?;
    let mut b = NfaBuilder::new(alphabet);
    for s in &raw.states {
        b.add_state(s)?;
    }
    let start = raw.start.as_deref().ok_or(NfaError::MissingStart)?;
    let start = b.state(start)?;
    b.set_start(start);
    for s in &raw.accepting {
        let s = b.state(s)?;
        b.accept(s);
    }
    for (src, letter, dst) in &raw.transitions {
        let src = b.state(src)?;
        let dst = b.state(dst)?;
        let letter = letter.as_deref().map(Symbol::new).transpose()?;
        b.add_transition(src, letter, dst);
    }
    b.build()
}

/// Least superset of `states` closed under ε-moves.
pub fn eps_closure<S: Letter>(nfa: &Nfa<S>, states: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut closure = states.clone();
    let mut stack: Vec<usize> = states.iter().copied().collect();
    while let Some(s) = stack.pop() {
        for t in nfa.successors(s, None) {
            if closure.insert(t) {
                stack.push(t);
            }
        }
    }
    closure
}

/// ε-free automaton over the same states with the same language.
pub fn eliminate_eps<S: Letter>(nfa: &Nfa<S>) -> Nfa<S> {
    if !nfa.has_eps() {
        return nfa.clone();
    }
    let mut b = NfaBuilder::new(nfa.alphabet.iter().cloned());
    for name in &nfa.states {
        b.add_state(name).expect("names are already unique");
    }
    b.set_start(nfa.start);
    for p in 0..nfa.num_states() {
        let closure = eps_closure(nfa, &BTreeSet::from([p]));
        if closure.iter().any(|&q| nfa.accepting[q]) {
            b.accept(p);
        }
        for &q in &closure {
            for t in nfa.outgoing(q) {
                if let Some(l) = t.letter {
                    b.add_transition(p, Some(nfa.alphabet[l].clone()), t.dst);
                }
            }
        }
    }
    b.build().expect("derived from a valid automaton")
}

fn step<S: Letter>(nfa: &Nfa<S>, current: &BTreeSet<usize>, letter: usize) -> BTreeSet<usize> {
    let moved = current
        .iter()
        .flat_map(|&s| nfa.successors(s, Some(letter)))
        .collect();
    eps_closure(nfa, &moved)
}

/// Subset simulation.
pub fn nfa_member<S: Letter>(nfa: &Nfa<S>, word: &[S]) -> Result<bool, NfaError> {
    let letters = nfa.letter_indices(word)?;
    let mut current = eps_closure(nfa, &BTreeSet::from([nfa.start]));
    for l in letters {
        current = step(nfa, &current, l);
        if current.is_empty() {
            return Ok(false);
        }
    }
    Ok(current.iter().any(|&s| nfa.accepting[s]))
}

/// Total deterministic automaton. Each state remembers the NFA subset it
/// stands for; the empty subset is the sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa<S = Symbol> {
    subsets: Vec<Vec<usize>>,
    names: Vec<String>,
    alphabet: Vec<S>,
    start: usize,
    accepting: Vec<bool>,
    delta: Vec<Vec<usize>>,
}

impl<S: Letter> Dfa<S> {
    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn alphabet(&self) -> &[S] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn subset(&self, state: usize) -> &[usize] {
        &self.subsets[state]
    }

    pub fn next(&self, state: usize, letter: usize) -> usize {
        self.delta[state][letter]
    }

    pub fn accepts(&self, word: &[S]) -> Result<bool, NfaError> {
        let mut s = self.start;
        for l in word {
            let i = self
                .alphabet
                .binary_search(l)
                .map_err(|_| NfaError::UnknownSymbol(l.to_string()))?;
            s = self.delta[s][i];
        }
        Ok(self.accepting[s])
    }

    pub fn to_nfa(&self) -> Nfa<S> {
        let mut b = NfaBuilder::new(self.alphabet.iter().cloned());
        for name in &self.names {
            b.add_state(name).expect("subset names are unique");
        }
        b.set_start(self.start);
        for (s, row) in self.delta.iter().enumerate() {
            if self.accepting[s] {
                b.accept(s);
            }
            for (l, &dst) in row.iter().enumerate() {
                b.add_transition(s, Some(self.alphabet[l].clone()), dst);
            }
        }
        b.build().expect("derived from a valid automaton")
    }
}

/// Subset construction over reachable subsets only.
pub fn determinize<S: Letter>(nfa: &Nfa<S>) -> Dfa<S> {
    let start: Vec<usize> = eps_closure(nfa, &BTreeSet::from([nfa.start]))
        .into_iter()
        .collect();
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut subsets = vec![start.clone()];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    ids.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let current: BTreeSet<usize> = subsets[id].iter().copied().collect();
        let mut row = Vec::with_capacity(nfa.alphabet.len());
        for l in 0..nfa.alphabet.len() {
            let next: Vec<usize> = step(nfa, &current, l).into_iter().collect();
            let next_id = match ids.get(&next) {
                Some(&i) => i,
                None => {
                    let i = subsets.len();
                    ids.insert(next.clone(), i);
                    subsets.push(next);
                    queue.push_back(i);
                    i
                }
            };
            row.push(next_id);
        }
        if delta.len() <= id {
            delta.resize(id + 1, Vec::new());
        }
        delta[id] = row;
    }
    let accepting = subsets
        .iter()
        .map(|s| s.iter().any(|&q| nfa.accepting[q]))
        .collect();
    let names = subsets
        .iter()
        .map(|s| {
            let inner: Vec<&str> = s.iter().map(|&q| nfa.state_name(q)).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();
    Dfa {
        subsets,
        names,
        alphabet: nfa.alphabet.clone(),
        start: 0,
        accepting,
        delta,
    }
}

/// Flips acceptance of a total DFA.
pub fn complement<S: Letter>(dfa: &Dfa<S>) -> Dfa<S> {
    let mut out = dfa.clone();
    for a in out.accepting.iter_mut() {
        *a = !*a;
    }
    out
}

/// Chain automaton accepting exactly `word`.
pub fn single_word_nfa(word: &UntimedWord, alphabet: &[Symbol]) -> Result<Nfa, NfaError> {
    let mut b = NfaBuilder::new(alphabet.iter().cloned());
    let mut prev = b.add_state("w0")?;
    b.set_start(prev);
    for (i, sym) in word.symbols().iter().enumerate() {
        let next = b.add_state(&format!("w{}", i + 1))?;
        b.add_transition(prev, Some(sym.clone()), next);
        prev = next;
    }
    b.accept(prev);
    b.build()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn sym(s: &str) -> Symbol {
        Symbol::new(s).unwrap()
    }

    pub(crate) fn word(s: &str) -> Vec<Symbol> {
        s.chars().map(|c| sym(&c.to_string())).collect()
    }

    /// Builds an NFA from `(src, letter, dst)` triples with `'_'` for ε.
    pub(crate) fn nfa(
        alphabet: &str,
        n: usize,
        accepting: &[usize],
        edges: &[(usize, char, usize)],
    ) -> Nfa {
        let mut b = NfaBuilder::new(word(alphabet));
        for i in 0..n {
            b.add_state(&format!("q{i}")).unwrap();
        }
        b.set_start(0);
        for &a in accepting {
            b.accept(a);
        }
        for &(s, c, d) in edges {
            let l = (c != '_').then(|| sym(&c.to_string()));
            b.add_transition(s, l, d);
        }
        b.build().unwrap()
    }

    /// All words over `alphabet` up to length `max`.
    pub(crate) fn all_words(alphabet: &str, max: usize) -> Vec<Vec<Symbol>> {
        let letters = word(alphabet);
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..max {
            let mut next = Vec::new();
            for w in &layer {
                for l in &letters {
                    let mut w2: Vec<Symbol> = w.clone();
                    w2.push(l.clone());
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
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

    #[test]
    fn closure_examples() {
        let plain = abc_star();
        assert_eq!(
            eps_closure(&plain, &BTreeSet::from([1])),
            BTreeSet::from([1])
        );
        let chain = nfa("a", 3, &[], &[(0, '_', 1), (1, '_', 2)]);
        assert_eq!(
            eps_closure(&chain, &BTreeSet::from([0])),
            BTreeSet::from([0, 1, 2])
        );
        let cycle = nfa("a", 3, &[], &[(0, '_', 1), (1, '_', 0)]);
        assert_eq!(
            eps_closure(&cycle, &BTreeSet::from([0])),
            BTreeSet::from([0, 1])
        );
    }

    #[test]
    fn eliminate_eps_examples() {
        let plain = abc_star();
        assert_eq!(eliminate_eps(&plain), plain);

        let eps_only = nfa("a", 2, &[1], &[(0, '_', 1)]);
        let e = eliminate_eps(&eps_only);
        assert!(!e.has_eps());
        assert!(nfa_member(&e, &[]).unwrap());
        assert!(!nfa_member(&e, &word("a")).unwrap());

        // a ε b
        let aeb = nfa("ab", 4, &[3], &[(0, 'a', 1), (1, '_', 2), (2, 'b', 3)]);
        let e = eliminate_eps(&aeb);
        assert!(!e.has_eps());
        let accepted: Vec<_> = all_words("ab", 3)
            .into_iter()
            .filter(|w| nfa_member(&e, w).unwrap())
            .collect();
        assert_eq!(accepted, vec![word("ab")]);
    }

    #[test]
    fn member_examples() {
        let n = abc_star();
        assert!(nfa_member(&n, &word("abc")).unwrap());
        assert!(!nfa_member(&n, &word("cba")).unwrap());
        let eps_start = nfa("a", 2, &[1], &[(0, '_', 1)]);
        assert!(nfa_member(&eps_start, &[]).unwrap());
        assert_eq!(
            nfa_member(&n, &word("d")),
            Err(NfaError::UnknownSymbol("d".into()))
        );
    }

    #[test]
    fn determinize_examples() {
        // {a, ab}
        let n = nfa("ab", 4, &[1, 3], &[(0, 'a', 1), (0, 'a', 2), (2, 'b', 3)]);
        let d = determinize(&n);
        let accepted: Vec<_> = all_words("ab", 3)
            .into_iter()
            .filter(|w| d.accepts(w).unwrap())
            .collect();
        assert_eq!(accepted, vec![word("a"), word("ab")]);

        let plain = abc_star();
        let d = determinize(&plain);
        for w in all_words("abc", 4) {
            assert_eq!(d.accepts(&w).unwrap(), nfa_member(&plain, &w).unwrap());
        }

        let none = nfa("ab", 2, &[], &[(0, 'a', 1)]);
        let d = determinize(&none);
        assert!(all_words("ab", 3).iter().all(|w| !d.accepts(w).unwrap()));
    }

    #[test]
    fn complement_examples() {
        let a_star = nfa("ab", 1, &[0], &[(0, 'a', 0)]);
        let c = complement(&determinize(&a_star));
        assert!(c.accepts(&word("b")).unwrap());
        assert!(!c.accepts(&word("aa")).unwrap());

        let all = nfa("ab", 1, &[0], &[(0, 'a', 0), (0, 'b', 0)]);
        let c = complement(&determinize(&all));
        for w in ["", "a", "ab"] {
            assert!(!c.accepts(&word(w)).unwrap());
        }

        let d = determinize(&abc_star());
        let cc = complement(&complement(&d));
        for w in all_words("abc", 4) {
            assert_eq!(cc.accepts(&w).unwrap(), d.accepts(&w).unwrap());
        }
    }

    #[test]
    fn single_word_examples() {
        let alphabet = word("abc");
        let n = single_word_nfa(&UntimedWord(word("abc")), &alphabet).unwrap();
        assert_eq!(n.num_states(), 4);
        let accepted: Vec<_> = all_words("abc", 4)
            .into_iter()
            .filter(|w| nfa_member(&n, w).unwrap())
            .collect();
        assert_eq!(accepted, vec![word("abc")]);

        let e = single_word_nfa(&UntimedWord::empty(), &alphabet).unwrap();
        assert_eq!(e.num_states(), 1);
        assert!(e.is_accepting(e.start()));

        let aa = single_word_nfa(&UntimedWord(word("aa")), &alphabet).unwrap();
        assert_eq!(aa.num_states(), 3);
        assert!(!nfa_member(&aa, &word("a")).unwrap());
    }

    #[test]
    fn extend_alphabet_keeps_language() {
        let n = abc_star().extend_alphabet(word("d"));
        assert_eq!(n.alphabet().len(), 4);
        assert!(nfa_member(&n, &word("abc")).unwrap());
        assert!(!nfa_member(&n, &word("d")).unwrap());
    }

    #[test]
    fn validate_nfa_errors() {
        let mut raw = RawNfa {
            alphabet: vec!["a".into()],
            states: vec!["p".into()],
            start: Some("p".into()),
            accepting: vec![],
            transitions: vec![("p".into(), Some("a".into()), "q".into())],
        };
        assert_eq!(validate_nfa(&raw), Err(NfaError::UnknownState("q".into())));
        raw.transitions = vec![("p".into(), Some("b".into()), "p".into())];
        assert_eq!(validate_nfa(&raw), Err(NfaError::UnknownSymbol("b".into())));
        raw.transitions.clear();
        raw.start = None;
        assert_eq!(validate_nfa(&raw), Err(NfaError::MissingStart));
        raw.start = Some("p".into());
        raw.states.push("p".into());
        assert_eq!(
            validate_nfa(&raw),
            Err(NfaError::DuplicateState("p".into()))
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_nfa() -> impl Strategy<Value = Nfa> {
            (1usize..5).prop_flat_map(|n| {
                let edge = (0..n, prop_oneof![Just('a'), Just('b'), Just('_')], 0..n);
                (
                    Just(n),
                    prop::collection::vec(any::<bool>(), n),
                    prop::collection::vec(edge, 0..10),
                )
                    .prop_map(|(n, acc, edges)| {
                        let acc: Vec<usize> = (0..n).filter(|&i| acc[i]).collect();
                        nfa("ab", n, &acc, &edges)
                    })
            })
        }

        proptest! {
            #[test]
            fn determinize_agrees(n in arb_nfa()) {
                let d = determinize(&n);
                prop_assert!(d.num_states() <= 1usize << n.num_states());
                let c = complement(&d);
                let e = eliminate_eps(&n);
                for w in all_words("ab", 5) {
                    let m = nfa_member(&n, &w).unwrap();
                    prop_assert_eq!(d.accepts(&w).unwrap(), m);
                    prop_assert_eq!(c.accepts(&w).unwrap(), !m);
                    prop_assert_eq!(nfa_member(&e, &w).unwrap(), m);
                }
            }
        }
    }
}
