//! The guess-tuple product of an ADB with a regular specification.
//!
//! A product state tracks one location of the ADB, `M + 1` specification
//! states (one slot per time point from now to `M` units ahead, where `M` is
//! the maximal delay) and `M` guesses for the states the specification is in
//! when each future slot starts. An output with delay `t` advances slot `t`.
//! A tick is only allowed when the current slot ended where the next slot was
//! guessed to begin; it then shifts slots and guesses left and opens a fresh
//! slot whose start is guessed at the same time. Accepting states need an
//! accepting ADB location, an accepting final slot, and every slot ending
//! where its successor was guessed to start.
//!
//! The untimed language of the product is the intersection of the ADB's
//! untimed language with the specification's language.

use crate::automaton::{Adb, AdbBuilder, Loc};
use crate::regular::{eliminate_eps, Nfa};
use crate::words::Label;

use super::{AnalysisError, Limits};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState {
    pub loc: Loc,
    /// Specification state per slot; `slots[j]` is `j` time units ahead.
    pub slots: Vec<usize>,
    /// `guesses[j]` is the guessed start state of slot `j + 1`.
    pub guesses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductNode {
    Initial,
    State(ProductState),
}

/// Product edges carry the ADB label taken; `None` marks the ε-edges that
/// leave the initial node and do not correspond to an ADB transition.
pub type ProductEdge = Option<Label>;

pub struct GuessProduct<'a> {
    adb: &'a Adb,
    spec: Nfa,
    width: usize,
}

impl<'a> GuessProduct<'a> {
    /// Fails when the ADB outputs symbols the specification does not know.
    pub fn new(adb: &'a Adb, spec: &Nfa, limits: &Limits) -> Result<Self, AnalysisError> {
        let missing: Vec<String> = adb
            .alphabet()
            .iter()
            .filter(|s| spec.letter_index(s).is_none())
            .map(|s| s.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(AnalysisError::IncompatibleAlphabet(missing));
        }
        let width = usize::try_from(adb.max_delay())
            .ok()
            .filter(|&m| m < limits.max_states)
            .ok_or(AnalysisError::StateLimit(limits.max_states))?;
        Ok(GuessProduct {
            adb,
            spec: eliminate_eps(spec),
            width,
        })
    }

    pub fn max_delay(&self) -> usize {
        self.width
    }

    /// The ε-free specification the product runs against.
    pub fn spec(&self) -> &Nfa {
        &self.spec
    }

    pub fn is_accepting(&self, node: &ProductNode) -> bool {
        let ProductNode::State(s) = node else {
            return false;
        };
        let m = self.width;
        self.adb.is_accepting(s.loc)
            && self.spec.is_accepting(s.slots[m])
            && (0..m).all(|j| s.slots[j] == s.guesses[j])
    }

    pub fn successors<'s>(
        &'s self,
        node: &ProductNode,
    ) -> Box<dyn Iterator<Item = (ProductEdge, ProductNode)> + 's> {
        match node {
            ProductNode::Initial => Box::new(self.initial_fan()),
            ProductNode::State(s) => Box::new(self.state_successors(s).into_iter()),
        }
    }

    /// One ε-edge per guess tuple, in lexicographic order, generated on demand.
    fn initial_fan(&self) -> impl Iterator<Item = (ProductEdge, ProductNode)> + '_ {
        let n = self.spec.num_states();
        let m = self.width;
        let total = if n == 0 {
            0
        } else {
            n.checked_pow(m as u32).unwrap_or(usize::MAX)
        };
        (0..total).map(move |mut code| {
            let mut guesses = vec![0; m];
            for g in guesses.iter_mut().rev() {
                *g = code % n;
                code /= n;
            }
            let mut slots = Vec::with_capacity(m + 1);
            slots.push(self.spec.start());
            slots.extend_from_slice(&guesses);
            let state = ProductState {
                loc: self.adb.start(),
                slots,
                guesses,
            };
            (None, ProductNode::State(state))
        })
    }

    fn state_successors(&self, s: &ProductState) -> Vec<(ProductEdge, ProductNode)> {
        let mut out = Vec::new();
        for t in self.adb.outgoing(s.loc) {
            match &t.label {
                Label::Eps => {
                    let next = ProductState {
                        loc: t.dst,
                        ..s.clone()
                    };
                    out.push((Some(Label::Eps), ProductNode::State(next)));
                }
                Label::Out { symbol, delay } => {
                    let slot = *delay as usize;
                    let letter = self
                        .spec
                        .letter_index(symbol)
                        .expect("alphabet inclusion checked on construction");
                    for r in self.spec.successors(s.slots[slot], Some(letter)) {
                        let mut next = ProductState {
                            loc: t.dst,
                            ..s.clone()
                        };
                        next.slots[slot] = r;
                        out.push((Some(t.label.clone()), ProductNode::State(next)));
                    }
                }
                Label::Tick => {
                    if self.width == 0 {
                        let next = ProductState {
                            loc: t.dst,
                            ..s.clone()
                        };
                        out.push((Some(Label::Tick), ProductNode::State(next)));
                    } else if s.slots[0] == s.guesses[0] {
                        for fresh in 0..self.spec.num_states() {
                            let mut slots = s.slots[1..].to_vec();
                            slots.push(fresh);
                            let mut guesses = s.guesses[1..].to_vec();
                            guesses.push(fresh);
                            let next = ProductState {
                                loc: t.dst,
                                slots,
                                guesses,
                            };
                            out.push((Some(Label::Tick), ProductNode::State(next)));
                        }
                    }
                }
            }
        }
        out
    }

    fn node_name(&self, node: &ProductNode) -> String {
        match node {
            ProductNode::Initial => "init".to_string(),
            ProductNode::State(s) => {
                let names = |v: &[usize]| {
                    v.iter()
                        .map(|&q| self.spec.state_name(q))
                        .collect::<Vec<_>>()
                        .join(",")
                };
                format!(
                    "({};{};{})",
                    self.adb.name(s.loc),
                    names(&s.slots),
                    names(&s.guesses)
                )
            }
        }
    }
}

/// Materializes the product reachable from its fresh initial location as an
/// ADB whose untimed language is `ulan(adb) ∩ L(spec)`.
pub fn intersect_regular(adb: &Adb, spec: &Nfa, limits: &Limits) -> Result<Adb, AnalysisError> {
    let product = GuessProduct::new(adb, spec, limits)?;
    let (nodes, edges) = super::search::explore(
        ProductNode::Initial,
        |n| product.successors(n),
        limits.max_states,
    )?;
    let mut b = AdbBuilder::new();
    for s in adb.alphabet() {
        b.add_symbol(s.clone());
    }
    let locs: Vec<Loc> = nodes
        .iter()
        .map(|n| b.fresh_location(&product.node_name(n)))
        .collect();
    b.set_start(locs[0]);
    for (node, &loc) in nodes.iter().zip(&locs) {
        if product.is_accepting(node) {
            b.accept(loc);
        }
    }
    for (src, edge, dst) in edges {
        b.add_transition(locs[src], edge.unwrap_or(Label::Eps), locs[dst]);
    }
    Ok(b.build().expect("product of valid automata"))
}
