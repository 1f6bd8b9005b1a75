//! Bottom-up finite tree automata.
//!
//! States are the dense ids `1..=n`; the names used in a file are kept
//! only for printing.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::eqsys::EquationSystem;
use crate::error::{Error, Result};
use crate::langset::FiniteTreeSet;
use crate::rexpr::RExpr;
use crate::trees::{RankedAlphabet, Symbol, Tree};

mod format;
mod random;

pub use random::{random_automaton, random_automaton_seeded, RandomFtaConfig};

pub type State = usize;

/// `(f, q_1 ... q_m, q)`. Ordered by symbol name, then argument states,
/// then target.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub symbol: Symbol,
    pub args: Vec<State>,
    pub target: State,
}

impl Transition {
    pub fn new(symbol: &str, args: Vec<State>, target: State) -> Self {
        Transition {
            symbol: Arc::from(symbol),
            args,
            target,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAutomaton {
    alphabet: RankedAlphabet,
    names: Vec<String>,
    finals: BTreeSet<State>,
    transitions: BTreeSet<Transition>,
}

impl TreeAutomaton {
    /// An automaton with states `1..=states`, named by their ids.
    pub fn new<I, T>(
        alphabet: RankedAlphabet,
        states: usize,
        finals: I,
        transitions: T,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = State>,
        T: IntoIterator<Item = Transition>,
    {
        let names = (1..=states).map(|q| q.to_string()).collect();
        Self::with_names(alphabet, names, finals, transitions)
    }

    pub fn with_names<I, T>(
        alphabet: RankedAlphabet,
        names: Vec<String>,
        finals: I,
        transitions: T,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = State>,
        T: IntoIterator<Item = Transition>,
    {
        let n = names.len();
        let bad_state = |q: State| Error::Automaton {
            message: format!("state {q} out of range 1..={n}"),
            pos: None,
        };
        let finals: BTreeSet<State> = finals.into_iter().collect();
        if let Some(&q) = finals.iter().find(|&&q| q == 0 || q > n) {
            return Err(bad_state(q));
        }
        let transitions: BTreeSet<Transition> = transitions.into_iter().collect();
        for t in &transitions {
            let expected = alphabet
                .arity(&t.symbol)
                .ok_or_else(|| Error::UnknownSymbol {
                    name: t.symbol.to_string(),
                    pos: None,
                })?;
            if expected != t.args.len() {
                return Err(Error::ArityMismatch {
                    symbol: t.symbol.to_string(),
                    expected,
                    found: t.args.len(),
                    pos: None,
                });
            }
            if let Some(&q) = t.args.iter().chain([&t.target]).find(|&&q| q == 0 || q > n) {
                return Err(bad_state(q));
            }
        }
        Ok(TreeAutomaton {
            alphabet,
            names,
            finals,
            transitions,
        })
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = State> {
        1..=self.names.len()
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.names[q - 1]
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    /// The same automaton with another set of final states.
    pub fn with_finals<I: IntoIterator<Item = State>>(&self, finals: I) -> Result<Self> {
        Self::with_names(
            self.alphabet.clone(),
            self.names.clone(),
            finals,
            self.transitions.iter().cloned(),
        )
    }

    fn by_symbol(&self) -> HashMap<&str, Vec<&Transition>> {
        let mut index: HashMap<&str, Vec<&Transition>> = HashMap::new();
        for t in &self.transitions {
            index.entry(&t.symbol).or_default().push(t);
        }
        index
    }

    /// `δ(t)`: the states some run reaches at the root of `t`.
    pub fn output(&self, t: &Tree) -> BTreeSet<State> {
        let index = self.by_symbol();
        let mut memo = HashMap::new();
        self.output_memo(t, &index, &mut memo)
    }

    fn output_memo(
        &self,
        t: &Tree,
        index: &HashMap<&str, Vec<&Transition>>,
        memo: &mut HashMap<Tree, BTreeSet<State>>,
    ) -> BTreeSet<State> {
        if let Some(known) = memo.get(t) {
            return known.clone();
        }
        let children: Vec<BTreeSet<State>> = t
            .children()
            .iter()
            .map(|c| self.output_memo(c, index, memo))
            .collect();
        let states: BTreeSet<State> = index
            .get(t.symbol())
            .into_iter()
            .flatten()
            .filter(|tr| {
                tr.args.len() == children.len()
                    && tr
                        .args
                        .iter()
                        .zip(&children)
                        .all(|(q, set)| set.contains(q))
            })
            .map(|tr| tr.target)
            .collect();
        memo.insert(t.clone(), states.clone());
        states
    }

    pub fn accepts(&self, t: &Tree) -> bool {
        !self.output(t).is_disjoint(&self.finals)
    }

    /// `L(q)` restricted to height `h`, for every state `q` (index `q - 1`).
    ///
    /// Level `i` holds the trees of height at most `i`; it is obtained from
    /// level `i - 1` by one application of every transition.
    pub fn down_languages(&self, h: u32) -> Vec<FiniteTreeSet> {
        let n = self.num_states();
        let mut levels = vec![FiniteTreeSet::new().truncate(0); n];
        for i in 1..=h.max(1) {
            let mut next = vec![FiniteTreeSet::new().truncate(i); n];
            for t in &self.transitions {
                let args: Vec<FiniteTreeSet> =
                    t.args.iter().map(|&q| levels[q - 1].clone()).collect();
                if args.iter().any(FiniteTreeSet::is_empty) {
                    continue;
                }
                let produced = FiniteTreeSet::apply_symbol_bounded(&t.symbol, &args, i);
                next[t.target - 1] = next[t.target - 1].union(&produced);
            }
            levels = next;
        }
        levels
    }

    /// The accepted trees of height at most `h`.
    pub fn enumerate_accepted(&self, h: u32) -> FiniteTreeSet {
        let levels = self.down_languages(h);
        self.finals
            .iter()
            .fold(FiniteTreeSet::new().truncate(h.max(1)), |acc, &q| {
                acc.union(&levels[q - 1])
            })
    }

    /// Drops every state with an empty down language, renumbering the
    /// survivors densely in their original order.
    pub fn trim_accessible(&self) -> TreeAutomaton {
        let mut live: BTreeSet<State> = BTreeSet::new();
        loop {
            let before = live.len();
            for t in &self.transitions {
                if t.args.iter().all(|q| live.contains(q)) {
                    live.insert(t.target);
                }
            }
            if live.len() == before {
                break;
            }
        }
        let renumber: HashMap<State, State> =
            live.iter().enumerate().map(|(i, &q)| (q, i + 1)).collect();
        TreeAutomaton {
            alphabet: self.alphabet.clone(),
            names: live.iter().map(|&q| self.names[q - 1].clone()).collect(),
            finals: self
                .finals
                .iter()
                .filter_map(|q| renumber.get(q).copied())
                .collect(),
            transitions: self
                .transitions
                .iter()
                .filter(|t| live.contains(&t.target) && t.args.iter().all(|q| live.contains(q)))
                .map(|t| Transition {
                    symbol: t.symbol.clone(),
                    args: t.args.iter().map(|q| renumber[q]).collect(),
                    target: renumber[&t.target],
                })
                .collect(),
        }
    }

    /// Variable names `E1 .. En`, prefixed further with `_` while any of
    /// them clashes with the alphabet.
    pub fn variable_names(&self) -> Vec<Symbol> {
        let mut prefix = String::from("E");
        loop {
            let names: Vec<String> = self.states().map(|q| format!("{prefix}{q}")).collect();
            if names.iter().all(|v| !self.alphabet.contains(v)) {
                return names.iter().map(|v| Arc::from(v.as_str())).collect();
            }
            prefix.push('_');
        }
    }

    /// The system with `E_q = Σ f(E_{q_1}, ..., E_{q_m})` over the
    /// transitions into `q`, summands in transition order.
    pub fn to_equation_system(&self) -> EquationSystem {
        let vars = self.variable_names();
        let equations = self
            .states()
            .map(|q| {
                RExpr::sum_of(self.transitions.iter().filter(|t| t.target == q).map(|t| {
                    RExpr::Apply(
                        t.symbol.clone(),
                        t.args
                            .iter()
                            .map(|&p| RExpr::Var(vars[p - 1].clone()))
                            .collect(),
                    )
                }))
            })
            .collect();
        EquationSystem::new(self.alphabet.clone(), vars, equations)
            .expect("extracted systems are well formed")
    }
}
