use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trees::RankedAlphabet;

use super::{Transition, TreeAutomaton};

/// Size limits for generated automata.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomFtaConfig {
    pub max_states: usize,
    pub max_transitions: usize,
    pub max_arity: usize,
}

impl Default for RandomFtaConfig {
    fn default() -> Self {
        RandomFtaConfig {
            max_states: 4,
            max_transitions: 6,
            max_arity: 2,
        }
    }
}

const POOL: [(&str, usize); 5] = [("a", 0), ("b", 0), ("h", 1), ("g", 2), ("f", 2)];

/// A random trimmed automaton with at least one state and one final
/// state. Draws are repeated until the trimmed result qualifies.
pub fn random_automaton<R: Rng + ?Sized>(rng: &mut R, config: &RandomFtaConfig) -> TreeAutomaton {
    let max_states = config.max_states.max(1);
    let max_transitions = config.max_transitions.max(1);
    let pool: Vec<(&str, usize)> = POOL
        .iter()
        .copied()
        .filter(|&(_, n)| n <= config.max_arity)
        .collect();
    let leaves: Vec<&str> = pool.iter().filter(|p| p.1 == 0).map(|p| p.0).collect();

    loop {
        let mut symbols: Vec<(&str, usize)> = vec![(leaves[rng.gen_range(0..leaves.len())], 0)];
        for &s in &pool {
            if !symbols.contains(&s) && rng.gen_bool(0.5) {
                symbols.push(s);
            }
        }
        let alphabet =
            RankedAlphabet::from_symbols(symbols.iter().copied()).expect("pool names are valid");

        let n = rng.gen_range(1..=max_states);
        let m = rng.gen_range(1..=max_transitions);
        let mut transitions = Vec::with_capacity(m);
        let leaf = symbols[0].0;
        transitions.push(Transition::new(leaf, vec![], rng.gen_range(1..=n)));
        while transitions.len() < m {
            let &(f, arity) = symbols.choose(rng).unwrap();
            let args = (0..arity).map(|_| rng.gen_range(1..=n)).collect();
            transitions.push(Transition::new(f, args, rng.gen_range(1..=n)));
        }
        let finals: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();

        let a = TreeAutomaton::new(alphabet, n, finals, transitions)
            .expect("generated automata are well formed")
            .trim_accessible();
        if a.num_states() > 0 && !a.finals().is_empty() {
            return a;
        }
    }
}

/// [`random_automaton`] driven by a ChaCha8 stream seeded with `seed`.
pub fn random_automaton_seeded(seed: u64, config: &RandomFtaConfig) -> TreeAutomaton {
    random_automaton(&mut ChaCha8Rng::seed_from_u64(seed), config)
}
