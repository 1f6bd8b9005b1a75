//! The canonical resolution of closed systems.
//!
//! Variables are eliminated one at a time. A self-recursive equation is
//! factorized around a fresh symbol and contracted; the now
//! non-recursive equation is substituted into the equations still
//! pending. Once every variable is eliminated, the deferred right-hand
//! sides are completed by back-substitution in reverse order.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fta::TreeAutomaton;
use crate::rexpr::{fresh_symbol, normalize, RExpr};
use crate::trees::{RankedAlphabet, Symbol};

use super::EquationSystem;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Order {
    /// Highest index first.
    #[default]
    Descending,
    Ascending,
    /// Pending variable with the fewest occurrences in pending equations;
    /// ties go to the highest index.
    MinOccurrences,
}

impl FromStr for Order {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "desc" => Ok(Order::Descending),
            "asc" => Ok(Order::Ascending),
            "min-occ" => Ok(Order::MinOccurrences),
            other => Err(format!(
                "unknown order `{other}` (expected desc, asc or min-occ)"
            )),
        }
    }
}

/// One transformation of the working system. Indices are 0-based
/// positions in the variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// `F_k` substituted into every pending equation; `E_k` is eliminated.
    Substitute(usize),
    Factorize(usize, Symbol),
    Contract(usize),
    /// Solved right-hand sides substituted into the deferred `F_k`.
    BackSubstitute(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveTrace {
    pub steps: Vec<Step>,
    pub normalize: bool,
}

struct Working {
    system: EquationSystem,
    eliminated: BTreeSet<usize>,
    normalize: bool,
}

impl Working {
    fn apply(&mut self, step: &Step) -> Result<()> {
        let next = match step {
            Step::Factorize(k, fresh) => {
                // the factorized shape must survive until Contract
                self.system = self.system.factorize_equation(*k, fresh)?;
                return Ok(());
            }
            Step::Contract(k) => self.system.contract_equation(*k)?,
            Step::Substitute(k) => {
                let done = &self.eliminated;
                let next = self.system.substitute_into(*k, |j| !done.contains(&j));
                self.eliminated.insert(*k);
                next
            }
            Step::BackSubstitute(k) => {
                let sys = &self.system;
                let solved = sys.as_map();
                let rhs = sys
                    .equation(*k)
                    .substitute_with(&|v: &Symbol| solved.get(v).filter(|e| e.is_variable_free()));
                sys.with_equation(*k, rhs)?
            }
        };
        self.system = if self.normalize {
            next.normalized()
        } else {
            next
        };
        Ok(())
    }
}

impl SolveTrace {
    /// The working system after each step, starting from `x`.
    pub fn replay_systems(&self, x: &EquationSystem) -> Result<Vec<EquationSystem>> {
        let mut w = Working {
            system: x.clone(),
            eliminated: BTreeSet::new(),
            normalize: self.normalize,
        };
        let mut out = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            w.apply(step)?;
            out.push(w.system.clone());
        }
        Ok(out)
    }

    /// The system the trace leads to from `x`.
    pub fn replay(&self, x: &EquationSystem) -> Result<EquationSystem> {
        Ok(self.replay_systems(x)?.pop().unwrap_or_else(|| x.clone()))
    }

    /// One human-readable line per step.
    pub fn lines(&self, variables: &[Symbol]) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| match s {
                Step::Substitute(k) => format!("substitute {}", variables[*k]),
                Step::Factorize(k, c) => format!("factorize {} with {c}", variables[*k]),
                Step::Contract(k) => format!("contract {}", variables[*k]),
                Step::BackSubstitute(k) => format!("back-substitute {}", variables[*k]),
            })
            .collect()
    }
}

/// A solved system: every right-hand side is variable-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub system: EquationSystem,
    pub trace: SolveTrace,
}

impl Solution {
    pub fn expressions(&self) -> &[RExpr] {
        self.system.equations()
    }

    /// The input alphabet extended with the fresh symbols.
    pub fn alphabet(&self) -> &RankedAlphabet {
        self.system.alphabet()
    }

    /// The fresh symbols introduced by factorization, in trace order.
    pub fn fresh_symbols(&self) -> Vec<Symbol> {
        self.trace
            .steps
            .iter()
            .filter_map(|s| match s {
                Step::Factorize(_, c) => Some(c.clone()),
                _ => None,
            })
            .collect()
    }
}

fn occurrences(e: &RExpr, var: &str) -> usize {
    let mut n = 0;
    e.visit(&mut |node| {
        if matches!(node, RExpr::Var(v) if &**v == var) {
            n += 1;
        }
    });
    n
}

fn pick(order: Order, system: &EquationSystem, pending: &BTreeSet<usize>) -> usize {
    match order {
        Order::Descending => *pending.last().unwrap(),
        Order::Ascending => *pending.first().unwrap(),
        Order::MinOccurrences => *pending
            .iter()
            .rev()
            .min_by_key(|&&k| {
                let var = &system.variables()[k];
                pending
                    .iter()
                    .map(|&j| occurrences(system.equation(j), var))
                    .sum::<usize>()
            })
            .unwrap(),
    }
}

/// [`solve_with`] in descending order with normalization.
pub fn solve(x: &EquationSystem) -> Result<Solution> {
    solve_with(x, Order::Descending, true)
}

/// Solves a closed system, returning the least solution reached by the
/// contractions together with the trace that produced it.
pub fn solve_with(x: &EquationSystem, order: Order, normalize: bool) -> Result<Solution> {
    let report = x.closedness();
    if let Some(w) = report.witness {
        return Err(Error::NotClosed(w.to_string()));
    }
    let mut w = Working {
        system: x.clone(),
        eliminated: BTreeSet::new(),
        normalize,
    };
    let mut steps = Vec::new();
    let mut run = |w: &mut Working, step: Step| -> Result<()> {
        w.apply(&step)?;
        steps.push(step);
        Ok(())
    };

    let mut pending: BTreeSet<usize> = (0..x.len()).collect();
    let mut eliminated = Vec::with_capacity(x.len());
    while !pending.is_empty() {
        let k = pick(order, &w.system, &pending);
        let var = w.system.variables()[k].clone();
        if w.system.equation(k).mentions_var(&var) {
            let fresh = fresh_symbol(k + 1, w.system.alphabet(), w.system.variables());
            run(&mut w, Step::Factorize(k, fresh.as_str().into()))?;
            run(&mut w, Step::Contract(k))?;
        }
        run(&mut w, Step::Substitute(k))?;
        pending.remove(&k);
        eliminated.push(k);
    }
    for &k in eliminated.iter().rev() {
        if !w.system.equation(k).is_variable_free() {
            run(&mut w, Step::BackSubstitute(k))?;
        }
    }
    assert!(w.system.is_variable_free(), "solver left a variable behind");
    Ok(Solution {
        system: w.system,
        trace: SolveTrace { steps, normalize },
    })
}

/// An expression for the language accepted by `a`, with the solution of
/// its associated system.
pub fn automaton_to_expression_with(
    a: &TreeAutomaton,
    order: Order,
    normalize_output: bool,
) -> Result<(RExpr, Solution)> {
    let solution = solve_with(&a.to_equation_system(), order, normalize_output)?;
    let sum = RExpr::sum_of(
        a.finals()
            .iter()
            .map(|&q| solution.expressions()[q - 1].clone()),
    );
    let sum = if normalize_output {
        normalize(&sum)
    } else {
        sum
    };
    Ok((sum, solution))
}

/// `Σ_{q final} E_q` for the default solution of the system of `a`.
pub fn automaton_to_expression(a: &TreeAutomaton) -> Result<RExpr> {
    Ok(automaton_to_expression_with(a, Order::Descending, true)?.0)
}
