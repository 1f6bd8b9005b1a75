//! Equation systems `E_j = F_j` over tree languages, their bounded
//! solutions, and the transformations the solver is built from.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lexer::is_name;
use crate::rexpr::{closedness_under, denote_bounded, factorize, ClosednessReport, Context, RExpr};
use crate::trees::{RankedAlphabet, Symbol};

mod format;
mod solve;

pub use solve::{
    automaton_to_expression, automaton_to_expression_with, solve, solve_with, Order, Solution,
    SolveTrace, Step,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    alphabet: RankedAlphabet,
    variables: Vec<Symbol>,
    equations: Vec<RExpr>,
}

/// `<_X`, its transitive closure, and the equations caught in a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionRelation {
    /// `(j, k)` whenever `E_j` occurs in `F_k`.
    pub direct: BTreeSet<(usize, usize)>,
    pub closure: BTreeSet<(usize, usize)>,
    /// `E_k` occurs in `F_k`.
    pub self_recursive: BTreeSet<usize>,
    /// `E_k ⪯ E_k`, directly or through other equations.
    pub cyclic: BTreeSet<usize>,
}

impl RecursionRelation {
    /// Some pair of variables depends on each other.
    pub fn is_recursive(&self) -> bool {
        !self.cyclic.is_empty()
    }
}

fn system_error(message: impl Into<String>) -> Error {
    Error::System {
        message: message.into(),
        pos: None,
    }
}

impl EquationSystem {
    /// Builds the system `variables[j] = equations[j]`, checking that every
    /// symbol is in `alphabet` with its arity and every variable is declared.
    pub fn new(
        alphabet: RankedAlphabet,
        variables: Vec<Symbol>,
        equations: Vec<RExpr>,
    ) -> Result<Self> {
        if variables.len() != equations.len() {
            return Err(system_error(format!(
                "{} variables but {} equations",
                variables.len(),
                equations.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for v in &variables {
            if !is_name(v) {
                return Err(Error::InvalidName {
                    name: v.to_string(),
                    pos: None,
                });
            }
            if alphabet.contains(v) {
                return Err(Error::NamespaceClash {
                    name: v.to_string(),
                    pos: None,
                });
            }
            if !seen.insert(v.clone()) {
                return Err(system_error(format!("variable `{v}` declared twice")));
            }
        }
        for e in &equations {
            for (name, n) in e.symbols() {
                match alphabet.arity(&name) {
                    None => {
                        return Err(Error::UnknownSymbol {
                            name: name.to_string(),
                            pos: None,
                        })
                    }
                    Some(m) if m != n => {
                        return Err(Error::ArityMismatch {
                            symbol: name.to_string(),
                            expected: m,
                            found: n,
                            pos: None,
                        })
                    }
                    Some(_) => {}
                }
            }
            if let Some(v) = e.vars().into_iter().find(|v| !seen.contains(v)) {
                return Err(system_error(format!("undeclared variable `{v}`")));
            }
        }
        Ok(EquationSystem {
            alphabet,
            variables,
            equations,
        })
    }

    /// Convenience constructor from `(variable, right-hand side)` texts,
    /// inferring symbol arities when `alphabet` lacks them.
    pub fn from_strs(alphabet: &RankedAlphabet, equations: &[(&str, &str)]) -> Result<Self> {
        let vars: Vec<Symbol> = equations.iter().map(|(v, _)| Arc::from(*v)).collect();
        let names: Vec<&str> = equations.iter().map(|(v, _)| *v).collect();
        let mut sigma = alphabet.clone();
        let mut rhs = Vec::with_capacity(equations.len());
        for (_, text) in equations {
            let (e, extended) = crate::rexpr::parse_inferring(text, &sigma, &names)?;
            sigma = extended;
            rhs.push(e);
        }
        EquationSystem::new(sigma, vars, rhs)
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn variables(&self) -> &[Symbol] {
        &self.variables
    }

    pub fn equations(&self) -> &[RExpr] {
        &self.equations
    }

    pub fn equation(&self, k: usize) -> &RExpr {
        &self.equations[k]
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| &**v == name)
    }

    /// Replaces `F_k`.
    pub fn with_equation(&self, k: usize, rhs: RExpr) -> Result<Self> {
        let mut equations = self.equations.clone();
        equations[k] = rhs;
        EquationSystem::new(self.alphabet.clone(), self.variables.clone(), equations)
    }

    /// Same system over a larger alphabet.
    pub fn with_alphabet(&self, alphabet: RankedAlphabet) -> Result<Self> {
        EquationSystem::new(alphabet, self.variables.clone(), self.equations.clone())
    }

    pub fn is_variable_free(&self) -> bool {
        self.equations.iter().all(RExpr::is_variable_free)
    }

    /// The symbols some operator of some equation is subscripted with.
    pub fn operator_symbols(&self) -> BTreeSet<Symbol> {
        self.equations
            .iter()
            .flat_map(crate::rexpr::ops_of)
            .map(|(_, c)| c)
            .collect()
    }

    /// Every right-hand side must be closed with respect to the operator
    /// symbols of the whole system. The witness names its equation.
    pub fn closedness(&self) -> ClosednessReport {
        let bounded = self.operator_symbols();
        let mut free = BTreeSet::new();
        let mut witness = None;
        for (v, e) in self.variables.iter().zip(&self.equations) {
            let r = closedness_under(e, &bounded);
            free.extend(r.free_symbols);
            if witness.is_none() {
                witness = r.witness.map(|mut w| {
                    w.equation = Some(v.clone());
                    w
                });
            }
        }
        ClosednessReport {
            closed: witness.is_none(),
            bounded_symbols: bounded,
            free_symbols: free,
            witness,
        }
    }

    /// `free(X)`.
    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        self.closedness().free_symbols
    }

    fn context_of(&self, candidate: &Context) -> Result<()> {
        match self.variables.iter().find(|v| candidate.get(v).is_none()) {
            Some(v) => Err(Error::UnboundVariable(v.to_string())),
            None => Ok(()),
        }
    }

    /// Whether `candidate[E_k]` and `F_k` agree up to height `h`.
    pub fn is_equation_solution_bounded(
        &self,
        k: usize,
        candidate: &Context,
        h: u32,
    ) -> Result<bool> {
        self.context_of(candidate)?;
        let lhs = candidate.get(&self.variables[k]).unwrap().truncate(h);
        Ok(denote_bounded(&self.equations[k], candidate, h)? == lhs)
    }

    /// Whether `candidate` solves every equation up to height `h`.
    pub fn is_solution_bounded(&self, candidate: &Context, h: u32) -> Result<bool> {
        for k in 0..self.len() {
            if !self.is_equation_solution_bounded(k, candidate, h)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Substitutes `F_k` for `E_k` in the equations listed in `targets`.
    pub(crate) fn substitute_into(
        &self,
        k: usize,
        targets: impl Fn(usize) -> bool,
    ) -> EquationSystem {
        let var = &self.variables[k];
        let fk = &self.equations[k];
        let equations = self
            .equations
            .iter()
            .enumerate()
            .map(|(j, e)| {
                if j != k && targets(j) {
                    e.substitute(var, fk)
                } else {
                    e.clone()
                }
            })
            .collect();
        EquationSystem {
            alphabet: self.alphabet.clone(),
            variables: self.variables.clone(),
            equations,
        }
    }

    /// `X^k`: `F_k` substituted for `E_k` in every other equation.
    pub fn substitute_system(&self, k: usize) -> EquationSystem {
        self.substitute_into(k, |_| true)
    }

    /// Drops equation `k`; `E_k` may not occur in any right-hand side.
    pub fn remove_equation(&self, k: usize) -> Result<EquationSystem> {
        let var = &self.variables[k];
        if self.equations.iter().any(|e| e.mentions_var(var)) {
            return Err(system_error(format!("`{var}` still occurs in the system")));
        }
        let mut variables = self.variables.clone();
        let mut equations = self.equations.clone();
        variables.remove(k);
        equations.remove(k);
        Ok(EquationSystem {
            alphabet: self.alphabet.clone(),
            variables,
            equations,
        })
    }

    pub fn recursion_relation(&self) -> RecursionRelation {
        let n = self.len();
        let mut direct = BTreeSet::new();
        for (k, e) in self.equations.iter().enumerate() {
            for v in e.vars() {
                direct.insert((self.var_index(&v).unwrap(), k));
            }
        }
        let mut reach = vec![vec![false; n]; n];
        for &(j, k) in &direct {
            reach[j][k] = true;
        }
        for m in 0..n {
            let via = reach[m].clone();
            for row in reach.iter_mut() {
                if row[m] {
                    for (cell, &step) in row.iter_mut().zip(&via) {
                        *cell |= step;
                    }
                }
            }
        }
        let closure: BTreeSet<(usize, usize)> = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .filter(|&(j, k)| reach[j][k])
            .collect();
        RecursionRelation {
            self_recursive: (0..n).filter(|&k| direct.contains(&(k, k))).collect(),
            cyclic: (0..n).filter(|&k| reach[k][k]).collect(),
            direct,
            closure,
        }
    }

    /// Rewrites `F_k` as `F'_{E_k←fresh} ·_fresh E_k + F''`, adding
    /// `fresh` to the alphabet.
    pub fn factorize_equation(&self, k: usize, fresh: &str) -> Result<EquationSystem> {
        let (rhs, alphabet) = factorize(
            &self.equations[k],
            &self.variables[k],
            fresh,
            &self.alphabet,
            &self.variables,
        )?;
        let mut equations = self.equations.clone();
        equations[k] = rhs;
        Ok(EquationSystem {
            alphabet,
            variables: self.variables.clone(),
            equations,
        })
    }

    /// `X_k`: replaces `E_k = F' ·_c E_k + F''` by `E_k = F'^{*_c} ·_c F''`.
    pub fn contract_equation(&self, k: usize) -> Result<EquationSystem> {
        let var = &self.variables[k];
        let violation = |reason: &str| Error::ShapeViolation {
            var: var.to_string(),
            reason: reason.to_string(),
        };
        let (head, rest) = match &self.equations[k] {
            RExpr::Sum(l, r) => (&**l, (**r).clone()),
            other => (other, RExpr::Zero),
        };
        let RExpr::Prod(f1, c, target) = head else {
            return Err(violation("expected a product as first summand"));
        };
        if !matches!(&**target, RExpr::Var(v) if v == var) {
            return Err(violation(
                "the product's right operand must be the variable itself",
            ));
        }
        if f1.mentions_var(var) || rest.mentions_var(var) {
            return Err(violation(
                "the variable occurs outside the factorized position",
            ));
        }
        let rhs = RExpr::Prod(
            Box::new(RExpr::Star(f1.clone(), c.clone())),
            c.clone(),
            Box::new(rest),
        );
        let mut equations = self.equations.clone();
        equations[k] = rhs;
        Ok(EquationSystem {
            alphabet: self.alphabet.clone(),
            variables: self.variables.clone(),
            equations,
        })
    }

    /// Every right-hand side normalized.
    pub fn normalized(&self) -> EquationSystem {
        EquationSystem {
            alphabet: self.alphabet.clone(),
            variables: self.variables.clone(),
            equations: self.equations.iter().map(crate::rexpr::normalize).collect(),
        }
    }

    /// Evaluates variable-free right-hand sides into a context.
    pub fn denote_solved(&self, h: u32) -> Result<Context> {
        let empty = Context::new();
        self.variables
            .iter()
            .zip(&self.equations)
            .map(|(v, e)| Ok((v.clone(), denote_bounded(e, &empty, h)?)))
            .collect()
    }

    /// Right-hand sides keyed by variable.
    pub fn as_map(&self) -> BTreeMap<Symbol, RExpr> {
        self.variables
            .iter()
            .cloned()
            .zip(self.equations.iter().cloned())
            .collect()
    }
}
