//! Rational tree expressions, finite tree automata and tree-language
//! equation systems.
//!
//! The crate turns any finite tree automaton into a rational tree
//! expression denoting its accepted language. The automaton becomes an
//! equation system with one equation per state; recursive equations are
//! factorized around a fresh nullary symbol and contracted with the tree
//! form of Arden's lemma (`E = F ·_c E + G` has least solution
//! `F^{*_c} ·_c G`); solved equations are substituted away until every
//! variable has a variable-free right-hand side.
//!
//! Languages are infinite in general. Every semantic question in this
//! crate is asked up to a height bound: [`langset`] computes exact
//! height-bounded slices, which is what the tests and the `equiv` command
//! use to compare expressions and automata.

pub mod cli;
pub mod eqsys;
pub mod error;
pub mod fta;
pub mod langset;
pub(crate) mod lexer;
pub mod rexpr;
pub mod trees;

pub use eqsys::{EquationSystem, Order, Solution, SolveTrace, Step};
pub use error::{Error, Position, Result};
pub use fta::{Transition, TreeAutomaton};
pub use langset::FiniteTreeSet;
pub use rexpr::{Context, RExpr};
pub use trees::{RankedAlphabet, Symbol, Tree};
