//! Rational tree expressions with variables.
//!
//! Grammar, loosest to tightest:
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('.[' name ']' factor)*     left-associative c-product
//! factor := atom ('*[' name ']')*              postfix c-closure
//! atom   := '0' | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::langset::FiniteTreeSet;
use crate::trees::Symbol;

mod denote;
mod display;
mod parse;
mod transform;

pub use denote::denote_bounded;
pub use parse::{parse, parse_inferring};
pub(crate) use parse::{parse_at, parse_inferring_at};
pub use transform::{
    closedness, closedness_under, factorize, fresh_symbol, k_split, normalize, ops_of,
    ClosednessReport, Occurrence, OpKind,
};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum RExpr {
    /// Denotes the empty language.
    Zero,
    Var(Symbol),
    /// `f(E_1, ..., E_n)`; a nullary symbol is an `Apply` with no arguments.
    Apply(Symbol, Vec<RExpr>),
    Sum(Box<RExpr>, Box<RExpr>),
    /// `E_1 ·_c E_2`
    Prod(Box<RExpr>, Symbol, Box<RExpr>),
    /// `E^{*_c}`
    Star(Box<RExpr>, Symbol),
}

impl RExpr {
    pub fn var(name: &str) -> RExpr {
        RExpr::Var(Arc::from(name))
    }

    /// A nullary symbol.
    pub fn sym(name: &str) -> RExpr {
        RExpr::Apply(Arc::from(name), Vec::new())
    }

    pub fn apply(name: &str, args: Vec<RExpr>) -> RExpr {
        RExpr::Apply(Arc::from(name), args)
    }

    pub fn sum(l: RExpr, r: RExpr) -> RExpr {
        RExpr::Sum(Box::new(l), Box::new(r))
    }

    pub fn prod(l: RExpr, c: &str, r: RExpr) -> RExpr {
        RExpr::Prod(Box::new(l), Arc::from(c), Box::new(r))
    }

    pub fn star(e: RExpr, c: &str) -> RExpr {
        RExpr::Star(Box::new(e), Arc::from(c))
    }

    /// Left-nested sum of `terms`, or `0` when empty.
    pub fn sum_of<I: IntoIterator<Item = RExpr>>(terms: I) -> RExpr {
        terms.into_iter().reduce(RExpr::sum).unwrap_or(RExpr::Zero)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RExpr::Zero)
    }

    /// Whether this is exactly the nullary symbol `c`.
    pub fn is_symbol(&self, c: &str) -> bool {
        matches!(self, RExpr::Apply(s, args) if args.is_empty() && &**s == c)
    }

    pub fn mentions_var(&self, x: &str) -> bool {
        match self {
            RExpr::Zero => false,
            RExpr::Var(v) => &**v == x,
            RExpr::Apply(_, args) => args.iter().any(|a| a.mentions_var(x)),
            RExpr::Sum(l, r) | RExpr::Prod(l, _, r) => l.mentions_var(x) || r.mentions_var(x),
            RExpr::Star(e, _) => e.mentions_var(x),
        }
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut acc = BTreeSet::new();
        self.visit(&mut |e| {
            if let RExpr::Var(v) = e {
                acc.insert(v.clone());
            }
        });
        acc
    }

    pub fn is_variable_free(&self) -> bool {
        let mut free = true;
        self.visit(&mut |e| free &= !matches!(e, RExpr::Var(_)));
        free
    }

    /// Every symbol name used by the expression, with its arity. Operator
    /// subscripts count as nullary symbols.
    pub fn symbols(&self) -> BTreeMap<Symbol, usize> {
        let mut acc = BTreeMap::new();
        self.visit(&mut |e| match e {
            RExpr::Apply(f, args) => {
                acc.insert(f.clone(), args.len());
            }
            RExpr::Prod(_, c, _) | RExpr::Star(_, c) => {
                acc.insert(c.clone(), 0);
            }
            _ => {}
        });
        acc
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Pre-order walk over every node.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a RExpr)) {
        f(self);
        match self {
            RExpr::Zero | RExpr::Var(_) => {}
            RExpr::Apply(_, args) => args.iter().for_each(|a| a.visit(f)),
            RExpr::Sum(l, r) | RExpr::Prod(l, _, r) => {
                l.visit(f);
                r.visit(f);
            }
            RExpr::Star(e, _) => e.visit(f),
        }
    }

    /// `E_{x←F}`: replaces every occurrence of the variable `x` by `F`.
    /// Variables are free names, so no capture can happen.
    pub fn substitute(&self, x: &str, replacement: &RExpr) -> RExpr {
        self.substitute_with(&|v| (&**v == x).then_some(replacement))
    }

    /// Replaces every variable for which `lookup` returns an expression.
    pub fn substitute_with<'r>(&self, lookup: &impl Fn(&Symbol) -> Option<&'r RExpr>) -> RExpr {
        match self {
            RExpr::Zero => RExpr::Zero,
            RExpr::Var(v) => match lookup(v) {
                Some(e) => e.clone(),
                None => self.clone(),
            },
            RExpr::Apply(f, args) => RExpr::Apply(
                f.clone(),
                args.iter().map(|a| a.substitute_with(lookup)).collect(),
            ),
            RExpr::Sum(l, r) => RExpr::Sum(
                Box::new(l.substitute_with(lookup)),
                Box::new(r.substitute_with(lookup)),
            ),
            RExpr::Prod(l, c, r) => RExpr::Prod(
                Box::new(l.substitute_with(lookup)),
                c.clone(),
                Box::new(r.substitute_with(lookup)),
            ),
            RExpr::Star(e, c) => RExpr::Star(Box::new(e.substitute_with(lookup)), c.clone()),
        }
    }

    /// Replaces the variable `x` by the nullary symbol `a`.
    pub fn substitute_symbol(&self, x: &str, a: &str) -> RExpr {
        self.substitute(x, &RExpr::sym(a))
    }
}

impl fmt::Debug for RExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Languages bound to variables when evaluating an expression.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    bindings: BTreeMap<Symbol, FiniteTreeSet>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, x: &str, language: FiniteTreeSet) -> &mut Self {
        self.bindings.insert(Arc::from(x), language);
        self
    }

    pub fn with(mut self, x: &str, language: FiniteTreeSet) -> Self {
        self.bind(x, language);
        self
    }

    pub fn get(&self, x: &str) -> Option<&FiniteTreeSet> {
        self.bindings.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &FiniteTreeSet)> + '_ {
        self.bindings.iter()
    }
}

impl FromIterator<(Symbol, FiniteTreeSet)> for Context {
    fn from_iter<I: IntoIterator<Item = (Symbol, FiniteTreeSet)>>(iter: I) -> Self {
        Context {
            bindings: iter.into_iter().collect(),
        }
    }
}
