//! Syntactic analyses and rewrites: operator sets, closedness, k-split,
//! factorization around a fresh symbol, and safe normalization.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::trees::{RankedAlphabet, Symbol};

use super::RExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    /// `·_c`
    Product,
    /// `*_c`
    Closure,
}

/// `op(E)`: every product and closure operator of `e`, by subscript.
pub fn ops_of(e: &RExpr) -> BTreeSet<(OpKind, Symbol)> {
    let mut acc = BTreeSet::new();
    e.visit(&mut |n| match n {
        RExpr::Prod(_, c, _) => {
            acc.insert((OpKind::Product, c.clone()));
        }
        RExpr::Star(_, c) => {
            acc.insert((OpKind::Closure, c.clone()));
        }
        _ => {}
    });
    acc
}

/// The symbols some operator of `e` is subscripted with.
pub(crate) fn operator_symbols(e: &RExpr) -> BTreeSet<Symbol> {
    ops_of(e).into_iter().map(|(_, c)| c).collect()
}

/// A leaf occurrence of a nullary symbol, located by the child indices
/// leading to it from the root of the expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub symbol: Symbol,
    pub path: Vec<usize>,
    /// Variable whose equation holds the occurrence, for system checks.
    pub equation: Option<Symbol>,
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unbounded occurrence of `{}` at ", self.symbol)?;
        if self.path.is_empty() {
            f.write_str("root")?;
        } else {
            let steps: Vec<String> = self.path.iter().map(usize::to_string).collect();
            write!(f, "path {}", steps.join("."))?;
        }
        if let Some(eq) = &self.equation {
            write!(f, " in the equation of {eq}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosednessReport {
    pub closed: bool,
    /// Symbols subscripting some product or closure.
    pub bounded_symbols: BTreeSet<Symbol>,
    /// Nullary symbols occurring as leaves that no operator binds.
    pub free_symbols: BTreeSet<Symbol>,
    /// First unbounded occurrence of a bounded symbol, in pre-order.
    pub witness: Option<Occurrence>,
}

/// Checks that every leaf occurrence of a bounded symbol `c` sits inside
/// an operand of some `·_c` or `*_c`.
pub fn closedness(e: &RExpr) -> ClosednessReport {
    closedness_under(e, &operator_symbols(e))
}

/// Like [`closedness`], but with the bounded symbols supplied by the
/// caller; an equation system is closed when each right-hand side is
/// closed under the operator symbols of the whole system.
pub fn closedness_under(e: &RExpr, bounded: &BTreeSet<Symbol>) -> ClosednessReport {
    let mut walk = ScopeWalk {
        bounded,
        scopes: Vec::new(),
        path: Vec::new(),
        free: BTreeSet::new(),
        witness: None,
    };
    walk.visit(e);
    ClosednessReport {
        closed: walk.witness.is_none(),
        bounded_symbols: bounded.clone(),
        free_symbols: walk.free,
        witness: walk.witness,
    }
}

struct ScopeWalk<'a> {
    bounded: &'a BTreeSet<Symbol>,
    scopes: Vec<Symbol>,
    path: Vec<usize>,
    free: BTreeSet<Symbol>,
    witness: Option<Occurrence>,
}

impl ScopeWalk<'_> {
    fn child(&mut self, idx: usize, e: &RExpr) {
        self.path.push(idx);
        self.visit(e);
        self.path.pop();
    }

    fn visit(&mut self, e: &RExpr) {
        match e {
            RExpr::Zero | RExpr::Var(_) => {}
            RExpr::Apply(s, args) if args.is_empty() => {
                if !self.bounded.contains(s) {
                    self.free.insert(s.clone());
                } else if !self.scopes.contains(s) && self.witness.is_none() {
                    self.witness = Some(Occurrence {
                        symbol: s.clone(),
                        path: self.path.clone(),
                        equation: None,
                    });
                }
            }
            RExpr::Apply(_, args) => {
                for (i, a) in args.iter().enumerate() {
                    self.child(i, a);
                }
            }
            RExpr::Sum(l, r) => {
                self.child(0, l);
                self.child(1, r);
            }
            RExpr::Prod(l, c, r) => {
                self.scopes.push(c.clone());
                self.child(0, l);
                self.child(1, r);
                self.scopes.pop();
            }
            RExpr::Star(inner, c) => {
                self.scopes.push(c.clone());
                self.child(0, inner);
                self.scopes.pop();
            }
        }
    }
}

fn plus(l: RExpr, r: RExpr) -> RExpr {
    match (l, r) {
        (RExpr::Zero, r) => r,
        (l, RExpr::Zero) => l,
        (l, r) => RExpr::sum(l, r),
    }
}

/// Splits the summands of `f` into those mentioning the variable `x`
/// and the rest, keeping the nesting of the sum. Zero summands are
/// dropped, so a side with nothing in it is `0`.
pub fn k_split(f: &RExpr, x: &str) -> (RExpr, RExpr) {
    match f {
        RExpr::Sum(l, r) => {
            let (l1, l2) = k_split(l, x);
            let (r1, r2) = k_split(r, x);
            (plus(l1, r1), plus(l2, r2))
        }
        other if other.mentions_var(x) => (other.clone(), RExpr::Zero),
        other => (RExpr::Zero, other.clone()),
    }
}

/// Rewrites `F` as `F'_{x←fresh} ·_fresh x + F''` where
/// `(F', F'') = k_split(F, x)`, and registers `fresh` as a nullary symbol.
pub fn factorize(
    f: &RExpr,
    x: &str,
    fresh: &str,
    alphabet: &RankedAlphabet,
    variables: &[Symbol],
) -> Result<(RExpr, RankedAlphabet)> {
    if alphabet.contains(fresh) || variables.iter().any(|v| &**v == fresh) {
        return Err(Error::FreshCollision(fresh.to_string()));
    }
    let extended = alphabet
        .with_symbol(fresh, 0)
        .map_err(|_| Error::FreshCollision(fresh.to_string()))?;
    let (recursive, rest) = k_split(f, x);
    let head = match recursive {
        RExpr::Zero => RExpr::Zero,
        r => RExpr::Prod(
            Box::new(r.substitute_symbol(x, fresh)),
            Arc::from(fresh),
            Box::new(RExpr::var(x)),
        ),
    };
    Ok((plus(head, rest), extended))
}

/// The fresh symbol used when factorizing the `k`-th variable (1-based):
/// `x<k>`, suffixed `_1`, `_2`, ... until it clashes with nothing.
pub fn fresh_symbol(k: usize, alphabet: &RankedAlphabet, variables: &[Symbol]) -> String {
    let taken = |s: &str| alphabet.contains(s) || variables.iter().any(|v| &**v == s);
    let base = format!("x{k}");
    if !taken(&base) {
        return base;
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|s| !taken(s))
        .unwrap()
}

/// Applies the language-preserving rewrites `0+E → E`, `E+0 → E`,
/// `0·_c E → 0`, `0^{*_c} → c` and `c·_c E → E`, bottom-up. Idempotent.
pub fn normalize(e: &RExpr) -> RExpr {
    match e {
        RExpr::Zero | RExpr::Var(_) => e.clone(),
        RExpr::Apply(f, args) => RExpr::Apply(f.clone(), args.iter().map(normalize).collect()),
        RExpr::Sum(l, r) => plus(normalize(l), normalize(r)),
        RExpr::Prod(l, c, r) => {
            let l = normalize(l);
            if l.is_zero() {
                return RExpr::Zero;
            }
            let r = normalize(r);
            if l.is_symbol(c) {
                return r;
            }
            RExpr::Prod(Box::new(l), c.clone(), Box::new(r))
        }
        RExpr::Star(inner, c) => {
            let inner = normalize(inner);
            if inner.is_zero() {
                return RExpr::Apply(c.clone(), Vec::new());
            }
            RExpr::Star(Box::new(inner), c.clone())
        }
    }
}
