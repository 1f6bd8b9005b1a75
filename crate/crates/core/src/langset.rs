//! Finite tree languages and height-bounded language operations.
//!
//! Infinite languages are never materialized. Every operation here either
//! works on explicit finite sets or computes the exact slice of a language
//! made of the trees of height at most some bound `H`. Truncation commutes
//! with symbol application, union and c-products, so bounded results can be
//! chained without losing any tree that fits under the bound.

use std::collections::BTreeSet;
use std::fmt;

use crate::trees::{cartesian, substitute_leaves, Symbol, Tree};

/// Equality and hashing look at the members only; the bound is metadata.
#[derive(Clone, Default)]
pub struct FiniteTreeSet {
    members: BTreeSet<Tree>,
    /// When set, this is the slice of a possibly larger language made of
    /// its trees of height at most `bound`.
    bound: Option<u32>,
}

fn min_bound(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl FiniteTreeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_set(members: BTreeSet<Tree>) -> Self {
        FiniteTreeSet {
            members,
            bound: None,
        }
    }

    pub fn singleton(t: Tree) -> Self {
        Self::from_set(BTreeSet::from([t]))
    }

    pub fn leaf(c: &Symbol) -> Self {
        Self::singleton(Tree::from_parts(c.clone(), Vec::new()))
    }

    pub fn members(&self) -> &BTreeSet<Tree> {
        &self.members
    }

    pub fn into_members(self) -> BTreeSet<Tree> {
        self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tree> + '_ {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &Tree) -> bool {
        self.members.contains(t)
    }

    pub fn bound(&self) -> Option<u32> {
        self.bound
    }

    pub fn is_subset(&self, other: &FiniteTreeSet) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Whether the nullary symbol `c` occurs in some member.
    pub fn mentions(&self, c: &str) -> bool {
        self.members.iter().any(|t| t.contains_leaf(c))
    }

    pub fn max_height(&self) -> u32 {
        self.members.iter().next_back().map_or(0, Tree::height)
    }

    /// Keeps the trees of height at most `h` and records the bound.
    pub fn truncate(&self, h: u32) -> FiniteTreeSet {
        let bound = min_bound(self.bound, Some(h)).unwrap();
        FiniteTreeSet {
            members: self
                .members
                .iter()
                .take_while(|t| t.height() <= bound)
                .cloned()
                .collect(),
            bound: Some(bound),
        }
    }

    fn with_bound(mut self, bound: Option<u32>) -> Self {
        if let Some(h) = bound {
            if self.max_height() > h {
                self.members.retain(|t| t.height() <= h);
            }
        }
        self.bound = bound;
        self
    }

    pub fn union(&self, other: &FiniteTreeSet) -> FiniteTreeSet {
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        FiniteTreeSet::from_set(members).with_bound(min_bound(self.bound, other.bound))
    }

    pub fn difference(&self, other: &FiniteTreeSet) -> FiniteTreeSet {
        FiniteTreeSet::from_set(self.members.difference(&other.members).cloned().collect())
    }

    /// The canonically smallest tree in the symmetric difference, i.e. a
    /// shortest witness that the two sets differ.
    pub fn first_difference(&self, other: &FiniteTreeSet) -> Option<Tree> {
        let a = self.members.difference(&other.members).next();
        let b = other.members.difference(&self.members).next();
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y).clone()),
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    /// `f(L_1, ..., L_n)`: every tree `f(t_1, ..., t_n)` with `t_i ∈ L_i`.
    pub fn apply_symbol(f: &Symbol, args: &[FiniteTreeSet]) -> FiniteTreeSet {
        let options: Vec<Vec<Tree>> = args
            .iter()
            .map(|s| s.members.iter().cloned().collect())
            .collect();
        let out = FiniteTreeSet::from_set(cartesian(f, &options).into_iter().collect());
        let bound = args.iter().fold(None, |acc, s| min_bound(acc, s.bound));
        out.with_bound(bound.map(|h| h + 1))
    }

    /// `f(L_1, ..., L_n)` restricted to trees of height at most `h`.
    pub fn apply_symbol_bounded(f: &Symbol, args: &[FiniteTreeSet], h: u32) -> FiniteTreeSet {
        if h == 0 || (h == 1 && !args.is_empty()) {
            return FiniteTreeSet::new().with_bound(Some(h));
        }
        let options: Vec<Vec<Tree>> = args
            .iter()
            .map(|s| {
                s.members
                    .iter()
                    .take_while(|t| t.height() < h)
                    .cloned()
                    .collect()
            })
            .collect();
        let bound = args
            .iter()
            .filter_map(|s| s.bound.map(|b| b + 1))
            .fold(h, u32::min);
        FiniteTreeSet::from_set(cartesian(f, &options).into_iter().collect())
            .with_bound(Some(bound))
    }

    /// `L ·_c L'`: the union over `t ∈ L` of `t ·_c L'`.
    pub fn c_product(&self, c: &str, other: &FiniteTreeSet) -> FiniteTreeSet {
        self.c_product_bounded_raw(c, other, u32::MAX)
            .with_bound(min_bound(self.bound, other.bound))
    }

    /// `L ·_c L'` restricted to trees of height at most `h`.
    pub fn c_product_bounded(&self, c: &str, other: &FiniteTreeSet, h: u32) -> FiniteTreeSet {
        let bound = min_bound(min_bound(self.bound, other.bound), Some(h));
        self.c_product_bounded_raw(c, other, h).with_bound(bound)
    }

    fn c_product_bounded_raw(&self, c: &str, other: &FiniteTreeSet, h: u32) -> FiniteTreeSet {
        let mut out = BTreeSet::new();
        for t in self.members.iter().take_while(|t| t.height() <= h) {
            out.extend(substitute_leaves(t, c, &other.members, h));
        }
        FiniteTreeSet::from_set(out)
    }

    /// The iterated product `L^{n,c}`: `{c}` for `n = 0`, then
    /// `L^{n+1,c} = L^{n,c} ∪ L ·_c L^{n,c}`.
    pub fn iter_product(&self, c: &Symbol, n: usize) -> FiniteTreeSet {
        let mut current = FiniteTreeSet::leaf(c);
        for _ in 0..n {
            current = current.union(&self.c_product(c, &current));
        }
        current
    }

    /// The c-closure `L^{*_c}` restricted to trees of height at most `h`.
    pub fn closure_bounded(&self, c: &Symbol, h: u32) -> FiniteTreeSet {
        self.closure_iterates(c, h).pop().unwrap()
    }

    /// The distinct truncated iterates `L^{0,c}|h, L^{1,c}|h, ...`; the
    /// last one is the bounded closure.
    ///
    /// A tree of height `k` in the closure already belongs to `L^{k,c}`,
    /// so the sequence stabilizes after at most `h + 1` steps.
    pub fn closure_iterates(&self, c: &Symbol, h: u32) -> Vec<FiniteTreeSet> {
        let h = h.max(1);
        let bound = min_bound(self.bound, Some(h));
        let base = self.truncate(h);
        let mut iterates = vec![FiniteTreeSet::leaf(c).with_bound(bound)];
        for _ in 0..2 * h {
            let current = iterates.last().unwrap();
            let step = base.c_product_bounded(c, current, h);
            let next = current.union(&step).with_bound(bound);
            if next.members == current.members {
                return iterates;
            }
            iterates.push(next);
        }
        panic!(
            "bounded closure over `{c}` did not stabilize within {} steps",
            2 * h
        );
    }
}

impl PartialEq for FiniteTreeSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for FiniteTreeSet {}

impl std::hash::Hash for FiniteTreeSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state)
    }
}

impl FromIterator<Tree> for FiniteTreeSet {
    fn from_iter<I: IntoIterator<Item = Tree>>(iter: I) -> Self {
        FiniteTreeSet::from_set(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a FiniteTreeSet {
    type Item = &'a Tree;
    type IntoIter = std::collections::btree_set::Iter<'a, Tree>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl fmt::Display for FiniteTreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FiniteTreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if let Some(h) = self.bound {
            write!(f, "|<={h}")?;
        }
        Ok(())
    }
}
