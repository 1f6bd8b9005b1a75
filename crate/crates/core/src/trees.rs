//! Ranked alphabets and finite ordered trees.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Position, Result};
use crate::langset::FiniteTreeSet;
use crate::lexer::{self, Cursor, Tok};

/// Symbol names are shared, immutable strings.
pub type Symbol = Arc<str>;

/// A graded alphabet: every symbol carries a fixed arity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankedAlphabet {
    symbols: BTreeMap<Symbol, usize>,
}

impl RankedAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet from `(name, arity)` pairs.
    pub fn from_symbols<'a, I>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, usize)>,
    {
        let mut alphabet = RankedAlphabet::new();
        for (name, arity) in symbols {
            alphabet.insert(name, arity, None)?;
        }
        Ok(alphabet)
    }

    pub(crate) fn insert(&mut self, name: &str, arity: usize, pos: Option<Position>) -> Result<()> {
        if !lexer::is_name(name) {
            return Err(Error::InvalidName {
                name: name.to_string(),
                pos,
            });
        }
        match self.symbols.get(name) {
            Some(&existing) if existing != arity => Err(Error::ConflictingArity {
                name: name.to_string(),
                first: existing,
                second: arity,
                pos,
            }),
            Some(_) => Ok(()),
            None => {
                self.symbols.insert(Arc::from(name), arity);
                Ok(())
            }
        }
    }

    /// Returns a new alphabet extended with `name` of the given arity.
    pub fn with_symbol(&self, name: &str, arity: usize) -> Result<Self> {
        let mut next = self.clone();
        next.insert(name, arity, None)?;
        Ok(next)
    }

    /// Parses the `f/2 h/1 a/0` listing used by the file formats.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_at(text, Position::default())
    }

    pub(crate) fn parse_at(text: &str, start: Position) -> Result<Self> {
        let mut cur = Cursor::new(text, start)?;
        let mut alphabet = RankedAlphabet::new();
        while !cur.at_end() {
            let (name, pos) = cur.name("symbol name")?;
            cur.expect(&Tok::Slash)?;
            let (arity, apos) = cur.word("arity")?;
            let arity: usize = arity
                .parse()
                .map_err(|_| Error::syntax(apos, format!("invalid arity `{arity}`")))?;
            if alphabet.contains(&name) {
                return Err(Error::syntax(
                    pos,
                    format!("symbol `{name}` declared twice"),
                ));
            }
            alphabet.insert(&name, arity, Some(pos))?;
        }
        Ok(alphabet)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn is_nullary(&self, name: &str) -> bool {
        self.arity(name) == Some(0)
    }

    /// The interned handle for `name`, if it belongs to the alphabet.
    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.symbols.get_key_value(name).map(|(k, _)| k.clone())
    }

    /// Σ_n: the symbols of arity exactly `n`, in name order.
    pub fn symbols_of_arity(&self, n: usize) -> impl Iterator<Item = &Symbol> + '_ {
        self.symbols
            .iter()
            .filter(move |(_, &a)| a == n)
            .map(|(s, _)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, usize)> + '_ {
        self.symbols.iter().map(|(s, &a)| (s, a))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.values().copied().max().unwrap_or(0)
    }

    /// Union of two alphabets; fails when a name has two arities.
    pub fn merge(&self, other: &RankedAlphabet) -> Result<Self> {
        let mut out = self.clone();
        for (name, arity) in other.iter() {
            out.insert(name, arity, None)?;
        }
        Ok(out)
    }

    /// Builds `name(children)`, checking the arity.
    pub fn tree(&self, name: &str, children: Vec<Tree>) -> Result<Tree> {
        let symbol = self.symbol(name).ok_or_else(|| Error::UnknownSymbol {
            name: name.to_string(),
            pos: None,
        })?;
        let expected = self.symbols[name];
        if expected != children.len() {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected,
                found: children.len(),
                pos: None,
            });
        }
        Ok(Tree::from_parts(symbol, children))
    }

    /// Shorthand for a nullary tree.
    pub fn leaf(&self, name: &str) -> Result<Tree> {
        self.tree(name, Vec::new())
    }

    /// Parses the `name(child,...)` tree syntax.
    pub fn parse_tree(&self, text: &str) -> Result<Tree> {
        let mut cur = Cursor::new(text, Position::default())?;
        let tree = self.parse_tree_from(&mut cur)?;
        cur.finish()?;
        Ok(tree)
    }

    pub(crate) fn parse_tree_from(&self, cur: &mut Cursor) -> Result<Tree> {
        let (name, pos) = cur.name("symbol name")?;
        let mut children = Vec::new();
        if cur.eat(&Tok::LParen) && !cur.eat(&Tok::RParen) {
            loop {
                children.push(self.parse_tree_from(cur)?);
                if cur.eat(&Tok::Comma) {
                    continue;
                }
                cur.expect(&Tok::RParen)?;
                break;
            }
        }
        self.tree(&name, children).map_err(|e| with_pos(e, pos))
    }

    /// Checks that every node of `t` uses a symbol of this alphabet with
    /// its declared arity.
    pub fn check(&self, t: &Tree) -> Result<()> {
        match self.arity(t.symbol()) {
            None => Err(Error::UnknownSymbol {
                name: t.symbol().to_string(),
                pos: None,
            }),
            Some(a) if a != t.children().len() => Err(Error::ArityMismatch {
                symbol: t.symbol().to_string(),
                expected: a,
                found: t.children().len(),
                pos: None,
            }),
            Some(_) => t.children().iter().try_for_each(|c| self.check(c)),
        }
    }
}

pub(crate) fn with_pos(err: Error, at: Position) -> Error {
    match err {
        Error::UnknownSymbol { name, pos: None } => Error::UnknownSymbol {
            name,
            pos: Some(at),
        },
        Error::ArityMismatch {
            symbol,
            expected,
            found,
            pos: None,
        } => Error::ArityMismatch {
            symbol,
            expected,
            found,
            pos: Some(at),
        },
        Error::NotNullary { symbol, pos: None } => Error::NotNullary {
            symbol,
            pos: Some(at),
        },
        other => other,
    }
}

impl fmt::Display for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Higher arities first, mirroring the usual `f/2 h/1 a/0` listing.
        let mut entries: Vec<_> = self.iter().collect();
        entries.sort_by(|(n1, a1), (n2, a2)| a2.cmp(a1).then_with(|| n1.cmp(n2)));
        for (i, (name, arity)) in entries.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{name}/{arity}")?;
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Node {
    symbol: Symbol,
    children: Vec<Tree>,
    height: u32,
    size: u32,
}

/// An immutable finite ordered tree. Cloning is cheap: subtrees are shared.
///
/// Trees are totally ordered by height, then node count, then root symbol
/// name, then children left to right. Sets of trees therefore list the
/// shortest trees first.
#[derive(Clone, PartialEq, Eq)]
pub struct Tree(Arc<Node>);

impl Tree {
    /// Builds a node without consulting an alphabet. Callers guarantee the
    /// arity is consistent, which holds whenever the children are taken
    /// from a symbol application that was itself checked.
    pub(crate) fn from_parts(symbol: Symbol, children: Vec<Tree>) -> Tree {
        let height = 1 + children.iter().map(Tree::height).max().unwrap_or(0);
        let size = 1 + children.iter().map(Tree::size).sum::<u32>();
        Tree(Arc::new(Node {
            symbol,
            children,
            height,
            size,
        }))
    }

    pub fn symbol(&self) -> &str {
        &self.0.symbol
    }

    pub(crate) fn symbol_handle(&self) -> &Symbol {
        &self.0.symbol
    }

    pub fn children(&self) -> &[Tree] {
        &self.0.children
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_empty()
    }

    pub fn is_leaf_named(&self, name: &str) -> bool {
        self.is_leaf() && self.symbol() == name
    }

    /// Leaves have height 1; an inner node is one more than its tallest child.
    pub fn height(&self) -> u32 {
        self.0.height
    }

    /// Number of nodes.
    pub fn size(&self) -> u32 {
        self.0.size
    }

    /// Whether the nullary symbol `c` labels some leaf of the tree.
    pub fn contains_leaf(&self, c: &str) -> bool {
        if self.is_leaf() {
            return self.symbol() == c;
        }
        self.children().iter().any(|t| t.contains_leaf(c))
    }

    /// All distinct subtrees, the tree itself included.
    pub fn subtrees(&self) -> FiniteTreeSet {
        let mut acc = BTreeSet::new();
        self.collect_subtrees(&mut acc);
        FiniteTreeSet::from_set(acc)
    }

    fn collect_subtrees(&self, acc: &mut BTreeSet<Tree>) {
        if acc.insert(self.clone()) {
            for child in self.children() {
                child.collect_subtrees(acc);
            }
        }
    }

    /// The nullary symbols labelling leaves of the tree.
    pub fn leaf_symbols(&self) -> BTreeSet<Symbol> {
        let mut acc = BTreeSet::new();
        self.collect_leaves(&mut acc);
        acc
    }

    fn collect_leaves(&self, acc: &mut BTreeSet<Symbol>) {
        if self.is_leaf() {
            acc.insert(self.0.symbol.clone());
        }
        for child in self.children() {
            child.collect_leaves(acc);
        }
    }

    /// `t ·_c L`: every `c` leaf is replaced, independently, by any member
    /// of `replacements`. Nothing is produced when `c` occurs but
    /// `replacements` is empty.
    pub fn c_product(&self, c: &str, replacements: &FiniteTreeSet) -> FiniteTreeSet {
        let mut out = BTreeSet::new();
        for t in substitute_leaves(self, c, replacements.members(), u32::MAX) {
            out.insert(t);
        }
        FiniteTreeSet::from_set(out)
    }
}

/// Enumerates `t ·_c L` restricted to results of height at most `budget`.
///
/// `members` must iterate in canonical (height-first) order so that the
/// replacements fitting under a budget form a prefix.
pub(crate) fn substitute_leaves(
    t: &Tree,
    c: &str,
    members: &BTreeSet<Tree>,
    budget: u32,
) -> Vec<Tree> {
    if t.height() > budget {
        // A result is never shorter than the tree it was built from.
        return Vec::new();
    }
    if t.is_leaf() {
        if t.symbol() == c {
            return members
                .iter()
                .take_while(|m| m.height() <= budget)
                .cloned()
                .collect();
        }
        return vec![t.clone()];
    }
    if !t.contains_leaf(c) {
        return vec![t.clone()];
    }
    let mut per_child = Vec::with_capacity(t.children().len());
    for child in t.children() {
        let options = substitute_leaves(child, c, members, budget - 1);
        if options.is_empty() {
            return Vec::new();
        }
        per_child.push(options);
    }
    cartesian(t.symbol_handle(), &per_child)
}

/// All `f(t_1, ..., t_n)` with `t_i` drawn from `options[i]`.
pub(crate) fn cartesian(symbol: &Symbol, options: &[Vec<Tree>]) -> Vec<Tree> {
    if options.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let total: usize = options.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; options.len()];
    loop {
        let children = idx
            .iter()
            .zip(options)
            .map(|(&i, opts)| opts[i].clone())
            .collect();
        out.push(Tree::from_parts(symbol.clone(), children));
        // odometer increment, rightmost fastest
        let mut k = options.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.height()
            .cmp(&other.height())
            .then_with(|| self.size().cmp(&other.size()))
            .then_with(|| self.symbol().cmp(other.symbol()))
            .then_with(|| self.children().cmp(other.children()))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())?;
        if !self.is_leaf() {
            f.write_str("(")?;
            for (i, child) in self.children().iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{child}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
