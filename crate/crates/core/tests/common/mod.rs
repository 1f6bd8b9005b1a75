//! Oracles and random generators shared by the integration tests and the
//! acceptance harness. The oracles decide membership by brute force over
//! every tree up to a height and never call the bounded operations of
//! the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tree_arden::rexpr::{denote_bounded, Context, RExpr};
use tree_arden::{EquationSystem, FiniteTreeSet, RankedAlphabet, Symbol, Tree, TreeAutomaton};

pub mod systems;

pub use laws::Outcome;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sym(s: &str) -> Symbol {
    Arc::from(s)
}

// ---------------------------------------------------------------- oracles

fn odometer(symbol: &str, sigma: &RankedAlphabet, options: &[Vec<Tree>]) -> Vec<Tree> {
    let mut out = Vec::new();
    if options.iter().any(Vec::is_empty) {
        return out;
    }
    let mut idx = vec![0usize; options.len()];
    loop {
        let children = idx
            .iter()
            .zip(options)
            .map(|(&i, o)| o[i].clone())
            .collect();
        out.push(sigma.tree(symbol, children).unwrap());
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Every tree over `sigma` of height at most `h`, sorted canonically.
pub fn all_trees(sigma: &RankedAlphabet, h: u32) -> Vec<Tree> {
    let mut level: Vec<Tree> = Vec::new();
    for _ in 0..h {
        let mut next = Vec::new();
        for (f, n) in sigma.iter() {
            let options = vec![level.clone(); n];
            next.extend(odometer(f, sigma, &options));
        }
        level = next;
    }
    let mut all: Vec<Tree> = level
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    all.sort();
    all
}

/// `t ·_c L` without any height bound, by direct recursion.
pub fn naive_tree_product(
    sigma: &RankedAlphabet,
    t: &Tree,
    c: &str,
    l: &BTreeSet<Tree>,
) -> BTreeSet<Tree> {
    if t.is_leaf_named(c) {
        return l.clone();
    }
    if t.is_leaf() {
        return BTreeSet::from([t.clone()]);
    }
    let options: Vec<Vec<Tree>> = t
        .children()
        .iter()
        .map(|u| naive_tree_product(sigma, u, c, l).into_iter().collect())
        .collect();
    odometer(t.symbol(), sigma, &options).into_iter().collect()
}

pub fn naive_product(
    sigma: &RankedAlphabet,
    l1: &BTreeSet<Tree>,
    c: &str,
    l2: &BTreeSet<Tree>,
) -> BTreeSet<Tree> {
    l1.iter()
        .flat_map(|t| naive_tree_product(sigma, t, c, l2))
        .collect()
}

pub fn truncate(set: &BTreeSet<Tree>, h: u32) -> BTreeSet<Tree> {
    set.iter().filter(|t| t.height() <= h).cloned().collect()
}

/// Whether `t` is `u` with each `c`-leaf replaced by some tree accepted by `hole`.
pub fn matches_with_holes(u: &Tree, t: &Tree, c: &str, hole: &dyn Fn(&Tree) -> bool) -> bool {
    if u.is_leaf_named(c) {
        return hole(t);
    }
    u.symbol() == t.symbol()
        && u.children().len() == t.children().len()
        && u.children()
            .iter()
            .zip(t.children())
            .all(|(x, y)| matches_with_holes(x, y, c, hole))
}

/// `{t ∈ universe : t ∈ L^{*_c}}`, deciding each tree from smaller ones.
pub fn oracle_closure(universe: &[Tree], l: &BTreeSet<Tree>, c: &str) -> BTreeSet<Tree> {
    let mut member: BTreeSet<Tree> = BTreeSet::new();
    for t in universe {
        let inside = t.is_leaf_named(c)
            || l.iter().any(|u| {
                !u.is_leaf_named(c)
                    && u.height() <= t.height()
                    && matches_with_holes(u, t, c, &|s| member.contains(s))
            });
        if inside {
            member.insert(t.clone());
        }
    }
    member
}

/// `{t ∈ universe : t ∈ L_1 ·_c L_2}` by pattern matching.
pub fn oracle_product(
    universe: &[Tree],
    l1: &BTreeSet<Tree>,
    c: &str,
    l2: &BTreeSet<Tree>,
) -> BTreeSet<Tree> {
    universe
        .iter()
        .filter(|t| {
            l1.iter().any(|u| {
                u.height() <= t.height() && matches_with_holes(u, t, c, &|s| l2.contains(s))
            })
        })
        .cloned()
        .collect()
}

/// The trees of `universe` in the language of `e`, with variables read
/// from `ctx`. `universe` must contain every tree of the answer.
pub fn oracle_denote(
    e: &RExpr,
    universe: &[Tree],
    ctx: &BTreeMap<Symbol, BTreeSet<Tree>>,
) -> BTreeSet<Tree> {
    match e {
        RExpr::Zero => BTreeSet::new(),
        RExpr::Var(v) => {
            let all: BTreeSet<&Tree> = universe.iter().collect();
            ctx[v].iter().filter(|t| all.contains(t)).cloned().collect()
        }
        RExpr::Apply(f, args) => {
            let sets: Vec<BTreeSet<Tree>> = args
                .iter()
                .map(|a| oracle_denote(a, universe, ctx))
                .collect();
            universe
                .iter()
                .filter(|t| {
                    t.symbol() == &**f
                        && t.children().len() == sets.len()
                        && t.children().iter().zip(&sets).all(|(u, s)| s.contains(u))
                })
                .cloned()
                .collect()
        }
        RExpr::Sum(l, r) => {
            let mut s = oracle_denote(l, universe, ctx);
            s.extend(oracle_denote(r, universe, ctx));
            s
        }
        RExpr::Prod(l, c, r) => oracle_product(
            universe,
            &oracle_denote(l, universe, ctx),
            c,
            &oracle_denote(r, universe, ctx),
        ),
        RExpr::Star(inner, c) => oracle_closure(universe, &oracle_denote(inner, universe, ctx), c),
    }
}

/// The accepted trees of height at most `h`, by running the automaton on
/// every tree.
pub fn brute_force_accepted(a: &TreeAutomaton, h: u32) -> BTreeSet<Tree> {
    all_trees(a.alphabet(), h)
        .into_iter()
        .filter(|t| a.accepts(t))
        .collect()
}

/// The least bounded solution of `x`, by Kleene iteration from `∅`.
pub fn kleene_least_solution(x: &EquationSystem, h: u32) -> Context {
    let mut current: Context = x
        .variables()
        .iter()
        .map(|v| (v.clone(), FiniteTreeSet::new().truncate(h)))
        .collect();
    for _ in 0..10_000 {
        let next: Context = x
            .variables()
            .iter()
            .zip(x.equations())
            .map(|(v, e)| (v.clone(), denote_bounded(e, &current, h).unwrap()))
            .collect();
        if next == current {
            return current;
        }
        current = next;
    }
    panic!("Kleene iteration did not converge");
}

pub fn members(s: &FiniteTreeSet) -> BTreeSet<Tree> {
    s.members().clone()
}

// ------------------------------------------------------------- generators

/// A ranked alphabet of at most four symbols and arity at most two, with
/// at least two nullary symbols.
pub fn law_alphabet<R: Rng>(rng: &mut R) -> RankedAlphabet {
    let shapes: [&[(&str, usize)]; 6] = [
        &[("f", 2), ("a", 0), ("b", 0)],
        &[("h", 1), ("a", 0), ("b", 0)],
        &[("f", 2), ("a", 0), ("b", 0), ("c", 0)],
        &[("f", 2), ("h", 1), ("a", 0), ("b", 0)],
        &[("h", 1), ("a", 0), ("b", 0), ("c", 0)],
        &[("g", 1), ("h", 1), ("a", 0), ("b", 0)],
    ];
    let shape = shapes[rng.gen_range(0..shapes.len())];
    RankedAlphabet::from_symbols(shape.iter().copied()).unwrap()
}

pub fn nullaries(sigma: &RankedAlphabet) -> Vec<Symbol> {
    sigma.symbols_of_arity(0).cloned().collect()
}

/// A random tree of height at most `max_h`.
pub fn random_tree<R: Rng>(rng: &mut R, sigma: &RankedAlphabet, max_h: u32) -> Tree {
    let leaves = nullaries(sigma);
    let inner: Vec<(Symbol, usize)> = sigma
        .iter()
        .filter(|(_, n)| *n > 0)
        .map(|(s, n)| (s.clone(), n))
        .collect();
    if max_h <= 1 || inner.is_empty() || rng.gen_bool(0.25) {
        let c = leaves.choose(rng).unwrap();
        return sigma.leaf(c).unwrap();
    }
    let (f, n) = inner.choose(rng).unwrap().clone();
    let children = (0..n).map(|_| random_tree(rng, sigma, max_h - 1)).collect();
    sigma.tree(&f, children).unwrap()
}

/// Up to `max_len` random trees of height at most `max_h`.
pub fn random_set<R: Rng>(
    rng: &mut R,
    sigma: &RankedAlphabet,
    max_h: u32,
    max_len: usize,
) -> FiniteTreeSet {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| random_tree(rng, sigma, max_h)).collect()
}

/// Between one and `max_len` random trees of height at most `max_h`.
pub fn random_nonempty_set<R: Rng>(
    rng: &mut R,
    sigma: &RankedAlphabet,
    max_h: u32,
    max_len: usize,
) -> FiniteTreeSet {
    let n = rng.gen_range(1..=max_len.max(1));
    (0..n).map(|_| random_tree(rng, sigma, max_h)).collect()
}

/// Like [`random_nonempty_set`], drawing only trees without the leaf
/// `avoid`; the result may still be empty when such trees are rare.
pub fn random_set_avoiding<R: Rng>(
    rng: &mut R,
    sigma: &RankedAlphabet,
    max_h: u32,
    max_len: usize,
    avoid: &str,
) -> FiniteTreeSet {
    let n = rng.gen_range(1..=max_len.max(1));
    let mut out = BTreeSet::new();
    let mut tries = 0;
    while out.len() < n && tries < 50 {
        let t = random_tree(rng, sigma, max_h);
        if !t.contains_leaf(avoid) {
            out.insert(t);
        }
        tries += 1;
    }
    FiniteTreeSet::from_set(out)
}

fn leaf_count(t: &Tree, c: &str) -> u32 {
    if t.is_leaf_named(c) {
        1
    } else {
        t.children().iter().map(|u| leaf_count(u, c)).sum()
    }
}

/// An upper bound on `|L ·_c L'|` for `|L'| = other` before truncation.
pub fn product_estimate(l: &FiniteTreeSet, c: &str, other: f64) -> f64 {
    l.iter().map(|t| other.powi(leaf_count(t, c) as i32)).sum()
}

/// Height bound for randomized cases: 2 to 5, or 2 to 4 once binary
/// symbols are present.
pub fn random_height<R: Rng>(rng: &mut R, sigma: &RankedAlphabet) -> u32 {
    let top = if sigma.max_arity() >= 2 { 4 } else { 5 };
    rng.gen_range(2..=top)
}
