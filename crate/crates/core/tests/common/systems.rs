//! Random closed equation systems and the checks run on them.
//!
//! Generated expressions use an operator symbol `c` only inside the left
//! operand of a `·_c`, and a closure `*_c` only as the left operand of a
//! `·_c`. The languages of such systems never contain `c` or `d`, so
//! the factorization step is sound on them.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use tree_arden::eqsys::{solve_with, Order};
use tree_arden::rexpr::{denote_bounded, fresh_symbol, Context, RExpr};
use tree_arden::{EquationSystem, FiniteTreeSet, RankedAlphabet, Symbol, Tree};

use super::{kleene_least_solution, random_tree, rng, Outcome};

pub const H: u32 = 4;

pub fn system_alphabet() -> RankedAlphabet {
    RankedAlphabet::parse("f/2 h/1 a/0 b/0 c/0 d/0").unwrap()
}

/// The alphabet the solutions live on.
pub fn free_alphabet() -> RankedAlphabet {
    RankedAlphabet::parse("f/2 h/1 a/0 b/0").unwrap()
}

struct Gen<'a, R> {
    rng: &'a mut R,
    vars: &'a [Symbol],
}

impl<R: Rng> Gen<'_, R> {
    fn leaf(&mut self, scope: &[&str]) -> RExpr {
        let roll: f64 = self.rng.gen();
        if roll < 0.03 {
            RExpr::Zero
        } else if roll < 0.45 {
            RExpr::Var(self.vars.choose(self.rng).unwrap().clone())
        } else if !scope.is_empty() && roll < 0.7 {
            RExpr::sym(scope.choose(self.rng).unwrap())
        } else {
            RExpr::sym(["a", "b"].choose(self.rng).unwrap())
        }
    }

    fn expr(&mut self, depth: u32, scope: &[&str]) -> RExpr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.leaf(scope);
        }
        let roll: f64 = self.rng.gen();
        if roll < 0.25 {
            RExpr::apply("h", vec![self.expr(depth - 1, scope)])
        } else if roll < 0.45 {
            let l = self.expr(depth - 1, scope);
            let r = self.expr(depth - 1, scope);
            RExpr::apply("f", vec![l, r])
        } else if roll < 0.6 {
            RExpr::sum(self.expr(depth - 1, scope), self.expr(depth - 1, scope))
        } else {
            let c = *["c", "d"].choose(self.rng).unwrap();
            let mut inner: Vec<&str> = scope.to_vec();
            inner.push(c);
            let mut left = self.expr(depth - 1, &inner);
            if roll >= 0.85 {
                left = RExpr::star(left, c);
            }
            let right = self.expr(depth - 1, scope);
            RExpr::prod(left, c, right)
        }
    }

    fn rhs(&mut self) -> RExpr {
        let n = self.rng.gen_range(1..=3);
        RExpr::sum_of((0..n).map(|_| self.expr(3, &[])))
    }
}

/// A random closed system of at most `max_vars` equations.
pub fn random_system<R: Rng>(r: &mut R, max_vars: usize) -> EquationSystem {
    let n = r.gen_range(1..=max_vars);
    let vars: Vec<Symbol> = (1..=n).map(|i| Arc::from(format!("E{i}"))).collect();
    let mut g = Gen {
        rng: r,
        vars: &vars,
    };
    let equations = (0..n).map(|_| g.rhs()).collect();
    EquationSystem::new(system_alphabet(), vars, equations).unwrap()
}

pub fn random_system_seeded(seed: u64) -> EquationSystem {
    random_system(&mut rng(seed ^ 0x5eed_5157), 4)
}

/// The fixed point reached by iterating the equations from `start`, if
/// the iteration settles.
pub fn iterate_from(x: &EquationSystem, start: &Context, h: u32) -> Option<Context> {
    let mut current = start.clone();
    for _ in 0..64 {
        let next: Context = x
            .variables()
            .iter()
            .zip(x.equations())
            .map(|(v, e)| (v.clone(), denote_bounded(e, &current, h).unwrap()))
            .collect();
        if next == current {
            return Some(current);
        }
        current = next;
    }
    None
}

/// Candidate tuples for equivalence checks: the least solution, other
/// fixed points, and perturbations that are usually not solutions.
pub fn candidates<R: Rng>(r: &mut R, x: &EquationSystem, h: u32) -> Vec<Context> {
    let sigma = free_alphabet();
    let least = kleene_least_solution(x, h);
    let mut out = vec![least.clone()];
    for _ in 0..2 {
        let start: Context = x
            .variables()
            .iter()
            .map(|v| {
                let extra: FiniteTreeSet = (0..3).map(|_| random_tree(r, &sigma, h)).collect();
                (v.clone(), least.get(v).unwrap().union(&extra))
            })
            .collect();
        if let Some(y) = iterate_from(x, &start, h) {
            out.push(y);
        }
    }
    for _ in 0..3 {
        out.push(perturb(r, &least, x.variables(), &sigma, h));
    }
    out
}

/// `ctx` with one tree added to or removed from one variable; the
/// result always differs from `ctx`.
pub fn perturb<R: Rng>(
    r: &mut R,
    ctx: &Context,
    vars: &[Symbol],
    sigma: &RankedAlphabet,
    h: u32,
) -> Context {
    let target = vars.choose(r).unwrap().clone();
    ctx.iter()
        .map(|(v, l)| {
            if *v != target {
                return (v.clone(), l.clone());
            }
            let mut members = l.members().clone();
            let pick: Option<Tree> = members
                .iter()
                .nth(r.gen_range(0..members.len().max(1)))
                .cloned();
            let removed = match pick {
                Some(ref t) if r.gen_bool(0.5) => members.remove(t),
                _ => false,
            };
            if !removed {
                let fresh = (0..50)
                    .map(|_| random_tree(r, sigma, h))
                    .find(|t| !members.contains(t));
                match (fresh, pick) {
                    (Some(t), _) => {
                        members.insert(t);
                    }
                    (None, Some(t)) => {
                        members.remove(&t);
                    }
                    (None, None) => unreachable!("an empty set always takes a new tree"),
                }
            }
            (v.clone(), FiniteTreeSet::from_set(members).truncate(h))
        })
        .collect()
}

fn show(ctx: &Context) -> String {
    ctx.iter()
        .map(|(v, l)| format!("{v}={l}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `X` and `X^k` have the same bounded solutions, and a solution of `X`
/// solves every substituted equation.
pub fn substitution(seed: u64) -> Outcome {
    let mut r = rng(seed ^ 0x51);
    let x = random_system_seeded(seed);
    let k = r.gen_range(0..x.len());
    let xk = x.substitute_system(k);
    for cand in candidates(&mut r, &x, H) {
        let before = x.is_solution_bounded(&cand, H).unwrap();
        let after = xk.is_solution_bounded(&cand, H).unwrap();
        if before != after {
            return Outcome::Fail(format!(
                "k={} system:\n{x}candidate {}: {before} vs {after}",
                k + 1,
                show(&cand)
            ));
        }
    }
    Outcome::Pass
}

/// Eliminating a non-recursive equation: `Z` extended with `L_Z(F_k)`
/// solves `X` exactly when `Z` solves `X^k` without equation `k`.
pub fn elimination(seed: u64) -> Outcome {
    let mut r = rng(seed ^ 0x52);
    let x = random_system_seeded(seed);
    let open: Vec<usize> = (0..x.len())
        .filter(|&k| !x.equation(k).mentions_var(&x.variables()[k]))
        .collect();
    let Some(&k) = open.choose(&mut r) else {
        return Outcome::Reject;
    };
    let var = x.variables()[k].clone();
    let smaller = x.substitute_system(k).remove_equation(k).unwrap();
    for cand in candidates(&mut r, &x, H) {
        let z: Context = cand
            .iter()
            .filter(|(v, _)| **v != var)
            .map(|(v, l)| (v.clone(), l.clone()))
            .collect();
        let lk = denote_bounded(x.equation(k), &z, H).unwrap();
        let full = z.clone().with(&var, lk);
        let left = x.is_solution_bounded(&full, H).unwrap();
        let right = smaller.is_solution_bounded(&z, H).unwrap();
        if left != right {
            return Outcome::Fail(format!(
                "k={} system:\n{x}Z {}: {left} vs {right}",
                k + 1,
                show(&z)
            ));
        }
    }
    Outcome::Pass
}

/// Factorizing then contracting a self-recursive equation.
///
/// Every solution of the contracted system solves the factorized one and
/// the least solutions agree. When the fresh symbol is outside
/// `L(F'_k)`, `E_k` is determined by the other variables, so the two
/// systems have the same solutions.
pub fn contraction(seed: u64) -> Outcome {
    let mut r = rng(seed ^ 0x53);
    let x = random_system_seeded(seed);
    let recursive: Vec<usize> = (0..x.len())
        .filter(|&k| x.equation(k).mentions_var(&x.variables()[k]))
        .collect();
    let Some(&k) = recursive.choose(&mut r) else {
        return Outcome::Reject;
    };
    let fresh = fresh_symbol(k + 1, x.alphabet(), x.variables());
    let factored = x.factorize_equation(k, &fresh).unwrap();
    let contracted = factored.contract_equation(k).unwrap();
    let var = x.variables()[k].clone();
    let head = match factored.equation(k) {
        RExpr::Sum(l, _) => &**l,
        other => other,
    };
    let RExpr::Prod(f_prime, _, _) = head else {
        return Outcome::Fail(format!(
            "unexpected factorized shape {}",
            factored.equation(k)
        ));
    };
    let fresh_leaf = factored.alphabet().leaf(&fresh).unwrap();

    let least = kleene_least_solution(&x, H);
    let checks = [
        (
            "least of X solves X'",
            factored.is_solution_bounded(&least, H).unwrap(),
        ),
        (
            "least of X solves X'_k",
            contracted.is_solution_bounded(&least, H).unwrap(),
        ),
        (
            "least of X'_k is least of X",
            kleene_least_solution(&contracted, H) == least,
        ),
    ];
    for (what, ok) in checks {
        if !ok {
            return Outcome::Fail(format!("{what}; k={} system:\n{x}", k + 1));
        }
    }
    for cand in candidates(&mut r, &factored, H) {
        let solves_factored = factored.is_solution_bounded(&cand, H).unwrap();
        let solves_contracted = contracted.is_solution_bounded(&cand, H).unwrap();
        let unique = !denote_bounded(f_prime, &cand, H)
            .unwrap()
            .contains(&fresh_leaf);
        let ok = if unique {
            solves_factored == solves_contracted
        } else {
            !solves_contracted || solves_factored
        };
        if !ok {
            return Outcome::Fail(format!(
                "k={} {var}, fresh symbol in L(F'): {}, candidate {}: {solves_factored} vs {solves_contracted}\n{factored}",
                k + 1,
                !unique,
                show(&cand)
            ));
        }
        if unique && solves_factored {
            let other = perturb_one(&mut r, &cand, &var);
            if factored.is_solution_bounded(&other, H).unwrap() {
                return Outcome::Fail(format!(
                    "second value for {var}: {}\n{factored}",
                    show(&other)
                ));
            }
        }
    }
    Outcome::Pass
}

fn perturb_one<R: Rng>(r: &mut R, ctx: &Context, var: &Symbol) -> Context {
    perturb(r, ctx, std::slice::from_ref(var), &free_alphabet(), H)
}

/// Every system produced while solving is closed, and so are `X^k`, the
/// factorized and the contracted systems of every applicable equation.
pub fn closedness_preservation(seed: u64) -> Outcome {
    let x = random_system_seeded(seed);
    let report = |y: &EquationSystem| y.closedness();
    if !report(&x).closed {
        return Outcome::Fail(format!("generated system is not closed:\n{x}"));
    }
    for k in 0..x.len() {
        if !report(&x.substitute_system(k)).closed {
            return Outcome::Fail(format!("X^{} not closed:\n{x}", k + 1));
        }
        if x.equation(k).mentions_var(&x.variables()[k]) {
            let fresh = fresh_symbol(k + 1, x.alphabet(), x.variables());
            let factored = x.factorize_equation(k, &fresh).unwrap();
            if !report(&factored).closed {
                return Outcome::Fail(format!("factorized {} not closed:\n{factored}", k + 1));
            }
            if !report(&factored.contract_equation(k).unwrap()).closed {
                return Outcome::Fail(format!("contracted {} not closed:\n{factored}", k + 1));
            }
        }
    }
    for order in [Order::Descending, Order::Ascending, Order::MinOccurrences] {
        let sol = solve_with(&x, order, true).unwrap();
        for (i, y) in sol.trace.replay_systems(&x).unwrap().iter().enumerate() {
            if !report(y).closed {
                return Outcome::Fail(format!("step {i} under {order:?} not closed:\n{y}"));
            }
        }
    }
    Outcome::Pass
}

/// The solver's expressions denote the least solution, under every
/// variable order and with or without normalization.
pub fn solver_matches_least_solution(seed: u64) -> Outcome {
    let x = random_system_seeded(seed);
    let least = kleene_least_solution(&x, H);
    for order in [Order::Descending, Order::Ascending, Order::MinOccurrences] {
        for normalize in [true, false] {
            let sol = match solve_with(&x, order, normalize) {
                Ok(sol) => sol,
                Err(e) => return Outcome::Fail(format!("{e}\n{x}")),
            };
            let got: Context = x
                .variables()
                .iter()
                .zip(sol.expressions())
                .map(|(v, e)| (v.clone(), denote_bounded(e, &Context::new(), H).unwrap()))
                .collect();
            if got != least {
                return Outcome::Fail(format!(
                    "{order:?} normalize={normalize}\n{x}solution:\n{}least {}\ngot   {}",
                    sol.system,
                    show(&least),
                    show(&got)
                ));
            }
            if sol.expressions().iter().any(|e| !e.is_variable_free()) {
                return Outcome::Fail(format!("solution mentions variables\n{}", sol.system));
            }
        }
    }
    Outcome::Pass
}

/// Symbols occurring in trees of `ctx`.
pub fn symbols_in(ctx: &Context) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (_, l) in ctx.iter() {
        for t in l.iter() {
            collect(t, &mut out);
        }
    }
    out
}

fn collect(t: &Tree, out: &mut BTreeSet<String>) {
    out.insert(t.symbol().to_string());
    for u in t.children() {
        collect(u, out);
    }
}
