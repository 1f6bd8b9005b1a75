use crate::error::{Error, Result};
use crate::langset::FiniteTreeSet;

use super::{Context, RExpr};

/// The trees of height at most `h` in the language `e` denotes once every
/// variable is read from `ctx`.
///
/// Each operator is evaluated on already truncated operands, which is
/// exact: no tree of height at most `h` is ever built from a taller one.
pub fn denote_bounded(e: &RExpr, ctx: &Context, h: u32) -> Result<FiniteTreeSet> {
    if let Some(v) = e.vars().into_iter().find(|v| ctx.get(v).is_none()) {
        return Err(Error::UnboundVariable(v.to_string()));
    }
    Ok(eval(e, ctx, h.max(1)))
}

fn eval(e: &RExpr, ctx: &Context, h: u32) -> FiniteTreeSet {
    match e {
        RExpr::Zero => FiniteTreeSet::new().truncate(h),
        RExpr::Var(v) => ctx.get(v).expect("checked above").truncate(h),
        RExpr::Apply(f, args) => {
            if args.is_empty() {
                return FiniteTreeSet::apply_symbol_bounded(f, &[], h);
            }
            if h <= 1 {
                return FiniteTreeSet::new().truncate(h);
            }
            let mut langs = Vec::with_capacity(args.len());
            for a in args {
                let l = eval(a, ctx, h - 1);
                if l.is_empty() {
                    return FiniteTreeSet::new().truncate(h);
                }
                langs.push(l);
            }
            FiniteTreeSet::apply_symbol_bounded(f, &langs, h)
        }
        RExpr::Sum(l, r) => eval(l, ctx, h).union(&eval(r, ctx, h)),
        RExpr::Prod(l, c, r) => {
            let left = eval(l, ctx, h);
            if left.is_empty() {
                return left;
            }
            left.c_product_bounded(c, &eval(r, ctx, h), h)
        }
        RExpr::Star(inner, c) => eval(inner, ctx, h).closure_bounded(c, h),
    }
}
