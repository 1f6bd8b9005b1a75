use std::fmt;

use super::RExpr;

const SUM: u8 = 0;
const PROD: u8 = 1;
const STAR: u8 = 2;
const ATOM: u8 = 3;

fn precedence(e: &RExpr) -> u8 {
    match e {
        RExpr::Sum(..) => SUM,
        RExpr::Prod(..) => PROD,
        RExpr::Star(..) => STAR,
        RExpr::Zero | RExpr::Var(_) | RExpr::Apply(..) => ATOM,
    }
}

/// Writes `e` so that it parses back to the same tree, using parentheses
/// only where the precedences require them.
fn write_at(e: &RExpr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let wrap = precedence(e) < min;
    if wrap {
        f.write_str("(")?;
    }
    match e {
        RExpr::Zero => f.write_str("0")?,
        RExpr::Var(v) => f.write_str(v)?,
        RExpr::Apply(s, args) => {
            f.write_str(s)?;
            if !args.is_empty() {
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write_at(a, SUM, f)?;
                }
                f.write_str(")")?;
            }
        }
        RExpr::Sum(l, r) => {
            write_at(l, SUM, f)?;
            f.write_str(" + ")?;
            write_at(r, PROD, f)?;
        }
        RExpr::Prod(l, c, r) => {
            write_at(l, PROD, f)?;
            write!(f, " .[{c}] ")?;
            write_at(r, STAR, f)?;
        }
        RExpr::Star(inner, c) => {
            write_at(inner, STAR, f)?;
            write!(f, "*[{c}]")?;
        }
    }
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for RExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, SUM, f)
    }
}
