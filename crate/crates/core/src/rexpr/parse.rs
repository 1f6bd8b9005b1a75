use std::sync::Arc;

use crate::error::{Error, Position, Result};
use crate::lexer::{Cursor, Tok};
use crate::trees::{RankedAlphabet, Symbol};

use super::RExpr;

/// Syntax tree before names are resolved against an alphabet.
enum Raw {
    Zero,
    Name {
        name: String,
        pos: Position,
        args: Option<Vec<Raw>>,
    },
    Sum(Box<Raw>, Box<Raw>),
    Prod(Box<Raw>, String, Position, Box<Raw>),
    Star(Box<Raw>, String, Position),
}

/// Parses `text` over `alphabet`, treating the names in `variables` as
/// variables. A name may not be both.
pub fn parse(text: &str, alphabet: &RankedAlphabet, variables: &[&str]) -> Result<RExpr> {
    let vars: Vec<Symbol> = variables.iter().map(|v| Arc::from(*v)).collect();
    parse_at(text, Position::default(), alphabet, &vars)
}

/// Parses `text`, extending `base` with whatever symbols the text uses:
/// a name applied to `n` arguments gets arity `n`, bare names and operator
/// subscripts get arity 0. Returns the expression and the extended alphabet.
pub fn parse_inferring(
    text: &str,
    base: &RankedAlphabet,
    variables: &[&str],
) -> Result<(RExpr, RankedAlphabet)> {
    let vars: Vec<Symbol> = variables.iter().map(|v| Arc::from(*v)).collect();
    parse_inferring_at(text, Position::default(), base, &vars)
}

pub(crate) fn parse_at(
    text: &str,
    start: Position,
    alphabet: &RankedAlphabet,
    vars: &[Symbol],
) -> Result<RExpr> {
    let raw = parse_raw(text, start)?;
    resolve(&raw, alphabet, vars)
}

pub(crate) fn parse_inferring_at(
    text: &str,
    start: Position,
    base: &RankedAlphabet,
    vars: &[Symbol],
) -> Result<(RExpr, RankedAlphabet)> {
    let raw = parse_raw(text, start)?;
    let mut alphabet = base.clone();
    infer(&raw, vars, &mut alphabet)?;
    let expr = resolve(&raw, &alphabet, vars)?;
    Ok((expr, alphabet))
}

fn parse_raw(text: &str, start: Position) -> Result<Raw> {
    let mut cur = Cursor::new(text, start)?;
    if cur.at_end() {
        return Err(Error::syntax(cur.pos(), "empty expression"));
    }
    let e = expr(&mut cur)?;
    cur.finish()?;
    Ok(e)
}

fn expr(cur: &mut Cursor) -> Result<Raw> {
    let mut acc = term(cur)?;
    while cur.eat(&Tok::Plus) {
        let rhs = term(cur)?;
        acc = Raw::Sum(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn term(cur: &mut Cursor) -> Result<Raw> {
    let mut acc = factor(cur)?;
    while cur.eat(&Tok::Product) {
        let (c, pos) = cur.name("product symbol")?;
        cur.expect(&Tok::RBracket)?;
        let rhs = factor(cur)?;
        acc = Raw::Prod(Box::new(acc), c, pos, Box::new(rhs));
    }
    Ok(acc)
}

fn factor(cur: &mut Cursor) -> Result<Raw> {
    let mut acc = atom(cur)?;
    while cur.eat(&Tok::Closure) {
        let (c, pos) = cur.name("closure symbol")?;
        cur.expect(&Tok::RBracket)?;
        acc = Raw::Star(Box::new(acc), c, pos);
    }
    Ok(acc)
}

fn atom(cur: &mut Cursor) -> Result<Raw> {
    if cur.eat(&Tok::LParen) {
        let inner = expr(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(inner);
    }
    let (word, pos) = cur.word("an expression")?;
    if word == "0" {
        return Ok(Raw::Zero);
    }
    if !crate::lexer::is_name(&word) {
        return Err(Error::syntax(
            pos,
            format!("expected a name or `0`, found `{word}`"),
        ));
    }
    let mut args = None;
    if cur.eat(&Tok::LParen) {
        let mut list = vec![expr(cur)?];
        while cur.eat(&Tok::Comma) {
            list.push(expr(cur)?);
        }
        cur.expect(&Tok::RParen)?;
        args = Some(list);
    }
    Ok(Raw::Name {
        name: word,
        pos,
        args,
    })
}

fn is_var(vars: &[Symbol], name: &str) -> bool {
    vars.iter().any(|v| &**v == name)
}

fn infer(raw: &Raw, vars: &[Symbol], alphabet: &mut RankedAlphabet) -> Result<()> {
    match raw {
        Raw::Zero => Ok(()),
        Raw::Name { name, pos, args } => {
            let list = args.as_deref().unwrap_or(&[]);
            if !(args.is_none() && is_var(vars, name)) {
                alphabet.insert(name, list.len(), Some(*pos))?;
            }
            list.iter().try_for_each(|a| infer(a, vars, alphabet))
        }
        Raw::Sum(l, r) => {
            infer(l, vars, alphabet)?;
            infer(r, vars, alphabet)
        }
        Raw::Prod(l, c, pos, r) => {
            alphabet.insert(c, 0, Some(*pos))?;
            infer(l, vars, alphabet)?;
            infer(r, vars, alphabet)
        }
        Raw::Star(e, c, pos) => {
            alphabet.insert(c, 0, Some(*pos))?;
            infer(e, vars, alphabet)
        }
    }
}

fn nullary(alphabet: &RankedAlphabet, vars: &[Symbol], c: &str, pos: Position) -> Result<Symbol> {
    if is_var(vars, c) {
        return Err(Error::NamespaceClash {
            name: c.to_string(),
            pos: Some(pos),
        });
    }
    match alphabet.arity(c) {
        None => Err(Error::UnknownSymbol {
            name: c.to_string(),
            pos: Some(pos),
        }),
        Some(0) => Ok(alphabet.symbol(c).unwrap()),
        Some(_) => Err(Error::NotNullary {
            symbol: c.to_string(),
            pos: Some(pos),
        }),
    }
}

fn resolve(raw: &Raw, alphabet: &RankedAlphabet, vars: &[Symbol]) -> Result<RExpr> {
    Ok(match raw {
        Raw::Zero => RExpr::Zero,
        Raw::Name { name, pos, args } => {
            let var = vars.iter().find(|v| &***v == name.as_str());
            match (var, args) {
                (Some(v), None) => {
                    if alphabet.contains(name) {
                        return Err(Error::NamespaceClash {
                            name: name.clone(),
                            pos: Some(*pos),
                        });
                    }
                    RExpr::Var(v.clone())
                }
                (Some(_), Some(_)) => {
                    return Err(Error::syntax(
                        *pos,
                        format!("variable `{name}` cannot take arguments"),
                    ))
                }
                (None, _) => {
                    let list = args.as_deref().unwrap_or(&[]);
                    let symbol = alphabet.symbol(name).ok_or_else(|| Error::UnknownSymbol {
                        name: name.clone(),
                        pos: Some(*pos),
                    })?;
                    let expected = alphabet.arity(name).unwrap();
                    if expected != list.len() {
                        return Err(Error::ArityMismatch {
                            symbol: name.clone(),
                            expected,
                            found: list.len(),
                            pos: Some(*pos),
                        });
                    }
                    let resolved = list
                        .iter()
                        .map(|a| resolve(a, alphabet, vars))
                        .collect::<Result<_>>()?;
                    RExpr::Apply(symbol, resolved)
                }
            }
        }
        Raw::Sum(l, r) => RExpr::Sum(
            Box::new(resolve(l, alphabet, vars)?),
            Box::new(resolve(r, alphabet, vars)?),
        ),
        Raw::Prod(l, c, pos, r) => {
            let c = nullary(alphabet, vars, c, *pos)?;
            RExpr::Prod(
                Box::new(resolve(l, alphabet, vars)?),
                c,
                Box::new(resolve(r, alphabet, vars)?),
            )
        }
        Raw::Star(e, c, pos) => {
            let c = nullary(alphabet, vars, c, *pos)?;
            RExpr::Star(Box::new(resolve(e, alphabet, vars)?), c)
        }
    })
}
