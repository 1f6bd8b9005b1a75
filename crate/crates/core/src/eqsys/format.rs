//! System files: an optional `alphabet:` line, a `vars:` line, then one
//! `E = expr` line per variable.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Position, Result};
use crate::lexer::{content_lines, is_name, split_header};
use crate::rexpr::{parse_at, parse_inferring_at, RExpr};
use crate::trees::{with_pos, RankedAlphabet, Symbol};

use super::EquationSystem;

fn system_error(pos: Position, message: impl Into<String>) -> Error {
    Error::System {
        message: message.into(),
        pos: Some(pos),
    }
}

impl EquationSystem {
    /// Reads a system file. Without an `alphabet:` line, symbol arities
    /// are inferred from their use.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared: Option<RankedAlphabet> = None;
        let mut inferred = RankedAlphabet::new();
        let mut vars: Option<Vec<Symbol>> = None;
        let mut rhs: Vec<Option<RExpr>> = Vec::new();

        for (pos, line) in content_lines(text) {
            if let Some((rest, at)) = split_header(line, pos, "alphabet") {
                if declared.is_some() || vars.is_some() {
                    return Err(system_error(pos, "`alphabet:` must come first, once"));
                }
                declared = Some(RankedAlphabet::parse_at(rest, at)?);
            } else if let Some((rest, at)) = split_header(line, pos, "vars") {
                if vars.is_some() {
                    return Err(system_error(pos, "duplicate `vars:` line"));
                }
                let mut list: Vec<Symbol> = Vec::new();
                let mut column = at.column;
                for word in rest.split(' ') {
                    if !word.is_empty() {
                        let p = Position::new(at.line, column);
                        if !is_name(word) {
                            return Err(Error::InvalidName {
                                name: word.to_string(),
                                pos: Some(p),
                            });
                        }
                        if list.iter().any(|v| &**v == word) {
                            return Err(system_error(
                                p,
                                format!("variable `{word}` declared twice"),
                            ));
                        }
                        if declared.as_ref().is_some_and(|s| s.contains(word)) {
                            return Err(Error::NamespaceClash {
                                name: word.to_string(),
                                pos: Some(p),
                            });
                        }
                        list.push(Arc::from(word));
                    }
                    column += word.chars().count() + 1;
                }
                rhs = vec![None; list.len()];
                vars = Some(list);
            } else if let Some(eq) = line.find('=') {
                let Some(list) = &vars else {
                    return Err(system_error(pos, "equation before `vars:` line"));
                };
                let name = line[..eq].trim();
                let Some(k) = list.iter().position(|v| &**v == name) else {
                    return Err(system_error(
                        pos,
                        format!("`{name}` is not a declared variable"),
                    ));
                };
                if rhs[k].is_some() {
                    return Err(system_error(pos, format!("second equation for `{name}`")));
                }
                let start = Position::new(pos.line, pos.column + line[..=eq].chars().count());
                let body = &line[eq + 1..];
                let e = match &declared {
                    Some(sigma) => parse_at(body, start, sigma, list)?,
                    None => {
                        let (e, sigma) = parse_inferring_at(body, start, &inferred, list)?;
                        inferred = sigma;
                        e
                    }
                };
                rhs[k] = Some(e);
            } else {
                return Err(system_error(
                    pos,
                    "expected `alphabet:`, `vars:` or `E = expr`",
                ));
            }
        }

        let end = Position::new(text.lines().count().max(1), 1);
        let vars = vars.ok_or_else(|| system_error(end, "missing `vars:` line"))?;
        let mut equations = Vec::with_capacity(vars.len());
        for (v, e) in vars.iter().zip(rhs) {
            equations.push(e.ok_or_else(|| system_error(end, format!("no equation for `{v}`")))?);
        }
        let alphabet = declared.unwrap_or(inferred);
        EquationSystem::new(alphabet, vars, equations).map_err(|e| with_pos(e, end))
    }
}

impl FromStr for EquationSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EquationSystem::parse(s)
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        let vars: Vec<&str> = self.variables.iter().map(|v| &**v).collect();
        writeln!(f, "vars: {}", vars.join(" "))?;
        for (v, e) in self.variables.iter().zip(&self.equations) {
            writeln!(f, "{v} = {e}")?;
        }
        Ok(())
    }
}
