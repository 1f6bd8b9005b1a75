//! Line-oriented automaton files:
//!
//! ```text
//! alphabet: f/2 h/1 a/0 b/0
//! states: 1 2 3 4
//! final: 1 3
//! trans: f(1,1) -> 1
//! trans: a -> 3
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Position, Result};
use crate::lexer::{content_lines, split_header, Cursor, Tok};
use crate::trees::RankedAlphabet;

use super::{State, Transition, TreeAutomaton};

fn automaton_error(pos: Position, message: impl Into<String>) -> Error {
    Error::Automaton {
        message: message.into(),
        pos: Some(pos),
    }
}

fn state_list(text: &str, start: Position) -> Result<Vec<(String, Position)>> {
    let mut cur = Cursor::new(text, start)?;
    let mut out = Vec::new();
    while !cur.at_end() {
        out.push(cur.word("state")?);
    }
    Ok(out)
}

impl TreeAutomaton {
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<RankedAlphabet> = None;
        let mut names: Option<Vec<String>> = None;
        let mut ids: HashMap<String, State> = HashMap::new();
        let mut finals = Vec::new();
        let mut transitions = Vec::new();

        let lookup = |ids: &HashMap<String, State>, name: &str, pos: Position| {
            ids.get(name)
                .copied()
                .ok_or_else(|| automaton_error(pos, format!("undeclared state `{name}`")))
        };

        for (pos, line) in content_lines(text) {
            if let Some((rest, at)) = split_header(line, pos, "alphabet") {
                if alphabet.is_some() {
                    return Err(automaton_error(pos, "duplicate `alphabet:` line"));
                }
                alphabet = Some(RankedAlphabet::parse_at(rest, at)?);
            } else if let Some((rest, at)) = split_header(line, pos, "states") {
                if names.is_some() {
                    return Err(automaton_error(pos, "duplicate `states:` line"));
                }
                let mut list = Vec::new();
                for (name, p) in state_list(rest, at)? {
                    if ids.insert(name.clone(), ids.len() + 1).is_some() {
                        return Err(automaton_error(p, format!("state `{name}` declared twice")));
                    }
                    list.push(name);
                }
                names = Some(list);
            } else if let Some((rest, at)) =
                split_header(line, pos, "final").or_else(|| split_header(line, pos, "finals"))
            {
                if names.is_none() {
                    return Err(automaton_error(pos, "`final:` before `states:`"));
                }
                for (name, p) in state_list(rest, at)? {
                    finals.push(lookup(&ids, &name, p)?);
                }
            } else if let Some((rest, at)) = split_header(line, pos, "trans") {
                let (Some(sigma), Some(_)) = (&alphabet, &names) else {
                    return Err(automaton_error(
                        pos,
                        "`trans:` before `alphabet:` and `states:`",
                    ));
                };
                let mut cur = Cursor::new(rest, at)?;
                let (symbol, spos) = cur.name("symbol")?;
                let mut args = Vec::new();
                if cur.eat(&Tok::LParen) && !cur.eat(&Tok::RParen) {
                    loop {
                        let (name, p) = cur.word("state")?;
                        args.push(lookup(&ids, &name, p)?);
                        if cur.eat(&Tok::RParen) {
                            break;
                        }
                        cur.expect(&Tok::Comma)?;
                    }
                }
                cur.expect(&Tok::Arrow)?;
                let (target, tpos) = cur.word("target state")?;
                let target = lookup(&ids, &target, tpos)?;
                cur.finish()?;
                match sigma.arity(&symbol) {
                    None => {
                        return Err(Error::UnknownSymbol {
                            name: symbol,
                            pos: Some(spos),
                        })
                    }
                    Some(expected) if expected != args.len() => {
                        return Err(Error::ArityMismatch {
                            symbol,
                            expected,
                            found: args.len(),
                            pos: Some(spos),
                        })
                    }
                    Some(_) => {}
                }
                transitions.push(Transition::new(&symbol, args, target));
            } else {
                return Err(automaton_error(
                    pos,
                    "expected `alphabet:`, `states:`, `final:` or `trans:`",
                ));
            }
        }

        let end = Position::new(text.lines().count().max(1), 1);
        let alphabet = alphabet.ok_or_else(|| automaton_error(end, "missing `alphabet:` line"))?;
        let names = names.ok_or_else(|| automaton_error(end, "missing `states:` line"))?;
        TreeAutomaton::with_names(alphabet, names, finals, transitions)
    }
}

impl FromStr for TreeAutomaton {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TreeAutomaton::parse(s)
    }
}

impl fmt::Display for TreeAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        writeln!(f, "states: {}", self.names.join(" "))?;
        let finals: Vec<&str> = self.finals.iter().map(|&q| self.state_name(q)).collect();
        writeln!(f, "final: {}", finals.join(" "))?;
        for t in &self.transitions {
            write!(f, "trans: {}", t.symbol)?;
            if !t.args.is_empty() {
                let args: Vec<&str> = t.args.iter().map(|&q| self.state_name(q)).collect();
                write!(f, "({})", args.join(","))?;
            }
            writeln!(f, " -> {}", self.state_name(t.target))?;
        }
        Ok(())
    }
}
