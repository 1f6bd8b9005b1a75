//! Tokenizer shared by the tree, expression, automaton and system readers.

use crate::error::{Error, Position, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// A run of `[A-Za-z0-9_]`. Whether it is a valid name, `0`, or a
    /// state id is up to the caller.
    Word(String),
    LParen,
    RParen,
    Comma,
    Plus,
    /// `.[`
    Product,
    /// `*[`
    Closure,
    RBracket,
    Arrow,
    Slash,
    Colon,
    Equals,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Product => "`.[`".into(),
            Tok::Closure => "`*[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Equals => "`=`".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub pos: Position,
}

pub(crate) fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Tokenizes `text`, reporting positions relative to `start`.
pub(crate) fn tokenize(text: &str, start: Position) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = start.line;
    let mut column = start.column;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Position::new(line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - begin;
            out.push(Spanned {
                tok: Tok::Word(chars[begin..i].iter().collect()),
                pos,
            });
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            ('.', Some('[')) => (Tok::Product, 2),
            ('*', Some('[')) => (Tok::Closure, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            ('+', _) => (Tok::Plus, 1),
            (']', _) => (Tok::RBracket, 1),
            ('/', _) => (Tok::Slash, 1),
            (':', _) => (Tok::Colon, 1),
            ('=', _) => (Tok::Equals, 1),
            _ => return Err(Error::syntax(pos, format!("unexpected character `{c}`"))),
        };
        out.push(Spanned { tok, pos });
        i += width;
        column += width;
    }
    Ok(out)
}

/// Cursor over a token stream with an end-of-input position for diagnostics.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    idx: usize,
    end: Position,
}

impl Cursor {
    pub(crate) fn new(text: &str, start: Position) -> Result<Self> {
        let toks = tokenize(text, start)?;
        let end = end_position(text, start);
        Ok(Cursor { toks, idx: 0, end })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|s| &s.tok)
    }

    pub(crate) fn pos(&self) -> Position {
        self.toks.get(self.idx).map(|s| s.pos).unwrap_or(self.end)
    }

    pub(crate) fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<Position> {
        let pos = self.pos();
        match self.next() {
            Some(s) if &s.tok == tok => Ok(s.pos),
            Some(s) => Err(Error::syntax(
                s.pos,
                format!("expected {}, found {}", tok.describe(), s.tok.describe()),
            )),
            None => Err(Error::syntax(
                pos,
                format!("expected {}, found end of input", tok.describe()),
            )),
        }
    }

    pub(crate) fn word(&mut self, what: &str) -> Result<(String, Position)> {
        let pos = self.pos();
        match self.next() {
            Some(Spanned {
                tok: Tok::Word(w),
                pos,
            }) => Ok((w, pos)),
            Some(s) => Err(Error::syntax(
                s.pos,
                format!("expected {what}, found {}", s.tok.describe()),
            )),
            None => Err(Error::syntax(
                pos,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    pub(crate) fn name(&mut self, what: &str) -> Result<(String, Position)> {
        let (w, pos) = self.word(what)?;
        if !is_name(&w) {
            return Err(Error::syntax(pos, format!("expected {what}, found `{w}`")));
        }
        Ok((w, pos))
    }

    pub(crate) fn finish(&self) -> Result<()> {
        match self.toks.get(self.idx) {
            None => Ok(()),
            Some(s) => Err(Error::syntax(
                s.pos,
                format!("unexpected {} after end of input", s.tok.describe()),
            )),
        }
    }
}

fn end_position(text: &str, start: Position) -> Position {
    let mut line = start.line;
    let mut column = start.column;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    Position::new(line, column)
}

/// Splits a line-oriented file into `(line number, content)` pairs with
/// `#` comments and blank lines removed. Content keeps its original column
/// offset via the returned start column.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (Position, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = match raw.find('#') {
            Some(idx) => &raw[..idx],
            None => raw,
        };
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            return None;
        }
        let offset = body.len() - trimmed.len();
        let column = raw[..offset].chars().count() + 1;
        Some((Position::new(i + 1, column), trimmed.trim_end()))
    })
}

/// Splits `key: rest` off a content line; returns the rest and its start column.
pub(crate) fn split_header<'a>(
    line: &'a str,
    pos: Position,
    key: &str,
) -> Option<(&'a str, Position)> {
    let rest = line.strip_prefix(key)?;
    let rest = rest.trim_start().strip_prefix(':')?;
    let consumed = line.len() - rest.len();
    Some((
        rest,
        Position::new(pos.line, pos.column + line[..consumed].chars().count()),
    ))
}
