use std::fmt;

/// 1-based line/column location inside a parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub fn new(line: usize, column: usize) -> Self {
        Position { line, column }
    }
}

impl Default for Position {
    fn default() -> Self {
        Position { line: 1, column: 1 }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

pub(crate) struct At(pub Option<Position>);

impl fmt::Display for At {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(pos) => write!(f, "{pos}: "),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Position, message: String },

    #[error("{}unknown symbol `{name}`", At(*pos))]
    UnknownSymbol { name: String, pos: Option<Position> },

    #[error("{}symbol `{symbol}` has arity {expected} but was given {found} argument(s)", At(*pos))]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
        pos: Option<Position>,
    },

    #[error("{}`{symbol}` must be a nullary symbol", At(*pos))]
    NotNullary {
        symbol: String,
        pos: Option<Position>,
    },

    #[error("{}invalid symbol name `{name}`", At(*pos))]
    InvalidName { name: String, pos: Option<Position> },

    #[error("{}symbol `{name}` declared twice with arities {first} and {second}", At(*pos))]
    ConflictingArity {
        name: String,
        first: usize,
        second: usize,
        pos: Option<Position>,
    },

    #[error("{}name `{name}` is both an alphabet symbol and a variable", At(*pos))]
    NamespaceClash { name: String, pos: Option<Position> },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("fresh symbol `{0}` collides with an existing symbol or variable")]
    FreshCollision(String),

    #[error("equation for `{var}` is not in factorized form: {reason}")]
    ShapeViolation { var: String, reason: String },

    #[error("system is not closed: {0}")]
    NotClosed(String),

    #[error("{}invalid automaton: {message}", At(*pos))]
    Automaton {
        message: String,
        pos: Option<Position>,
    },

    #[error("{}invalid equation system: {message}", At(*pos))]
    System {
        message: String,
        pos: Option<Position>,
    },
}

impl Error {
    pub fn position(&self) -> Option<Position> {
        match self {
            Error::Syntax { pos, .. } => Some(*pos),
            Error::UnknownSymbol { pos, .. }
            | Error::ArityMismatch { pos, .. }
            | Error::NotNullary { pos, .. }
            | Error::InvalidName { pos, .. }
            | Error::ConflictingArity { pos, .. }
            | Error::NamespaceClash { pos, .. }
            | Error::Automaton { pos, .. }
            | Error::System { pos, .. } => *pos,
            _ => None,
        }
    }

    pub(crate) fn syntax(pos: Position, message: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
