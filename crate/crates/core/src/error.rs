use std::fmt;

use thiserror::Error;

/// Location of a syntax node in its source text. Lines and columns are 1-based.
#[derive(Clone, Copy, Debug, Default, Eq, PartialEq, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(line: u32, col: u32, start: usize, end: usize) -> Self {
        Span {
            line,
            col,
            start,
            end,
        }
    }

    /// Nodes built programmatically carry no location.
    pub fn is_synthetic(&self) -> bool {
        self.line == 0
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Errors raised while evaluating ground expressions.
#[derive(Clone, Debug, Error, Eq, PartialEq)]
pub enum EvalError {
    #[error("division by zero")]
    DivByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("negative exponent")]
    NegativeExponent,
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("index {index} out of bounds for `{name}`")]
    IndexOutOfBounds { name: String, index: i64 },
    #[error("expected {expected}, found {found}")]
    Mismatch {
        expected: &'static str,
        found: String,
    },
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("syntax error: {msg}")]
    Syntax { span: Span, msg: String },
    #[error("type error: {msg}")]
    Type { span: Span, msg: String },
    #[error("validation error: {msg}")]
    Validation { span: Span, msg: String },
    #[error("unknown parameter `{name}`: not declared with `given`")]
    UnknownParam { span: Span, name: String },
    #[error("missing value for parameter `{0}`")]
    MissingParam(String),
    #[error("value {value} for `{name}` violates its domain {domain}")]
    DomainViolation {
        name: String,
        value: String,
        domain: String,
    },
    #[error("evaluation error: {source}{}", context_suffix(.context))]
    Eval {
        source: EvalError,
        span: Span,
        context: Option<String>,
    },
    #[error("timed out")]
    Timeout,
    #[error("internal error: {0}")]
    Internal(String),
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" (at {c})"),
        None => String::new(),
    }
}

impl Error {
    pub fn span(&self) -> Option<Span> {
        match self {
            Error::Syntax { span, .. }
            | Error::Type { span, .. }
            | Error::Validation { span, .. }
            | Error::UnknownParam { span, .. }
            | Error::Eval { span, .. } => Some(*span).filter(|s| !s.is_synthetic()),
            _ => None,
        }
    }

    pub fn syntax(span: Span, msg: impl Into<String>) -> Self {
        Error::Syntax {
            span,
            msg: msg.into(),
        }
    }

    pub fn type_error(span: Span, msg: impl Into<String>) -> Self {
        Error::Type {
            span,
            msg: msg.into(),
        }
    }

    pub fn validation(span: Span, msg: impl Into<String>) -> Self {
        Error::Validation {
            span,
            msg: msg.into(),
        }
    }

    pub fn eval(source: EvalError, span: Span) -> Self {
        Error::Eval {
            source,
            span,
            context: None,
        }
    }

    /// Attaches a description of where evaluation failed, keeping any earlier context.
    pub fn with_context(self, ctx: impl FnOnce() -> String) -> Self {
        match self {
            Error::Eval {
                source,
                span,
                context: None,
            } => Error::Eval {
                source,
                span,
                context: Some(ctx()),
            },
            other => other,
        }
    }

    pub fn is_eval(&self) -> bool {
        matches!(self, Error::Eval { .. })
    }
}

impl From<EvalError> for Error {
    fn from(source: EvalError) -> Self {
        Error::eval(source, Span::default())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
