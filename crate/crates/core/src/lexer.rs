use crate::error::{Error, Result, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    DotDot,
    Bar,
    Plus,
    Minus,
    Star,
    StarStar,
    Slash,
    Percent,
    Eq,
    Neq,
    Lt,
    Leq,
    Gt,
    Geq,
    Bang,
    And,
    Or,
    Implies,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::DotDot => "..",
            Tok::Bar => "|",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::StarStar => "**",
            Tok::Slash => "/",
            Tok::Percent => "%",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Lt => "<",
            Tok::Leq => "<=",
            Tok::Gt => ">",
            Tok::Geq => ">=",
            Tok::Bang => "!",
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Implies => "->",
            Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Splits source text into tokens. `$` starts a comment running to end of line.
pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut line_start = 0usize;
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            line += 1;
            i += 1;
            line_start = i;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'$' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let col = (src[line_start..i].chars().count() + 1) as u32;
        let two = |j: usize| bytes.get(i + j).copied();
        let (tok, len) = if c.is_ascii_digit() {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            let v: u64 = src[i..j].parse().map_err(|_| {
                Error::syntax(
                    Span::new(line, col, i, j),
                    format!("integer literal `{}` is too large", &src[i..j]),
                )
            })?;
            (Tok::Int(v), j - i)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            (Tok::Ident(src[i..j].to_string()), j - i)
        } else {
            match (c, two(1)) {
                (b'.', Some(b'.')) => (Tok::DotDot, 2),
                (b'*', Some(b'*')) => (Tok::StarStar, 2),
                (b'!', Some(b'=')) => (Tok::Neq, 2),
                (b'<', Some(b'=')) => (Tok::Leq, 2),
                (b'>', Some(b'=')) => (Tok::Geq, 2),
                (b'/', Some(b'\\')) => (Tok::And, 2),
                (b'\\', Some(b'/')) => (Tok::Or, 2),
                (b'-', Some(b'>')) => (Tok::Implies, 2),
                (b'(', _) => (Tok::LParen, 1),
                (b')', _) => (Tok::RParen, 1),
                (b'[', _) => (Tok::LBracket, 1),
                (b']', _) => (Tok::RBracket, 1),
                (b',', _) => (Tok::Comma, 1),
                (b':', _) => (Tok::Colon, 1),
                (b'.', _) => (Tok::Dot, 1),
                (b'|', _) => (Tok::Bar, 1),
                (b'+', _) => (Tok::Plus, 1),
                (b'-', _) => (Tok::Minus, 1),
                (b'*', _) => (Tok::Star, 1),
                (b'/', _) => (Tok::Slash, 1),
                (b'%', _) => (Tok::Percent, 1),
                (b'=', _) => (Tok::Eq, 1),
                (b'<', _) => (Tok::Lt, 1),
                (b'>', _) => (Tok::Gt, 1),
                (b'!', _) => (Tok::Bang, 1),
                _ => {
                    let ch = src[i..].chars().next().unwrap_or('?');
                    return Err(Error::syntax(
                        Span::new(line, col, i, i + ch.len_utf8()),
                        format!("unexpected character `{ch}`"),
                    ));
                }
            }
        };
        i += len;
        out.push(Token {
            tok,
            span: Span::new(line, col, start, i),
        });
    }
    let col = (src[line_start..].chars().count() + 1) as u32;
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(line, col, src.len(), src.len()),
    });
    Ok(out)
}
