use std::fmt;

use super::{ParseError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Number,
    Identifier,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    /// `d` glued to an identifier, recognized only when lexing forms.
    DiffMarker,
    Equals,
    End,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Number => "number",
            TokenKind::Identifier => "identifier",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::Caret => "`^`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::Comma => "`,`",
            TokenKind::DiffMarker => "differential (e.g. `dx`)",
            TokenKind::Equals => "`=`",
            TokenKind::End => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

impl Token {
    /// The variable named by a differential marker (`dx` -> `x`).
    pub fn marker_var(&self) -> Option<&str> {
        (self.kind == TokenKind::DiffMarker).then(|| &self.lexeme[1..])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Expression,
    Form,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `input` into tokens. Whitespace separates tokens and is dropped;
/// every other byte belongs to exactly one token.
pub fn tokenize(input: &str, mode: Mode) -> Result<Vec<Token>, ParseError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = input[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let kind = match c {
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            '^' => Some(TokenKind::Caret),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            ',' => Some(TokenKind::Comma),
            '=' => Some(TokenKind::Equals),
            _ => None,
        };
        if let Some(kind) = kind {
            i += 1;
            tokens.push(Token { kind, lexeme: input[start..i].to_string(), span: Span::new(start, 1) });
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let mut seen_dot = false;
            let mut digits = 0;
            while i < bytes.len() {
                let b = bytes[i] as char;
                if b.is_ascii_digit() {
                    digits += 1;
                } else if b == '.' && !seen_dot {
                    seen_dot = true;
                } else {
                    break;
                }
                i += 1;
            }
            if digits == 0 {
                return Err(ParseError::syntax(
                    "malformed number",
                    Span::new(start, i - start),
                    vec![TokenKind::Number],
                ));
            }
            tokens.push(Token {
                kind: TokenKind::Number,
                lexeme: input[start..i].to_string(),
                span: Span::new(start, i - start),
            });
            continue;
        }
        if is_ident_start(c) {
            while i < bytes.len() && is_ident_continue(bytes[i] as char) {
                i += 1;
            }
            let lexeme = &input[start..i];
            let is_marker = mode == Mode::Form
                && lexeme.len() >= 2
                && lexeme.starts_with('d')
                && is_ident_start(lexeme[1..].chars().next().unwrap());
            let kind = if is_marker { TokenKind::DiffMarker } else { TokenKind::Identifier };
            tokens.push(Token { kind, lexeme: lexeme.to_string(), span: Span::new(start, i - start) });
            continue;
        }
        return Err(ParseError::syntax(
            format!("unexpected character `{c}`"),
            Span::new(start, c.len_utf8()),
            Vec::new(),
        ));
    }
    Ok(tokens)
}
