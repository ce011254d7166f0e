//! Text front end for expressions and differential forms.
//!
//! ```text
//! form      := term-d (("+"|"-") term-d)* ("=" "0")?
//! term-d    := expr? dmarker
//! dmarker   := "d" identifier
//! expr      := add
//! add       := mul (("+"|"-") mul)*
//! mul       := unary (("*"|"/") unary)*
//! unary     := "-" unary | power
//! power     := atom ("^" unary)?
//! atom      := number | identifier | func "(" expr ")" | "(" expr ")"
//! func      := "sin" | "cos" | "tan" | "exp" | "ln" | "sqrt"
//! ```
//!
//! Implicit multiplication is rejected. `dx` is a differential marker only
//! when parsing a form; in an expression it is an ordinary variable.

mod format;
mod lexer;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::DifferentialForm;
use crate::expr::{Expr, Func, NamedConst, Rational};

pub use format::{format_expr, format_form};
pub use lexer::{tokenize, Mode, Token, TokenKind};

/// Byte range in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub offset: usize,
    pub len: usize,
}

impl Span {
    pub fn new(offset: usize, len: usize) -> Span {
        Span { offset, len }
    }

    pub fn end(&self) -> usize {
        self.offset + self.len
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    DuplicateVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub span: Span,
    pub expected: Vec<TokenKind>,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn syntax(message: impl Into<String>, span: Span, expected: Vec<TokenKind>) -> ParseError {
        ParseError { message: message.into(), span, expected, kind: ParseErrorKind::Syntax }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.span.offset)?;
        if !self.expected.is_empty() {
            let list: Vec<String> = self.expected.iter().map(ToString::to_string).collect();
            write!(f, " (expected {})", list.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

const EXPR_START: [TokenKind; 4] =
    [TokenKind::Number, TokenKind::Identifier, TokenKind::LParen, TokenKind::Minus];

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    input: &'a str,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, mode: Mode) -> Result<Parser<'a>, ParseError> {
        Ok(Parser { tokens: tokenize(input, mode)?, pos: 0, input })
    }

    fn peek(&self) -> TokenKind {
        self.peek_at(0)
    }

    fn peek_at(&self, ahead: usize) -> TokenKind {
        self.tokens.get(self.pos + ahead).map_or(TokenKind::End, |t| t.kind)
    }

    fn span_here(&self) -> Span {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => Span::new(self.input.len(), 0),
        }
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        self.pos += 1;
        tok
    }

    fn error_here(&self, message: &str, expected: &[TokenKind]) -> ParseError {
        let found = match self.tokens.get(self.pos) {
            Some(t) => format!("`{}`", t.lexeme),
            None => "end of input".to_string(),
        };
        ParseError::syntax(format!("{message}, found {found}"), self.span_here(), expected.to_vec())
    }

    fn expect(&mut self, kind: TokenKind, message: &str) -> Result<Token, ParseError> {
        if self.peek() == kind {
            Ok(self.advance())
        } else {
            Err(self.error_here(message, &[kind]))
        }
    }

    fn expect_end(&self, also: &[TokenKind]) -> Result<(), ParseError> {
        if self.peek() == TokenKind::End {
            return Ok(());
        }
        let mut expected = vec![TokenKind::End];
        expected.extend_from_slice(also);
        Err(self.error_here("unexpected token", &expected))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut ops = vec![self.mul()?];
        loop {
            match self.peek() {
                TokenKind::Plus => {
                    self.advance();
                    ops.push(self.mul()?);
                }
                TokenKind::Minus => {
                    self.advance();
                    ops.push(Expr::neg(self.mul()?));
                }
                _ => break,
            }
        }
        Ok(Expr::add(ops))
    }

    fn mul(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                TokenKind::Star => {
                    self.advance();
                    let rhs = self.unary()?;
                    acc = Expr::mul([acc, rhs]);
                }
                TokenKind::Slash => {
                    self.advance();
                    let rhs = self.unary()?;
                    acc = Expr::div(acc, rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == TokenKind::Minus {
            self.advance();
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == TokenKind::Caret {
            self.advance();
            let exponent = self.unary()?;
            return Ok(Expr::pow(base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            TokenKind::Number => {
                let tok = self.advance();
                Ok(Expr::Const(parse_decimal(&tok.lexeme)))
            }
            TokenKind::Identifier => {
                let tok = self.advance();
                let name = tok.lexeme.as_str();
                if let Some(f) = Func::from_name(name) {
                    self.expect(TokenKind::LParen, &format!("`{name}` must be applied with parentheses"))?;
                    let arg = self.expr()?;
                    self.expect(TokenKind::RParen, "unclosed function argument")?;
                    return Ok(Expr::apply(f, arg));
                }
                Ok(match name {
                    "e" => Expr::Named(NamedConst::E),
                    "pi" => Expr::Named(NamedConst::Pi),
                    _ => Expr::var(name),
                })
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "unclosed parenthesis")?;
                Ok(inner)
            }
            _ => Err(self.error_here("expected an expression", &EXPR_START)),
        }
    }

    /// One `expr? dmarker` term, returning the variable, its span and the
    /// coefficient.
    fn term_d(&mut self, negate: bool) -> Result<(String, Span, Expr), ParseError> {
        let coefficient = if self.peek() == TokenKind::DiffMarker { Expr::one() } else { self.expr()? };
        if self.peek() != TokenKind::DiffMarker {
            let mut expected = vec![TokenKind::DiffMarker];
            expected.extend([TokenKind::Plus, TokenKind::Minus, TokenKind::Star, TokenKind::Slash]);
            return Err(self.error_here("expected a differential after the coefficient", &expected));
        }
        let marker = self.advance();
        let var = marker.marker_var().unwrap().to_string();
        let coefficient = if negate { Expr::neg(coefficient) } else { coefficient };
        Ok((var, marker.span, coefficient))
    }

    fn form(&mut self) -> Result<DifferentialForm, ParseError> {
        let mut entries: Vec<(String, Expr)> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut negate = false;
        if self.peek() == TokenKind::Minus && self.peek_at(1) == TokenKind::DiffMarker {
            self.advance();
            negate = true;
        }
        loop {
            let (var, span, coefficient) = self.term_d(negate)?;
            if !seen.insert(var.clone()) {
                return Err(ParseError {
                    message: format!("variable `{var}` has more than one differential"),
                    span,
                    expected: Vec::new(),
                    kind: ParseErrorKind::DuplicateVariable(var),
                });
            }
            entries.push((var, coefficient));
            match self.peek() {
                TokenKind::Plus => negate = false,
                TokenKind::Minus => negate = true,
                _ => break,
            }
            self.advance();
        }
        if self.peek() == TokenKind::Equals {
            self.advance();
            let zero = self.expect(TokenKind::Number, "a form must equal zero")?;
            if !parse_decimal(&zero.lexeme).is_zero() {
                return Err(ParseError::syntax("a form must equal zero", zero.span, vec![TokenKind::Number]));
            }
            self.expect_end(&[])?;
        } else {
            self.expect_end(&[TokenKind::Plus, TokenKind::Minus, TokenKind::Equals])?;
        }
        Ok(DifferentialForm::new(entries).expect("entries are nonempty and distinct"))
    }
}

/// Decimal literal to exact rational (`0.5` is `1/2`).
fn parse_decimal(lexeme: &str) -> Rational {
    let (int_part, frac_part) = lexeme.split_once('.').unwrap_or((lexeme, ""));
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().unwrap() };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Rational::new(numer, if denom.is_zero() { BigInt::one() } else { denom })
}

pub fn parse_expression(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(input, Mode::Expression)?;
    let e = p.expr()?;
    p.expect_end(&[TokenKind::Plus, TokenKind::Minus, TokenKind::Star, TokenKind::Slash, TokenKind::Caret])?;
    Ok(e)
}

pub fn parse_form(input: &str) -> Result<DifferentialForm, ParseError> {
    let mut p = Parser::new(input, Mode::Form)?;
    p.form()
}
