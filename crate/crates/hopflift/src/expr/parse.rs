//! Recursive-descent / Pratt parser for the expression grammar:
//! identifiers `[a-zA-Z_][a-zA-Z0-9_]*`, integer and decimal literals,
//! binary `+ - * / ^` with conventional precedence (`^` right-associative
//! and binding tightest, unary minus between `*` and `^`), single-argument
//! function calls, and parentheses.
//!
//! Power exponents must fold to exact rational constants; `x^(1/2)` and
//! `x^0.5` are accepted, `x^y` is rejected.

use std::collections::BTreeSet;
use std::fmt;

use super::{rational_value, Expr, Function, Kind};

/// Syntax error with 1-based line/column of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Clone, Copy)]
struct Span {
    start: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn error_at(&self, start: usize, message: impl Into<String>) -> ParseError {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.src[..start.min(self.src.len())] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn next_token(&mut self) -> Result<(Tok, Span), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let span = Span { start };
        if self.pos >= self.src.len() {
            return Ok((Tok::Eof, span));
        }
        let b = self.src[self.pos];
        let tok = match b {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos < self.src.len() && self.src[self.pos] == b'.' {
                    self.pos += 1;
                    if self.pos >= self.src.len() || !self.src[self.pos].is_ascii_digit() {
                        return Err(self.error_at(self.pos, "expected digits after decimal point"));
                    }
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                }
                // optional exponent part, e.g. 1.5e-3
                if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
                    let mark = self.pos;
                    self.pos += 1;
                    if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                        self.pos += 1;
                    }
                    if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                            self.pos += 1;
                        }
                    } else {
                        self.pos = mark; // 'e' starts an identifier, not an exponent
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let value: f64 = text
                    .parse()
                    .map_err(|_| self.error_at(start, format!("invalid numeric literal '{text}'")))?;
                if !value.is_finite() {
                    return Err(self.error_at(start, format!("numeric literal '{text}' overflows")));
                }
                Tok::Number(value)
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Tok::Ident(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
            }
            _ => {
                return Err(self.error_at(
                    start,
                    format!("unexpected character '{}'", char::from(b)),
                ))
            }
        };
        Ok((tok, span))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: (Tok, Span),
    constants: &'a BTreeSet<String>,
    depth: usize,
}

const MAX_DEPTH: usize = 512;

// Infix binding powers: (left, right). `^` is right-associative.
const BP_ADD: (u8, u8) = (10, 11);
const BP_MUL: (u8, u8) = (20, 21);
const BP_POW: (u8, u8) = (31, 30);
// Prefix minus binds tighter than `*`/`/` and looser than `^`.
const BP_PREFIX_NEG: u8 = 25;

impl<'a> Parser<'a> {
    fn new(src: &'a str, constants: &'a BTreeSet<String>) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let current = lexer.next_token()?;
        Ok(Parser {
            lexer,
            current,
            constants,
            depth: 0,
        })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        self.current = self.lexer.next_token()?;
        Ok(())
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.lexer.error_at(self.current.1.start, message)
    }

    fn make_ident(&self, name: String) -> Expr {
        if name == "pi" || self.constants.contains(&name) {
            Expr::constant_named(name)
        } else {
            Expr::variable(name)
        }
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        match self.current.0.clone() {
            Tok::Number(v) => {
                self.advance()?;
                Ok(Expr::number(v))
            }
            Tok::Ident(name) => {
                self.advance()?;
                if self.current.0 == Tok::LParen {
                    let func = Function::from_name(&name);
                    if func.is_none() && name != "sqrt" {
                        return Err(self.error(format!("unknown function '{name}'")));
                    }
                    self.advance()?;
                    let arg = self.parse_bp(0)?;
                    if self.current.0 != Tok::RParen {
                        return Err(self.error("expected ')'"));
                    }
                    self.advance()?;
                    Ok(match func {
                        Some(f) => Expr::apply(f, arg),
                        None => Expr::sqrt(arg),
                    })
                } else if Function::from_name(&name).is_some() || name == "sqrt" {
                    Err(self.error(format!("expected '(' after function name '{name}'")))
                } else {
                    Ok(self.make_ident(name))
                }
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.parse_bp(0)?;
                if self.current.0 != Tok::RParen {
                    return Err(self.error("expected ')'"));
                }
                self.advance()?;
                Ok(inner)
            }
            Tok::Minus => {
                self.advance()?;
                let operand = self.parse_bp(BP_PREFIX_NEG)?;
                Ok(raw_negate(operand))
            }
            Tok::Eof => Err(self.error("unexpected end of input")),
            other => Err(self.error(format!("unexpected token {}", describe(&other)))),
        }
    }

    fn parse_bp(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression too deeply nested"));
        }
        let mut lhs = self.parse_primary()?;
        loop {
            let (l_bp, r_bp, op) = match self.current.0 {
                Tok::Plus => (BP_ADD.0, BP_ADD.1, '+'),
                Tok::Minus => (BP_ADD.0, BP_ADD.1, '-'),
                Tok::Star => (BP_MUL.0, BP_MUL.1, '*'),
                Tok::Slash => (BP_MUL.0, BP_MUL.1, '/'),
                Tok::Caret => (BP_POW.0, BP_POW.1, '^'),
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            let op_span = self.current.1;
            self.advance()?;
            let rhs = self.parse_bp(r_bp)?;
            lhs = match op {
                '+' => chain_sum(lhs, rhs),
                '-' => chain_sum(lhs, raw_negate(rhs)),
                '*' => chain_product(lhs, rhs),
                '/' => Expr::new_quotient_raw(lhs, rhs),
                '^' => {
                    let exp = rational_value(&rhs).ok_or_else(|| {
                        self.lexer.error_at(
                            op_span.start,
                            "power exponent must be an exact rational constant",
                        )
                    })?;
                    Expr::new_power_raw(lhs, exp)
                }
                _ => unreachable!(),
            };
        }
        self.depth -= 1;
        Ok(lhs)
    }
}

// Raw tree builders used by the parser: no folding, so that parsed input
// keeps its written structure (`x + 0` stays a sum).
impl Expr {
    fn new_sum_raw(children: Vec<Expr>) -> Expr {
        Expr::new(Kind::Sum(children))
    }
    fn new_product_raw(children: Vec<Expr>) -> Expr {
        Expr::new(Kind::Product(children))
    }
    fn new_quotient_raw(a: Expr, b: Expr) -> Expr {
        Expr::new(Kind::Quotient(a, b))
    }
    fn new_power_raw(base: Expr, exp: super::Exponent) -> Expr {
        Expr::new(Kind::Power(base, exp))
    }
    fn new_negate_raw(a: Expr) -> Expr {
        Expr::new(Kind::Negate(a))
    }
}

fn raw_negate(e: Expr) -> Expr {
    Expr::new_negate_raw(e)
}

// Left-associative chains flatten into one n-ary node so `a + b + c` parses
// the same way the printer emits it. Parenthesized operands stay nested.
fn chain_sum(lhs: Expr, rhs: Expr) -> Expr {
    match lhs.kind() {
        Kind::Sum(children) => {
            let mut v = children.clone();
            v.push(rhs);
            Expr::new_sum_raw(v)
        }
        _ => Expr::new_sum_raw(vec![lhs, rhs]),
    }
}

fn chain_product(lhs: Expr, rhs: Expr) -> Expr {
    match lhs.kind() {
        Kind::Product(children) => {
            let mut v = children.clone();
            v.push(rhs);
            Expr::new_product_raw(v)
        }
        _ => Expr::new_product_raw(vec![lhs, rhs]),
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Number(v) => format!("number '{v}'"),
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Parse with no declared constants: every identifier except `pi` is a free
/// variable.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    parse_with_constants(text, &BTreeSet::new())
}

/// Parse with a set of declared named constants (e.g. `kappa`); `pi` is
/// always a named constant.
pub fn parse_with_constants(text: &str, constants: &BTreeSet<String>) -> Result<Expr, ParseError> {
    let mut parser = Parser::new(text, constants)?;
    let expr = parser.parse_bp(0)?;
    if parser.current.0 != Tok::Eof {
        return Err(parser.error(format!("unexpected token {}", describe(&parser.current.0))));
    }
    Ok(expr)
}
