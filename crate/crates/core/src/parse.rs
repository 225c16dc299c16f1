//! Text formats: complex literals, comma-separated coefficient lists and a small
//! recursive-descent parser for arithmetic expressions over complex numbers.
//!
//! Expression grammar (unary minus is accepted in front of any factor):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' uint)?
//! atom   := complex-literal | variable | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Which variables exist and whether `/` is allowed is decided by the caller
//! through [`Dialect`].

use crate::{Error, Result};
use num_complex::Complex64;

/// Nesting limit for parentheses and unary operators.
const MAX_NESTING: usize = 256;

/// Parsed expression before it is lowered into a domain type.
#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Const(Complex64),
    Var(char),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    Pow(Box<Ast>, u32),
    Exp(Box<Ast>),
}

#[derive(Debug, Clone, Copy)]
pub struct Dialect {
    pub variables: &'static [char],
    pub allow_division: bool,
}

/// One variable `x`, no division: the grammar of entire functions.
pub const ENTIRE: Dialect = Dialect { variables: &['x'], allow_division: false };
/// Coordinates `x, y, z` with division: functions on the surface.
pub const SURFACE: Dialect = Dialect { variables: &['x', 'y', 'z'], allow_division: true };

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax { offset, message: message.into() }
}

fn scan_number(bytes: &[u8], start: usize) -> usize {
    let mut i = start;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                let end = scan_number(bytes, i);
                let value: f64 = text[i..end]
                    .parse()
                    .map_err(|_| syntax(start, format!("bad number `{}`", &text[i..end])))?;
                i = end;
                let imaginary = i < bytes.len()
                    && bytes[i] == b'i'
                    && !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric());
                if imaginary {
                    i += 1;
                }
                out.push((Tok::Num(value, imaginary), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = i;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                let word = &text[i..end];
                i = end;
                if word == "i" {
                    out.push((Tok::Num(1.0, true), start));
                } else {
                    out.push((Tok::Ident(word.to_string()), start));
                }
                continue;
            }
            _ => return Err(syntax(start, format!("unexpected character `{}`", c as char))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    dialect: &'a Dialect,
    nesting: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(syntax(self.offset(), "nesting too deep"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash if self.dialect.allow_division => {
                    self.bump();
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => return Err(syntax(self.offset(), "division is not allowed here")),
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if *self.peek() == Tok::Minus {
            self.bump();
            self.enter()?;
            let inner = self.unary()?;
            self.nesting -= 1;
            return Ok(match inner {
                Ast::Const(c) => Ast::Const(-c),
                other => Ast::Neg(Box::new(other)),
            });
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump() {
            Tok::Num(v, false) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                Ok(Ast::Pow(Box::new(base), v as u32))
            }
            _ => Err(syntax(at, "expected unsigned integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v, imaginary) => Ok(Ast::Const(if imaginary {
                Complex64::new(0.0, v)
            } else {
                Complex64::new(v, 0.0)
            })),
            Tok::LParen => {
                self.enter()?;
                let e = self.expr()?;
                self.nesting -= 1;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if name == "exp" => {
                self.expect(Tok::LParen, "`(` after exp")?;
                self.enter()?;
                let e = self.expr()?;
                self.nesting -= 1;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Ast::Exp(Box::new(e)))
            }
            Tok::Ident(name) => {
                let mut chars = name.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if self.dialect.variables.contains(&c) => Ok(Ast::Var(c)),
                    _ => Err(Error::UnknownIdentifier(name)),
                }
            }
            Tok::End => Err(syntax(at, "unexpected end of input")),
            other => Err(syntax(at, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `text` in the given dialect.
pub fn parse_ast(text: &str, dialect: &Dialect) -> Result<Ast> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, dialect, nesting: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.offset(), "trailing input"));
    }
    Ok(e)
}

fn parse_real(s: &str, offset: usize) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => s.parse().map_err(|_| syntax(offset, format!("bad real `{s}`"))),
    }
}

/// Parses one complex literal: `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    let lead = text.len() - text.trim_start().len();
    if s.is_empty() {
        return Err(syntax(lead, "empty complex literal"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return s
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| syntax(lead, format!("bad complex literal `{s}`")));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k]
                .parse::<f64>()
                .map_err(|_| syntax(lead, format!("bad real part `{}`", &body[..k])))?;
            Ok(Complex64::new(re, parse_real(&body[k..], lead + k)?))
        }
        None => Ok(Complex64::new(0.0, parse_real(body, lead)?)),
    }
}

/// Parses a comma-separated list of complex literals.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let c = parse_complex(piece).map_err(|e| match e {
            Error::Syntax { offset: o, message } => Error::Syntax { offset: offset + o, message },
            other => other,
        })?;
        out.push(c);
        offset += piece.len() + 1;
    }
    Ok(out)
}

/// Formats a complex number so that [`parse_complex`] reads it back exactly.
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{:?}", c.re)
    } else if c.im.is_sign_negative() {
        format!("{:?}-{:?}i", c.re, -c.im)
    } else {
        format!("{:?}+{:?}i", c.re, c.im)
    }
}
