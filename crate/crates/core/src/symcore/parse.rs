//! Parser for polynomial and rational-function literals such as
//! `3/4*x1^2*p_2 - x3`.
//!
//! Grammar: sums of products of powers; `/` divides; parentheses group;
//! unary minus binds tighter than `*`.

use num_bigint::BigInt;

use super::field::Rsf;
use super::poly::{Var, Q};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, at: usize, msg: impl Into<String>) -> Error {
        Error::Parse { column: at + 1, message: msg.into() }
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        self.pos += 1;
        let t = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Num(s.parse().unwrap())
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v = Var::parse(s).ok_or_else(|| self.err(start, format!("unknown variable `{s}`")))?;
                if v.index() > self.n {
                    return Err(self.err(start, format!("variable `{s}` exceeds dimension {}", self.n)));
                }
                Tok::Var(v)
            }
            _ => return Err(self.err(start, format!("unexpected character `{}`", c as char))),
        };
        Ok((start, t))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    look: (usize, Tok),
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(usize, Tok)> {
        let next = self.lex.next()?;
        Ok(std::mem::replace(&mut self.look, next))
    }

    fn expr(&mut self) -> Result<Rsf> {
        let mut acc = self.term()?;
        loop {
            match self.look.1 {
                Tok::Plus => {
                    self.bump()?;
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump()?;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Rsf> {
        let mut acc = self.unary()?;
        loop {
            match self.look.1 {
                Tok::Star => {
                    self.bump()?;
                    acc = acc * self.unary()?;
                }
                Tok::Slash => {
                    let at = self.bump()?.0;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|_| self.lex.err(at, "division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Rsf> {
        match self.look.1 {
            Tok::Minus => {
                self.bump()?;
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Rsf> {
        let base = self.atom()?;
        if self.look.1 != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        let (at, t) = self.bump()?;
        match t {
            Tok::Num(e) => {
                let e: i32 = e.try_into().map_err(|_| self.lex.err(at, "exponent too large"))?;
                Ok(base.pow(e))
            }
            _ => Err(self.lex.err(at, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Rsf> {
        let (at, t) = self.bump()?;
        match t {
            Tok::Num(v) => Ok(Rsf::constant(Q::from_integer(v))),
            Tok::Var(v) => Ok(Rsf::var(v)),
            Tok::LParen => {
                let e = self.expr()?;
                let (at2, close) = self.bump()?;
                if close != Tok::RParen {
                    return Err(self.lex.err(at2, "expected `)`"));
                }
                Ok(e)
            }
            Tok::End => Err(self.lex.err(at, "unexpected end of input")),
            other => Err(self.lex.err(at, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse a rational-function literal over the chart `x1..xn, p1..pn`.
pub fn parse_field(src: &str, n: usize) -> Result<Rsf> {
    let mut lex = Lexer { src: src.as_bytes(), pos: 0, n };
    let look = lex.next()?;
    let mut p = Parser { lex, look };
    let v = p.expr()?;
    if p.look.1 != Tok::End {
        return Err(p.lex.err(p.look.0, "trailing input"));
    }
    Ok(v)
}
