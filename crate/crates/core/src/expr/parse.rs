//! Recursive-descent parser for the polynomial grammar
//!
//! ```text
//! integer  ::= [0-9]+
//! rational ::= integer "/" integer
//! atom     ::= variable | integer | rational | "(" expr ")"
//! power    ::= atom ["^" integer]
//! term     ::= power ("*" power)*
//! expr     ::= ["-"] term (("+" | "-") term)*
//! ```
//!
//! Whitespace between tokens is ignored. Juxtaposition (`4x`) is rejected.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ExactScalar, MultiPoly, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownVariable(String),
    NegativeExponent,
    ExponentTooLarge,
    ZeroDenominator,
}

/// Syntax error with the byte offset where it was detected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {:?}", c)?,
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input")?,
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable {:?}", v)?,
            ParseErrorKind::NegativeExponent => f.write_str("negative exponent")?,
            ParseErrorKind::ExponentTooLarge => f.write_str("exponent too large")?,
            ParseErrorKind::ZeroDenominator => f.write_str("zero denominator")?,
        }
        write!(f, " at position {}", self.position)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, kind: ParseErrorKind, position: usize) -> PResult<T> {
        Err(ParseError { kind, position })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected<T>(&mut self) -> PResult<T> {
        match self.peek() {
            Some(_) => {
                let c = std::str::from_utf8(&self.src[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or('\u{FFFD}');
                self.err(ParseErrorKind::UnexpectedChar(c), self.pos)
            }
            None => self.err(ParseErrorKind::UnexpectedEnd, self.pos),
        }
    }

    fn expr(&mut self) -> PResult<MultiPoly> {
        let negate = self.peek() == Some(b'-');
        if negate {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<MultiPoly> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> PResult<MultiPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(b'-') => self.err(ParseErrorKind::NegativeExponent, self.pos),
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let digits = self.digits();
                let exp: u32 = digits
                    .parse()
                    .or_else(|_| self.err(ParseErrorKind::ExponentTooLarge, start))?;
                Ok(base.pow(exp))
            }
            _ => self.unexpected(),
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn atom(&mut self) -> PResult<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.unexpected();
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                if self.peek() != Some(b'/') {
                    return Ok(MultiPoly::constant(self.ring, ExactScalar::from_integer(num)));
                }
                self.pos += 1;
                let den_pos = match self.peek() {
                    Some(c) if c.is_ascii_digit() => self.pos,
                    _ => return self.unexpected(),
                };
                let den: BigInt = self.digits().parse().expect("digits");
                if den.is_zero() {
                    return self.err(ParseErrorKind::ZeroDenominator, den_pos);
                }
                Ok(MultiPoly::constant(self.ring, ExactScalar::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
                match MultiPoly::var_named(self.ring, name) {
                    Some(v) => Ok(v),
                    None => self.err(ParseErrorKind::UnknownVariable(name.to_string()), start),
                }
            }
            _ => self.unexpected(),
        }
    }
}

/// Parses `text` into canonical expanded form over `ring`.
pub fn parse_poly(text: &str, ring: &Ring) -> Result<MultiPoly, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let poly = parser.expr()?;
    if parser.peek().is_some() {
        return parser.unexpected();
    }
    Ok(poly)
}

impl Ring {
    /// Parses `text` in this ring.
    ///
    /// # Panics
    /// On a parse error; intended for fixture literals.
    pub fn poly(&self, text: &str) -> MultiPoly {
        parse_poly(text, self).unwrap_or_else(|e| panic!("bad polynomial literal {text:?}: {e}"))
    }
}
