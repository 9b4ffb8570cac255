//! Shared text grammar for polynomial-like expressions.
//!
//! Accepts sums and differences of products, integer literals, single-letter
//! symbols, parentheses, implicit multiplication (`2x`), division, and
//! powers whose exponent is an integer or a parenthesized fraction such as
//! `t^(3/2)` or `t^(-1/2^3)`. Parsing produces an [`Expr`] tree which an
//! [`EvalContext`] turns into a concrete value.

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Token {
    Int(u64),
    Sym(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

pub fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..=i].iter().collect();
                let v = text
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("integer literal {text} too large")))?;
                out.push(Token::Int(v));
            }
            'a'..='z' | 'A'..='Z' => out.push(Token::Sym(c)),
            '+' => out.push(Token::Plus),
            '-' => out.push(Token::Minus),
            '*' => out.push(Token::Star),
            '/' => out.push(Token::Slash),
            '^' => out.push(Token::Caret),
            '(' => out.push(Token::LParen),
            ')' => out.push(Token::RParen),
            ',' => out.push(Token::Comma),
            _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

/// A rational exponent `num / den`, `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exponent {
    pub num: i64,
    pub den: u64,
}

impl Exponent {
    pub fn integer(&self) -> Option<i64> {
        (self.den == 1).then_some(self.num)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(u64),
    Sym(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
}

/// Recursive-descent parser over a token slice.
pub struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        Self { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<Token> {
        self.toks.get(self.pos).copied()
    }

    pub fn bump(&mut self) -> Option<Token> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn expect(&mut self, t: Token) -> Result<()> {
        match self.bump() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Int(_) | Token::Sym(_) | Token::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(Token::Caret) {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some(Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Token::Int(v)) => {
                let v = i64::try_from(v).map_err(|_| Error::Parse("exponent too large".into()))?;
                Ok(if neg { -v } else { v })
            }
            t => Err(Error::Parse(format!("expected integer, found {t:?}"))),
        }
    }

    fn unsigned(&mut self) -> Result<u64> {
        match self.bump() {
            Some(Token::Int(v)) => Ok(v),
            t => Err(Error::Parse(format!("expected integer, found {t:?}"))),
        }
    }

    /// `n`, `-n`, `(n)`, `(p/q)` or `(p/2^k)`.
    pub fn exponent(&mut self) -> Result<Exponent> {
        if self.peek() != Some(Token::LParen) {
            return Ok(Exponent { num: self.signed_int()?, den: 1 });
        }
        self.pos += 1;
        let num = self.signed_int()?;
        let mut den = 1u64;
        if self.peek() == Some(Token::Slash) {
            self.pos += 1;
            den = self.unsigned()?;
            if self.peek() == Some(Token::Caret) {
                self.pos += 1;
                let k = self.unsigned()?;
                den = u32::try_from(k)
                    .ok()
                    .and_then(|k| den.checked_pow(k))
                    .ok_or_else(|| Error::Parse("exponent denominator too large".into()))?;
            }
            if den == 0 {
                return Err(Error::Parse("zero denominator in exponent".into()));
            }
        }
        self.expect(Token::RParen)?;
        Ok(Exponent { num, den })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Token::Int(v)) => Ok(Expr::Int(v)),
            Some(Token::Sym(c)) => Ok(Expr::Sym(c)),
            Some(Token::LParen) => {
                let e = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(e)
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser::new(&toks);
    let e = p.expr()?;
    if !p.at_end() {
        return Err(Error::Parse(format!("trailing input at token {:?}", p.peek())));
    }
    Ok(e)
}

/// Interprets an expression tree in some algebra.
pub trait EvalContext {
    type Value;

    fn int(&self, n: u64) -> Result<Self::Value>;
    fn symbol(&self, c: char) -> Result<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn pow(&self, a: Self::Value, e: Exponent) -> Result<Self::Value>;

    fn eval(&self, e: &Expr) -> Result<Self::Value> {
        match e {
            Expr::Int(n) => self.int(*n),
            Expr::Sym(c) => self.symbol(*c),
            Expr::Neg(a) => self.neg(self.eval(a)?),
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?),
            Expr::Sub(a, b) => self.sub(self.eval(a)?, self.eval(b)?),
            Expr::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?),
            Expr::Div(a, b) => self.div(self.eval(a)?, self.eval(b)?),
            Expr::Pow(a, k) => self.pow(self.eval(a)?, *k),
        }
    }

    fn parse(&self, s: &str) -> Result<Self::Value> {
        self.eval(&parse_expr(s)?)
    }
}

/// Maps the field generator symbol `a` to its encoded value.
pub fn generator_symbol(field: &FieldSpec, c: char) -> Option<u64> {
    (c == 'a' && !field.is_prime_field()).then(|| field.generator())
}

pub(crate) fn unknown_symbol(c: char) -> Error {
    Error::Parse(format!("unknown symbol {c:?}"))
}

/// Polynomials over `field` in `var`; division must be exact.
pub struct PolyContext<'a> {
    pub field: &'a FieldSpec,
    pub var: char,
}

impl EvalContext for PolyContext<'_> {
    type Value = Poly;

    fn int(&self, n: u64) -> Result<Poly> {
        let p = self.field.characteristic();
        Ok(Poly::constant(self.field.clone(), self.var, n % p))
    }

    fn symbol(&self, c: char) -> Result<Poly> {
        if c == self.var {
            return Ok(Poly::x(self.field.clone(), self.var));
        }
        generator_symbol(self.field, c)
            .map(|g| Poly::constant(self.field.clone(), self.var, g))
            .ok_or_else(|| unknown_symbol(c))
    }

    fn add(&self, a: Poly, b: Poly) -> Result<Poly> {
        a.try_add(&b)
    }

    fn sub(&self, a: Poly, b: Poly) -> Result<Poly> {
        a.try_sub(&b)
    }

    fn neg(&self, a: Poly) -> Result<Poly> {
        Ok(a.neg())
    }

    fn mul(&self, a: Poly, b: Poly) -> Result<Poly> {
        a.try_mul(&b)
    }

    fn div(&self, a: Poly, b: Poly) -> Result<Poly> {
        a.div_exact(&b)
    }

    fn pow(&self, a: Poly, e: Exponent) -> Result<Poly> {
        match e.integer() {
            Some(k) if k >= 0 => Ok(a.pow(k as u64)),
            _ => Err(Error::Parse(format!("polynomial exponent must be a nonnegative integer, got {}/{}", e.num, e.den))),
        }
    }
}

pub fn parse_poly(s: &str, field: &FieldSpec, var: char) -> Result<Poly> {
    PolyContext { field, var }.parse(s)
}
