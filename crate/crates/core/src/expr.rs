//! Expression syntax shared by model files and CGS inputs.
//!
//! Grammar: sums and differences of products and quotients of powers of
//! atoms; atoms are integers, identifiers, `I` and parenthesized
//! expressions. Division is only allowed by nonzero constants.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{Coeff, CoeffScalar, GaussRat, QPoly, RawPoly, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    /// 1-based character column within the expression string.
    pub column: usize,
    pub message: String,
}

impl ExprError {
    fn at(column: usize, message: impl Into<String>) -> Self {
        Self { column, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Clone, Debug)]
pub enum Expr {
    Num(Q),
    Ident(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Num(text.parse().unwrap()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ExprError::at(col, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let col = self.col();
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), col);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| ExprError::at(col, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(ExprError::at(col, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Ident(name, col))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ExprError::at(self.col(), "expected ')'"));
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(ExprError::at(col, format!("unexpected '{c}'"))),
            None => Err(ExprError::at(col, "unexpected end of expression")),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::at(p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Target ring for expression evaluation.
pub trait ExprRing: Sized + Clone {
    fn from_q(q: Q) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn pow(&self, e: u32) -> Self;
    /// Inverse of a nonzero constant; `None` otherwise.
    fn const_inverse(&self) -> Option<Self>;
}

impl ExprRing for QPoly {
    fn from_q(q: Q) -> Self {
        QPoly::constant(q)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: u32) -> Self {
        SparsePolyPow::pow(self, e)
    }
    fn const_inverse(&self) -> Option<Self> {
        let c = self.as_constant()?;
        (!c.is_zero()).then(|| QPoly::constant(Q::one() / c))
    }
}

impl ExprRing for RawPoly {
    fn from_q(q: Q) -> Self {
        RawPoly::constant(CoeffScalar::constant(GaussRat::real(q)))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: u32) -> Self {
        SparsePolyPow::pow(self, e)
    }
    fn const_inverse(&self) -> Option<Self> {
        if !self.is_constant() {
            return None;
        }
        let s = self.constant_term();
        if !s.is_constant() {
            return None;
        }
        let inv = s.constant_term().inv()?;
        Some(RawPoly::constant(CoeffScalar::constant(inv)))
    }
}

/// Disambiguates `pow` between the inherent method and the trait method.
trait SparsePolyPow {
    fn pow(&self, e: u32) -> Self;
}

impl<C: Coeff> SparsePolyPow for crate::algebra::SparsePoly<C> {
    fn pow(&self, e: u32) -> Self {
        crate::algebra::SparsePoly::pow(self, e)
    }
}

pub fn eval<R: ExprRing>(e: &Expr, resolve: &dyn Fn(&str) -> Option<R>) -> Result<R, ExprError> {
    Ok(match e {
        Expr::Num(q) => R::from_q(q.clone()),
        Expr::Ident(name, col) => resolve(name).ok_or_else(|| ExprError::at(*col, format!("unknown identifier '{name}'")))?,
        Expr::Add(a, b) => eval(a, resolve)?.add(&eval(b, resolve)?),
        Expr::Sub(a, b) => eval(a, resolve)?.sub(&eval(b, resolve)?),
        Expr::Mul(a, b) => eval(a, resolve)?.mul(&eval(b, resolve)?),
        Expr::Div(a, b, col) => {
            let d = eval(b, resolve)?;
            let inv = d.const_inverse().ok_or_else(|| ExprError::at(*col, "division is only allowed by a nonzero constant"))?;
            eval(a, resolve)?.mul(&inv)
        }
        Expr::Neg(a) => eval(a, resolve)?.neg(),
        Expr::Pow(a, k) => ExprRing::pow(&eval(a, resolve)?, *k),
    })
}

pub fn parse_and_eval<R: ExprRing>(src: &str, resolve: &dyn Fn(&str) -> Option<R>) -> Result<R, ExprError> {
    eval(&parse(src)?, resolve)
}
