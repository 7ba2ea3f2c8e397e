//! Small arithmetic expressions over rationals: `+ - * /`, integer powers,
//! `abs(·)`, rational constants and variables `x y z w` or `x1 x2 …`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{abs, parse_q, pow, Q};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Num(Q),
    /// Zero-based variable index.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Abs(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()·−".contains(c) {
            out.push(Tok::Sym(match c {
                '·' => '*',
                '−' => '-',
                other => other,
            }));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in expression")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} in expression")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
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

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| Error::Parse(format!("bad exponent {n}")))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(Error::Parse("exponent must be a non-negative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(parse_q(&n)?))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                if id == "abs" {
                    self.expect('(')?;
                    let inner = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::Abs(Box::new(inner)));
                }
                variable_index(&id).map(Expr::Var)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

fn variable_index(id: &str) -> Result<usize> {
    match id {
        "x" => Ok(0),
        "y" => Ok(1),
        "z" => Ok(2),
        "w" => Ok(3),
        _ => {
            let digits = id.strip_prefix('x').ok_or_else(|| Error::Parse(format!("unknown variable {id:?}")))?;
            match digits.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(Error::Parse(format!("unknown variable {id:?}"))),
            }
        }
    }
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr> {
        let mut p = Parser { toks: tokenize(s)?, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in expression {s:?}")));
        }
        Ok(e)
    }

    /// Parses `;`-separated components.
    pub fn parse_list(s: &str) -> Result<Vec<Expr>> {
        s.split(';').map(Expr::parse).collect()
    }

    /// Number of variables referenced (one past the largest index).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Abs(a) => a.arity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.arity().max(b.arity()),
        }
    }

    pub fn eval(&self, point: &[Q]) -> Result<Q> {
        Ok(match self {
            Expr::Num(c) => c.clone(),
            Expr::Var(i) => point.get(*i).cloned().ok_or(Error::IndexOutOfRange { index: i + 1, dim: point.len() })?,
            Expr::Neg(a) => -a.eval(point)?,
            Expr::Add(a, b) => a.eval(point)? + b.eval(point)?,
            Expr::Sub(a, b) => a.eval(point)? - b.eval(point)?,
            Expr::Mul(a, b) => a.eval(point)? * b.eval(point)?,
            Expr::Div(a, b) => {
                let den = b.eval(point)?;
                if den.is_zero() {
                    return Err(Error::Parse("division by zero".into()));
                }
                a.eval(point)? / den
            }
            Expr::Pow(a, e) => pow(&a.eval(point)?, *e),
            Expr::Abs(a) => abs(&a.eval(point)?),
        })
    }

    /// The polynomial this expression denotes; fails on `abs` or division
    /// by a non-constant.
    pub fn to_poly(&self, nvars: usize) -> Result<Poly> {
        Ok(match self {
            Expr::Num(c) => Poly::constant(nvars, c.clone()),
            Expr::Var(i) => {
                if *i >= nvars {
                    return Err(Error::IndexOutOfRange { index: i + 1, dim: nvars });
                }
                Poly::var(nvars, *i)
            }
            Expr::Neg(a) => a.to_poly(nvars)?.neg(),
            Expr::Add(a, b) => a.to_poly(nvars)?.add(&b.to_poly(nvars)?),
            Expr::Sub(a, b) => a.to_poly(nvars)?.sub(&b.to_poly(nvars)?),
            Expr::Mul(a, b) => a.to_poly(nvars)?.mul(&b.to_poly(nvars)?),
            Expr::Div(a, b) => {
                let den = b.to_poly(nvars)?;
                if !den.is_constant() || den.is_zero() {
                    return Err(Error::Parse("division by a non-constant or zero".into()));
                }
                a.to_poly(nvars)?.scale(&(Q::one() / den.constant_term()))
            }
            Expr::Pow(a, e) => a.to_poly(nvars)?.pow(*e),
            Expr::Abs(_) => return Err(Error::Parse("abs(·) is not a polynomial".into())),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, e) => write!(f, "({a})^{e}"),
            Expr::Abs(a) => write!(f, "abs({a})"),
        }
    }
}
