//! The commutative input language: rationals, variables, `+ - *`, unary minus,
//! and `^` with a non-negative integer literal. `d/dx` tokens are accepted and
//! only make sense when an expression is read as a differential operator.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::glue::DiffOperator;
use crate::poly::{PolyRing, Polynomial, H};
use crate::scalar::{fmt_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    /// `d/dx`.
    Deriv(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num { value: Rational, integer: bool },
    Ident(String),
    Deriv(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let ident_at = |mut j: usize| -> (String, usize) {
        let mut s = String::new();
        while j < chars.len() && is_ident_char(chars[j]) {
            s.push(chars[j]);
            j += 1;
        }
        while j < chars.len() && chars[j] == '\'' {
            s.push('\'');
            j += 1;
        }
        (s, j)
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let numer: BigInt = chars[i..j].iter().collect::<String>().parse().expect("digits");
            if j + 1 < chars.len() && chars[j] == '/' && chars[j + 1].is_ascii_digit() {
                let k0 = j + 1;
                let mut k = k0;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let denom: BigInt = chars[k0..k].iter().collect::<String>().parse().expect("digits");
                if denom.is_zero() {
                    return Err(syntax(l0, c0, "zero denominator"));
                }
                i = k;
                Tok::Num {
                    value: Rational::new(numer, denom),
                    integer: false,
                }
            } else {
                i = j;
                Tok::Num {
                    value: Rational::from_integer(numer),
                    integer: true,
                }
            }
        } else if c == 'd'
            && chars.get(i + 1) == Some(&'/')
            && chars.get(i + 2) == Some(&'d')
            && chars.get(i + 3).is_some_and(|&x| is_ident_start(x))
        {
            let (name, j) = ident_at(i + 3);
            i = j;
            Tok::Deriv(name)
        } else if is_ident_start(c) {
            let (name, j) = ident_at(i);
            i = j;
            Tok::Ident(name)
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => return Err(syntax(l0, c0, format!("unexpected character `{other}`"))),
            }
        };
        col += i - start;
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        syntax(t.line, t.column, message)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Num { value, integer: true } => {
                let e = value
                    .to_integer()
                    .to_u32()
                    .ok_or_else(|| syntax(t.line, t.column, "exponent is too large"))?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(syntax(t.line, t.column, "exponent must be a non-negative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Num { value, .. } => Ok(Expr::Num(value)),
            Tok::Ident(name) => Ok(Expr::Var(name)),
            Tok::Deriv(name) => Ok(Expr::Deriv(name)),
            Tok::LParen => {
                let e = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error_here("expected `)`"));
                }
                self.bump();
                Ok(e)
            }
            Tok::End => Err(syntax(t.line, t.column, "unexpected end of input")),
            other => Err(syntax(t.line, t.column, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        _ => "token",
    }
}

pub fn parse_expression(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.error_here("unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(v) if !v.is_integer() => 4,
            _ => 5,
        }
    }

    fn wrap(&self, min: u8) -> String {
        if self.precedence() < min {
            format!("({self})")
        } else {
            self.to_string()
        }
    }

    /// Every variable name referenced, in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Num(_) | Expr::Deriv(_) => {}
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// Canonical text: minimal parentheses for the grammar's precedence and
/// left associativity, so printing and re-parsing gives the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{}", fmt_rational(v)),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Deriv(v) => write!(f, "d/d{v}"),
            Expr::Neg(a) => write!(f, "-{}", a.wrap(3)),
            Expr::Add(a, b) => write!(f, "{} + {}", a.wrap(1), b.wrap(2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", a.wrap(1), b.wrap(2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", a.wrap(2), b.wrap(3)),
            Expr::Pow(a, e) => write!(f, "{}^{e}", a.wrap(5)),
        }
    }
}

/// Evaluates in `ring`; variables must pass `allowed` and exist in the ring.
pub fn eval_polynomial(e: &Expr, ring: &Arc<PolyRing>, allowed: &dyn Fn(&str) -> bool) -> Result<Polynomial> {
    Ok(match e {
        Expr::Num(v) => Polynomial::constant(ring, v.clone()),
        Expr::Var(v) => {
            if !allowed(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
            Polynomial::var_named(ring, v)?
        }
        Expr::Deriv(v) => {
            return Err(Error::Usage(format!("d/d{v} is only allowed in operator expressions")));
        }
        Expr::Neg(a) => -eval_polynomial(a, ring, allowed)?,
        Expr::Add(a, b) => eval_polynomial(a, ring, allowed)? + eval_polynomial(b, ring, allowed)?,
        Expr::Sub(a, b) => eval_polynomial(a, ring, allowed)? - eval_polynomial(b, ring, allowed)?,
        Expr::Mul(a, b) => eval_polynomial(a, ring, allowed)? * eval_polynomial(b, ring, allowed)?,
        Expr::Pow(a, k) => eval_polynomial(a, ring, allowed)?.pow(*k),
    })
}

/// Variables visible to user input: coordinates, `h`, and declared parameters.
pub fn input_context(ring: &Arc<PolyRing>, params: &[String]) -> Result<Vec<String>> {
    let mut names: Vec<String> = ring.coord_names().to_vec();
    names.push(H.to_string());
    for p in params {
        if ring.index_of(p).is_none() {
            return Err(Error::UnknownVariable(p.clone()));
        }
        if !names.contains(p) {
            names.push(p.clone());
        }
    }
    Ok(names)
}

/// Parses and evaluates `src` over coordinates, `h` and the declared `params`.
pub fn parse_polynomial(src: &str, ring: &Arc<PolyRing>, params: &[String]) -> Result<Polynomial> {
    let ctx = input_context(ring, params)?;
    let e = parse_expression(src)?;
    eval_polynomial(&e, ring, &|v| ctx.iter().any(|c| c == v))
}

/// A constant expression such as `3/2` or `-1/4`, as used by numeric flags.
pub fn parse_rational(src: &str) -> Result<Rational> {
    fn eval(e: &Expr) -> Result<Rational> {
        Ok(match e {
            Expr::Num(v) => v.clone(),
            Expr::Var(v) | Expr::Deriv(v) => return Err(Error::UnknownVariable(v.clone())),
            Expr::Neg(a) => -eval(a)?,
            Expr::Add(a, b) => eval(a)? + eval(b)?,
            Expr::Sub(a, b) => eval(a)? - eval(b)?,
            Expr::Mul(a, b) => eval(a)? * eval(b)?,
            Expr::Pow(a, k) => num_traits::pow(eval(a)?, *k as usize),
        })
    }
    eval(&parse_expression(src)?)
}

/// Reads an expression as a differential operator: polynomials act by
/// multiplication, `d/dx` differentiates, and `*` composes.
pub fn eval_operator(e: &Expr, ring: &Arc<PolyRing>) -> Result<DiffOperator> {
    let coords = ring.coord_names();
    Ok(match e {
        Expr::Num(v) => DiffOperator::multiplication(&Polynomial::constant(ring, v.clone())),
        Expr::Var(v) => {
            if !coords.contains(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
            DiffOperator::multiplication(&Polynomial::var_named(ring, v)?)
        }
        Expr::Deriv(v) => {
            let i = coords
                .iter()
                .position(|c| c == v)
                .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            DiffOperator::partial(ring, i)
        }
        Expr::Neg(a) => eval_operator(a, ring)?.scale(&-Rational::from_integer(1.into())),
        Expr::Add(a, b) => eval_operator(a, ring)?.add(&eval_operator(b, ring)?),
        Expr::Sub(a, b) => eval_operator(a, ring)?.sub(&eval_operator(b, ring)?),
        Expr::Mul(a, b) => eval_operator(a, ring)?.compose(&eval_operator(b, ring)?),
        Expr::Pow(a, k) => {
            let base = eval_operator(a, ring)?;
            let mut out = DiffOperator::identity(ring);
            for _ in 0..*k {
                out = out.compose(&base);
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;

    #[test]
    fn precedence() {
        let e = parse_expression("-x^2 + 2*y*z - 1/2").unwrap();
        assert_eq!(e.to_string(), "-x^2 + 2*y*z - 1/2");
        let e = parse_expression("a - (b - c)").unwrap();
        assert_eq!(e.to_string(), "a - (b - c)");
        let e = parse_expression("(a*b)*c").unwrap();
        assert_eq!(e.to_string(), "a*b*c");
        assert_eq!(parse_expression("-(a*b)").unwrap().to_string(), "-(a*b)");
        assert_eq!(parse_expression("(-a)^2").unwrap().to_string(), "(-a)^2");
    }

    #[test]
    fn su2_invariant() {
        let alg = LieAlgebra::su2();
        let p = parse_polynomial("x^2+y^2+z^2", alg.ring(), &[]).unwrap();
        assert_eq!(p.to_string(), "x^2 + y^2 + z^2");
        let zero = parse_polynomial("q*p - p*q", LieAlgebra::heisenberg().ring(), &[]).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn errors() {
        match parse_expression("x^(-1)") {
            Err(Error::Syntax { line: 1, column: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression("x^-1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("x +\n  * y"), Err(Error::Syntax { line: 2, column: 3, .. })));
        assert!(matches!(parse_expression("x^(−1)"), Err(Error::Syntax { .. })));
        let ring = LieAlgebra::su2().ring().clone();
        assert_eq!(parse_polynomial("x + w", &ring, &[]), Err(Error::UnknownVariable("w".into())));
        assert_eq!(parse_polynomial("r*x", &ring, &[]), Err(Error::UnknownVariable("r".into())));
        assert!(parse_polynomial("r*x", &ring, &["r".into()]).is_ok());
    }

    #[test]
    fn operators() {
        let ring = PolyRing::with_coords(&["q", "p"]).unwrap();
        let op = eval_operator(&parse_expression("d/dq*d/dp + q*d/dq^2").unwrap(), &ring).unwrap();
        let f = parse_polynomial("q^3*p", &ring, &[]).unwrap();
        assert_eq!(op.apply(&f).to_string(), "6*q^2*p + 3*q^2");
    }
}
