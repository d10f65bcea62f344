//! Text syntax for functions and operators.
//!
//! ```text
//! expr   = term { ("+" | "-") term } ;
//! term   = unary { ("*" | "/") unary } ;
//! unary  = "-" unary | power ;
//! power  = atom [ "^" integer ] ;
//! atom   = integer | identifier | "Dx" | "Dy" | "(" expr ")" ;
//! ```
//!
//! `*` composes when an operator is involved. The divisor of `/` must be a
//! function, and a non-constant one only when the dividend is a function too.
//! The printed forms of [`Lpdo`] and [`RatFunc`] parse back to equal values.
//!
//! Field declarations: `qxy` or `qxy;E:Dx=-E,Dy=0;F:Dx=...,Dy=...`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Pos, Result};
use crate::field::{DiffField, FieldBuilder, GeneratorSpec};
use crate::lpdo::Lpdo;
use crate::poly::Rational;
use crate::ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Dx,
    Dy,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Dx => f.write_str("`Dx`"),
            Tok::Dy => f.write_str("`Dy`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            match s.as_str() {
                "Dx" => Tok::Dx,
                "Dy" => Tok::Dy,
                _ => Tok::Ident(s),
            }
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
            }
        };
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

/// Parse tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident(String, Pos),
    Dx,
    Dy,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

const MAX_EXPONENT: u32 = 256;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
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
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    let (_, pos) = self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == &Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != &Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump().0 {
            Tok::Int(n) => {
                let e: u32 = n
                    .try_into()
                    .ok()
                    .filter(|e| *e <= MAX_EXPONENT)
                    .ok_or_else(|| syntax(pos, format!("exponent exceeds {MAX_EXPONENT}")))?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            t => Err(syntax(
                pos,
                format!("expected a nonnegative integer exponent, found {t}"),
            )),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Ident(s) => Ok(Expr::Ident(s, pos)),
            Tok::Dx => Ok(Expr::Dx),
            Tok::Dy => Ok(Expr::Dy),
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.pos();
                match self.bump().0 {
                    Tok::RParen => Ok(e),
                    t => Err(syntax(close, format!("expected `)`, found {t}"))),
                }
            }
            t => Err(syntax(pos, format!("expected an operand, found {t}"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let e = p.expr()?;
    let pos = p.pos();
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(syntax(pos, format!("unexpected {t}"))),
    }
}

/// Result of evaluating an expression over a field.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(RatFunc),
    Operator(Lpdo),
}

impl Value {
    pub fn into_lpdo(self, field: &Arc<DiffField>) -> Lpdo {
        match self {
            Value::Scalar(c) => Lpdo::scalar(field, c),
            Value::Operator(l) => l,
        }
    }

    pub fn into_scalar(self) -> Result<RatFunc> {
        match self {
            Value::Scalar(c) => Ok(c),
            Value::Operator(l) if l.is_scalar() => Ok(l.coeff(0, 0)),
            Value::Operator(_) => Err(Error::NotScalar),
        }
    }
}

fn binary(
    field: &Arc<DiffField>,
    a: Value,
    b: Value,
    scalar: impl Fn(&RatFunc, &RatFunc) -> RatFunc,
    op: impl Fn(&Lpdo, &Lpdo) -> Result<Lpdo>,
) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(scalar(&x, &y))),
        (a, b) => Ok(Value::Operator(op(&a.into_lpdo(field), &b.into_lpdo(field))?)),
    }
}

pub fn eval(e: &Expr, field: &Arc<DiffField>) -> Result<Value> {
    Ok(match e {
        Expr::Int(n) => Value::Scalar(RatFunc::from_rational(Rational::from_integer(n.clone()))),
        Expr::Ident(name, pos) => match field.index_of(name) {
            Some(v) => Value::Scalar(RatFunc::var(v)),
            None => {
                return Err(Error::UnknownIdentifier {
                    name: name.clone(),
                    pos: *pos,
                })
            }
        },
        Expr::Dx => Value::Operator(Lpdo::dx(field)),
        Expr::Dy => Value::Operator(Lpdo::dy(field)),
        Expr::Neg(a) => match eval(a, field)? {
            Value::Scalar(x) => Value::Scalar(-&x),
            Value::Operator(l) => Value::Operator(l.neg()),
        },
        Expr::Add(a, b) => binary(field, eval(a, field)?, eval(b, field)?, |x, y| x + y, Lpdo::add)?,
        Expr::Sub(a, b) => binary(field, eval(a, field)?, eval(b, field)?, |x, y| x - y, Lpdo::sub)?,
        Expr::Mul(a, b) => {
            binary(field, eval(a, field)?, eval(b, field)?, |x, y| x * y, Lpdo::compose)?
        }
        Expr::Div(a, b, pos) => {
            let den = match eval(b, field)? {
                Value::Scalar(d) => d,
                Value::Operator(_) => {
                    return Err(syntax(*pos, "cannot divide by a differential operator"))
                }
            };
            if den.is_zero() {
                return Err(syntax(*pos, "division by zero"));
            }
            match eval(a, field)? {
                Value::Scalar(x) => Value::Scalar(x.div(&den)?),
                Value::Operator(l) => match den.constant_value() {
                    Some(c) => Value::Operator(l.scale_left(&RatFunc::from_rational(
                        Rational::from_integer(1.into()) / c,
                    ))),
                    None => {
                        return Err(syntax(
                            *pos,
                            "an operator may only be divided by a constant",
                        ))
                    }
                },
            }
        }
        Expr::Pow(a, n) => match eval(a, field)? {
            Value::Scalar(x) => Value::Scalar(x.pow(*n as i32)?),
            Value::Operator(l) => Value::Operator(l.pow(*n)?),
        },
    })
}

pub fn parse_value(text: &str, field: &Arc<DiffField>) -> Result<Value> {
    eval(&parse(text)?, field)
}

pub fn parse_operator(text: &str, field: &Arc<DiffField>) -> Result<Lpdo> {
    Ok(parse_value(text, field)?.into_lpdo(field))
}

pub fn parse_scalar(text: &str, field: &Arc<DiffField>) -> Result<RatFunc> {
    parse_value(text, field)?.into_scalar()
}

/// Builds a field from `qxy` or `qxy;NAME:Dx=expr,Dy=expr;...`. The
/// derivative expressions may mention every declared generator.
pub fn parse_field_spec(spec: &str) -> Result<Arc<DiffField>> {
    let mut parts = spec.split(';').map(str::trim);
    match parts.next() {
        Some("qxy") => {}
        other => {
            return Err(Error::FieldDeclaration(format!(
                "expected `qxy` as base field, found `{}`",
                other.unwrap_or("")
            )))
        }
    }
    let mut decls = Vec::new();
    for part in parts.filter(|p| !p.is_empty()) {
        let (name, rest) = part.split_once(':').ok_or_else(|| {
            Error::FieldDeclaration(format!("expected `NAME:Dx=...,Dy=...`, found `{part}`"))
        })?;
        let (mut dx, mut dy) = (None, None);
        for item in rest.split(',') {
            let (lhs, rhs) = item.split_once('=').ok_or_else(|| {
                Error::FieldDeclaration(format!("expected `Dx=...` or `Dy=...`, found `{item}`"))
            })?;
            match lhs.trim() {
                "Dx" => dx = Some(rhs.trim().to_string()),
                "Dy" => dy = Some(rhs.trim().to_string()),
                other => {
                    return Err(Error::FieldDeclaration(format!(
                        "unknown derivation `{other}`"
                    )))
                }
            }
        }
        decls.push((name.trim().to_string(), dx, dy));
    }
    if decls.is_empty() {
        return Ok(DiffField::standard());
    }
    let mut preview = FieldBuilder::standard();
    for (name, _, _) in &decls {
        preview = preview.generator(
            name,
            GeneratorSpec::Explicit {
                dx: RatFunc::zero(),
                dy: RatFunc::zero(),
            },
        )?;
    }
    let preview = preview.build()?;
    let mut b = FieldBuilder::standard();
    for (name, dx, dy) in &decls {
        let read = |s: &Option<String>| -> Result<RatFunc> {
            match s {
                None => Ok(RatFunc::zero()),
                Some(t) => parse_scalar(t, &preview),
            }
        };
        b = b.generator(
            name,
            GeneratorSpec::Explicit {
                dx: read(dx)?,
                dy: read(dy)?,
            },
        )?;
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landau::Landau;

    #[test]
    fn parses_landau_operators() {
        let l = Landau::new();
        let f = &l.field;
        assert_eq!(parse_operator("Dx + x*Dy", f).unwrap(), l.p);
        assert_eq!(parse_operator("Dx + 1", f).unwrap(), l.q);
        assert_eq!(
            parse_operator("Dx^2 + x*Dx*Dy + Dx + (x + 2)*Dy", f).unwrap(),
            l.r
        );
    }

    #[test]
    fn composition_is_noncommutative() {
        let f = DiffField::standard();
        let a = parse_operator("Dx*x", &f).unwrap();
        assert_eq!(a.to_string(), "x*Dx + 1");
    }

    #[test]
    fn error_positions() {
        let f = DiffField::standard();
        match parse_operator("Dx^", &f) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, Pos { line: 1, column: 4 }),
            other => panic!("{other:?}"),
        }
        match parse_operator("Dx +\n  z", &f) {
            Err(Error::UnknownIdentifier { name, pos }) => {
                assert_eq!(name, "z");
                assert_eq!(pos, Pos { line: 2, column: 3 });
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_operator("Dx/x", &f).is_err());
        assert!(parse_operator("x/Dx", &f).is_err());
        assert!(parse_operator("x^-1", &f).is_err());
    }

    #[test]
    fn precedence() {
        let f = DiffField::standard();
        assert_eq!(
            parse_scalar("-x^2", &f).unwrap(),
            -&(&f.x() * &f.x())
        );
        assert_eq!(
            parse_scalar("1/2*x", &f).unwrap(),
            f.x().scale(&Rational::new(1.into(), 2.into()))
        );
    }

    #[test]
    fn field_spec() {
        let f = parse_field_spec("qxy;E:Dx=-E,Dy=0").unwrap();
        let e = parse_scalar("E", &f).unwrap();
        assert_eq!(f.derive(&e, crate::field::Axis::X).unwrap(), -&e);
        assert!(matches!(
            parse_field_spec("qxy;E:Dx=y,Dy=0"),
            Err(Error::NonCommuting(_))
        ));
    }
}
