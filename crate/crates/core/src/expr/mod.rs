//! A small expression language for elements of K∨₀K, of free θ-algebras
//! and of their tensor products.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?          -- integer may be negative
//! atom    := number | 'w' | 'w1' | 'w2' | 'u' | generator
//!          | theta[n] | Theta[n] | thetaN | ThetaN
//!          | func '(' expr ')' | psi '[' rational ']' '(' expr ')' | '(' expr ')'
//! func    := Q | Qtilde | chi | coproduct
//! ```
//!
//! Any other identifier names a free θ-algebra generator (`x2`, `x4`, …).

mod eval;

pub use eval::{evaluate, Value};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::kk::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Q,
    Qtilde,
    Chi,
    Coproduct,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Q => "Q",
            Func::Qtilde => "Qtilde",
            Func::Chi => "chi",
            Func::Coproduct => "coproduct",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    /// The coordinate w.
    W,
    /// w₁ or w₂ in K∨₀K ⊗ K∨₀K.
    WSlot(usize),
    /// The Bott-class marker u.
    U,
    Gen(String),
    Theta(Family, u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Apply(Func, Box<Expr>),
    Psi(Rational, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Ident(s)
        } else if "+-*/^()[]·".contains(c) {
            chars.next();
            column += 1;
            Tok::Sym(if c == '·' { '*' } else { c })
        } else {
            return Err(Error::Syntax { line: l, column: col, message: format!("unexpected character `{c}`") });
        };
        out.push(Token { tok, line: l, column: col });
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.tokens[self.pos];
        Err(Error::Syntax { line: t.line, column: t.column, message: message.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
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
        let base = self.atom()?;
        if self.eat('^') {
            let negative = self.eat('-');
            let Tok::Int(n) = self.peek().clone() else { return self.error("expected an integer exponent") };
            self.bump();
            let n: i64 = i64::try_from(n).or_else(|_| self.error("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }));
        }
        Ok(base)
    }

    fn index(&mut self) -> Result<u32> {
        self.expect('[')?;
        let Tok::Int(n) = self.peek().clone() else { return self.error("expected a level") };
        self.bump();
        self.expect(']')?;
        u32::try_from(n).or_else(|_| self.error("level too large"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let negative = self.eat('-');
        let Tok::Int(n) = self.peek().clone() else { return self.error("expected a rational number") };
        self.bump();
        let mut r = Rational::from_integer(if negative { -n } else { n });
        if self.eat('/') {
            let Tok::Int(d) = self.peek().clone() else { return self.error("expected a denominator") };
            if d.is_zero() {
                return self.error("zero denominator");
            }
            self.bump();
            r /= Rational::from_integer(d);
        }
        Ok(r)
    }

    fn parenthesized(&mut self) -> Result<Expr> {
        self.expect('(')?;
        let e = self.expr()?;
        self.expect(')')?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Tok::Sym('(') => self.parenthesized(),
            Tok::Ident(name) => {
                self.bump();
                let func = match name.as_str() {
                    "Q" => Some(Func::Q),
                    "Qtilde" => Some(Func::Qtilde),
                    "chi" => Some(Func::Chi),
                    "coproduct" => Some(Func::Coproduct),
                    _ => None,
                };
                if let Some(f) = func {
                    return Ok(Expr::Apply(f, Box::new(self.parenthesized()?)));
                }
                match name.as_str() {
                    "w" => Ok(Expr::W),
                    "w1" => Ok(Expr::WSlot(0)),
                    "w2" => Ok(Expr::WSlot(1)),
                    "u" => Ok(Expr::U),
                    "psi" => {
                        self.expect('[')?;
                        let a = self.rational()?;
                        self.expect(']')?;
                        Ok(Expr::Psi(a, Box::new(self.parenthesized()?)))
                    }
                    "theta" | "Theta" => {
                        let family = if name == "theta" { Family::Theta } else { Family::BigTheta };
                        Ok(Expr::Theta(family, self.index()?))
                    }
                    _ => Ok(theta_shorthand(&name).unwrap_or(Expr::Gen(name))),
                }
            }
            Tok::End => self.error("unexpected end of input"),
            Tok::Sym(c) => self.error(format!("unexpected `{c}`")),
        }
    }
}

/// `Theta3`, `theta0`, …
fn theta_shorthand(name: &str) -> Option<Expr> {
    let (family, digits) = if let Some(d) = name.strip_prefix("Theta") {
        (Family::BigTheta, d)
    } else {
        (Family::Theta, name.strip_prefix("theta")?)
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(Expr::Theta(family, digits.parse().ok()?))
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut parser = Parser { tokens: lex(text)?, pos: 0 };
    let e = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.error("unexpected trailing input");
    }
    Ok(e)
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Num(r) if r.is_negative() || !r.denom().is_one() => 2,
        _ => 5,
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8| -> String {
            if precedence(e) < min {
                format!("({e})")
            } else {
                e.to_string()
            }
        };
        match self {
            Expr::Num(r) if r.is_negative() => write!(f, "-{}", wrap(&Expr::Num(-r), 3)),
            Expr::Num(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Expr::Num(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Expr::W => f.write_str("w"),
            Expr::WSlot(i) => write!(f, "w{}", i + 1),
            Expr::U => f.write_str("u"),
            Expr::Gen(name) => f.write_str(name),
            Expr::Theta(family, n) => write!(f, "{}[{n}]", family.symbol()),
            Expr::Neg(e) => write!(f, "-{}", wrap(e, 4)),
            Expr::Add(a, b) => write!(f, "{} + {}", wrap(a, 1), wrap(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrap(a, 1), wrap(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", wrap(a, 2), wrap(b, 3)),
            Expr::Div(a, b) => write!(f, "{}/{}", wrap(a, 2), wrap(b, 4)),
            Expr::Pow(a, n) => write!(f, "{}^{n}", wrap(a, 5)),
            Expr::Apply(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Psi(a, e) => {
                let a = if a.denom().is_one() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
                write!(f, "psi[{a}]({e})")
            }
        }
    }
}
