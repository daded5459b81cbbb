//! Arithmetic expressions over the two outcome variables `s1` and `s2`.
//!
//! Grammar (whitespace is insignificant between tokens):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := base ("^" integer)?
//! base   := number | "s1" | "s2" | "(" expr ")" | "-" base
//!         | ident "(" expr ("," expr)* ")"      ident in {min, max, abs}
//! ```
//!
//! Unary minus applies to a `base`, so `-s1^2` reads as `(-s1)^2`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    S1,
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Min,
    Max,
    Abs,
}

impl Func {
    fn from_ident(name: &str) -> Option<Self> {
        match name {
            "min" => Some(Func::Min),
            "max" => Some(Func::Max),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Min => "min",
            Func::Max => "max",
            Func::Abs => "abs",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            Func::Abs => 1,
        }
    }
}

/// Expression tree. Parsed constants are always finite and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueExpr {
    Const(f64),
    Var(Var),
    Neg(Box<ValueExpr>),
    Binary(BinOp, Box<ValueExpr>, Box<ValueExpr>),
    Pow(Box<ValueExpr>, i32),
    Call(Func, Vec<ValueExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier \"{name}\" at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("function {name} takes {expected} argument(s), got {found} (offset {offset})")]
    Arity {
        offset: usize,
        name: &'static str,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at (s1, s2) = ({s1}, {s2})")]
    DivisionByZero { s1: f64, s2: f64 },
}

/// Affine form `c + a1*s1 + a2*s2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub constant: f64,
    pub coef_s1: f64,
    pub coef_s2: f64,
}

impl Affine {
    pub const fn constant(c: f64) -> Self {
        Affine {
            constant: c,
            coef_s1: 0.0,
            coef_s2: 0.0,
        }
    }

    pub fn eval(&self, s1: f64, s2: f64) -> f64 {
        self.constant + self.coef_s1 * s1 + self.coef_s2 * s2
    }

    pub fn scale(self, k: f64) -> Self {
        Affine {
            constant: self.constant * k,
            coef_s1: self.coef_s1 * k,
            coef_s2: self.coef_s2 * k,
        }
    }

    pub fn plus(self, other: Self) -> Self {
        Affine {
            constant: self.constant + other.constant,
            coef_s1: self.coef_s1 + other.coef_s1,
            coef_s2: self.coef_s2 + other.coef_s2,
        }
    }

    fn is_constant(&self) -> bool {
        self.coef_s1 == 0.0 && self.coef_s2 == 0.0
    }
}

impl ValueExpr {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_value_expr(text)
    }

    pub fn var(v: Var) -> Self {
        ValueExpr::Var(v)
    }

    pub fn eval(&self, s1: f64, s2: f64) -> Result<f64, EvalError> {
        Ok(match self {
            ValueExpr::Const(c) => *c,
            ValueExpr::Var(Var::S1) => s1,
            ValueExpr::Var(Var::S2) => s2,
            ValueExpr::Neg(inner) => -inner.eval(s1, s2)?,
            ValueExpr::Binary(op, lhs, rhs) => {
                let a = lhs.eval(s1, s2)?;
                let b = rhs.eval(s1, s2)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero { s1, s2 });
                        }
                        a / b
                    }
                }
            }
            ValueExpr::Pow(base, exp) => {
                let b = base.eval(s1, s2)?;
                if *exp < 0 && b == 0.0 {
                    return Err(EvalError::DivisionByZero { s1, s2 });
                }
                b.powi(*exp)
            }
            ValueExpr::Call(func, args) => match func {
                Func::Abs => args[0].eval(s1, s2)?.abs(),
                Func::Min => args[0].eval(s1, s2)?.min(args[1].eval(s1, s2)?),
                Func::Max => args[0].eval(s1, s2)?.max(args[1].eval(s1, s2)?),
            },
        })
    }

    pub fn has_vars(&self) -> bool {
        match self {
            ValueExpr::Const(_) => false,
            ValueExpr::Var(_) => true,
            ValueExpr::Neg(e) | ValueExpr::Pow(e, _) => e.has_vars(),
            ValueExpr::Binary(_, a, b) => a.has_vars() || b.has_vars(),
            ValueExpr::Call(_, args) => args.iter().any(ValueExpr::has_vars),
        }
    }

    /// Structural affine coefficients, if the tree is affine by construction.
    ///
    /// Variable-free subtrees fold to constants. Beyond that only sums,
    /// negation, products with a constant factor and division by a constant
    /// are accepted; `min`, `max`, `abs` and `^` over variables are not.
    pub fn affine(&self) -> Option<Affine> {
        if !self.has_vars() {
            return self.eval(0.0, 0.0).ok().filter(|c| c.is_finite()).map(Affine::constant);
        }
        match self {
            ValueExpr::Const(_) => unreachable!("constants have no variables"),
            ValueExpr::Var(Var::S1) => Some(Affine {
                constant: 0.0,
                coef_s1: 1.0,
                coef_s2: 0.0,
            }),
            ValueExpr::Var(Var::S2) => Some(Affine {
                constant: 0.0,
                coef_s1: 0.0,
                coef_s2: 1.0,
            }),
            ValueExpr::Neg(inner) => inner.affine().map(|a| a.scale(-1.0)),
            ValueExpr::Binary(op, lhs, rhs) => {
                let a = lhs.affine()?;
                let b = rhs.affine()?;
                match op {
                    BinOp::Add => Some(a.plus(b)),
                    BinOp::Sub => Some(a.plus(b.scale(-1.0))),
                    BinOp::Mul if a.is_constant() => Some(b.scale(a.constant)),
                    BinOp::Mul if b.is_constant() => Some(a.scale(b.constant)),
                    BinOp::Div if b.is_constant() && b.constant != 0.0 => {
                        Some(a.scale(1.0 / b.constant))
                    }
                    _ => None,
                }
            }
            ValueExpr::Pow(..) | ValueExpr::Call(..) => None,
        }
    }

    fn is_base(&self) -> bool {
        matches!(
            self,
            ValueExpr::Const(_) | ValueExpr::Var(_) | ValueExpr::Neg(_) | ValueExpr::Call(..)
        )
    }

    fn write_base(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_base() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        match self {
            ValueExpr::Binary(op, ..) if op.precedence() < min_prec => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueExpr::Const(c) => write!(f, "{c:?}"),
            ValueExpr::Var(Var::S1) => f.write_str("s1"),
            ValueExpr::Var(Var::S2) => f.write_str("s2"),
            ValueExpr::Neg(inner) => {
                f.write_str("-")?;
                inner.write_base(f)
            }
            ValueExpr::Binary(op, lhs, rhs) => {
                let p = op.precedence();
                lhs.write_operand(f, p)?;
                write!(f, " {} ", op.symbol())?;
                // left associative: an equal-precedence right operand needs parens
                rhs.write_operand(f, p + 1)
            }
            ValueExpr::Pow(base, exp) => {
                base.write_base(f)?;
                write!(f, "^{exp}")
            }
            ValueExpr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for ValueExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_value_expr(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(n) => format!("number {n}"),
        Tok::Ident(s) => format!("identifier \"{s}\""),
        Tok::Plus => "\"+\"".into(),
        Tok::Minus => "\"-\"".into(),
        Tok::Star => "\"*\"".into(),
        Tok::Slash => "\"/\"".into(),
        Tok::Caret => "\"^\"".into(),
        Tok::LParen => "\"(\"".into(),
        Tok::RParen => "\")\"".into(),
        Tok::Comma => "\",\"".into(),
        Tok::End => "end of input".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
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
            b',' => Tok::Comma,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
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
                let lexeme = &text[start..i];
                let value: f64 = lexeme.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    message: format!("malformed number \"{lexeme}\""),
                })?;
                if !value.is_finite() {
                    return Err(ParseError::Syntax {
                        offset: start,
                        message: format!("number \"{lexeme}\" is out of range"),
                    });
                }
                out.push((start, Tok::Num(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {wanted}, found {}", describe(self.peek())),
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn expr(&mut self) -> Result<ValueExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = ValueExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<ValueExpr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = ValueExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<ValueExpr, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let offset = self.offset();
        match self.bump() {
            Tok::Num(n) if n.fract() == 0.0 && n <= i32::MAX as f64 => {
                let e = n as i32;
                Ok(ValueExpr::Pow(Box::new(base), if negative { -e } else { e }))
            }
            _ => Err(ParseError::Syntax {
                offset,
                message: "exponent must be an integer literal".into(),
            }),
        }
    }

    fn base(&mut self) -> Result<ValueExpr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(ValueExpr::Const(n))
            }
            Tok::Minus => {
                self.bump();
                Ok(ValueExpr::Neg(Box::new(self.base()?)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "\")\"")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "s1" => return Ok(ValueExpr::Var(Var::S1)),
                    "s2" => return Ok(ValueExpr::Var(Var::S2)),
                    _ => {}
                }
                let func = Func::from_ident(&name)
                    .ok_or(ParseError::UnknownIdentifier { offset, name })?;
                self.expect(Tok::LParen, "\"(\" after function name")?;
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen, "\")\" or \",\"")?;
                if args.len() != func.arity() {
                    return Err(ParseError::Arity {
                        offset,
                        name: func.name(),
                        expected: func.arity(),
                        found: args.len(),
                    });
                }
                Ok(ValueExpr::Call(func, args))
            }
            _ => Err(self.unexpected("a number, variable, \"(\" or function call")),
        }
    }
}

pub fn parse_value_expr(text: &str) -> Result<ValueExpr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(expr)
}

pub fn eval_value_expr(expr: &ValueExpr, s1: f64, s2: f64) -> Result<f64, EvalError> {
    expr.eval(s1, s2)
}
