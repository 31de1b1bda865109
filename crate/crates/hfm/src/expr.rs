//! Scalar expressions of one variable `t`.
//!
//! Grammar (whitespace insignificant, `^` right-associative, unary minus
//! binding looser than `^`):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | primary ('^' factor)?
//! primary := number | 't' | name '(' expr ')' | '(' expr ')'
//! number  := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
//! ```
//!
//! Known function names are `gamma` and `sqrt`. There is no implicit
//! multiplication: `2t` is a syntax error, write `2*t`.

use std::fmt;

use thiserror::Error;

/// Byte range of a node in the source it was parsed from.
pub type Span = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Gamma,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Gamma => "gamma",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Parsed expression tree. Equality is structural and ignores source spans,
/// so a pretty-printed and reparsed tree compares equal to the original.
#[derive(Debug, Clone)]
pub struct Expr {
    kind: ExprKind,
    span: Span,
}

#[derive(Debug, Clone)]
enum ExprKind {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Num(a), Num(b)) => a == b,
            (Var, Var) => true,
            (Neg(a), Neg(b)) => a == b,
            (Add(a, b), Add(c, d))
            | (Sub(a, b), Sub(c, d))
            | (Mul(a, b), Mul(c, d))
            | (Div(a, b), Div(c, d))
            | (Pow(a, b), Pow(c, d)) => a == c && b == d,
            (Call(f, a), Call(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("malformed number")]
    BadNumber,
    #[error("number does not fit a finite double")]
    NumberOverflow,
    #[error("expected `{0}`")]
    Expected(char),
    #[error("trailing input")]
    TrailingInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalErrorKind {
    #[error("result is not finite")]
    NonFinite,
    #[error("gamma argument out of domain")]
    GammaDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{kind} in subexpression at bytes {}..{}", span.0, span.1)]
pub struct EvalError {
    pub span: Span,
    pub kind: EvalErrorKind,
}

/// Parse source text into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err(ParseErrorKind::TrailingInput));
    }
    Ok(e)
}

impl Expr {
    /// Convenience constructor for a constant.
    pub fn constant(v: f64) -> Expr {
        Expr {
            kind: ExprKind::Num(v),
            span: (0, 0),
        }
    }

    /// Evaluate at `t` in IEEE double precision. A non-finite intermediate
    /// result is an error carrying the span of the offending subexpression.
    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        use ExprKind::*;
        let v = match &self.kind {
            Num(v) => *v,
            Var => t,
            Neg(e) => -e.eval(t)?,
            Add(a, b) => a.eval(t)? + b.eval(t)?,
            Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Div(a, b) => a.eval(t)? / b.eval(t)?,
            Pow(a, b) => a.eval(t)?.powf(b.eval(t)?),
            Call(Func::Gamma, e) => {
                crate::opmat::gamma(e.eval(t)?).map_err(|_| EvalError {
                    span: self.span,
                    kind: EvalErrorKind::GammaDomain,
                })?
            }
            Call(Func::Sqrt, e) => e.eval(t)?.sqrt(),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError {
                span: self.span,
                kind: EvalErrorKind::NonFinite,
            })
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; reparsing it yields a structurally
    /// identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ExprKind::*;
        match &self.kind {
            Num(v) => write!(f, "{v:?}"),
            Var => write!(f, "t"),
            Neg(e) => write!(f, "-({e})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Pow(a, b) => write!(f, "({a} ^ {b})"),
            Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = self.binary(start, ExprKind::Add(Box::new(lhs), Box::new(rhs)));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = self.binary(start, ExprKind::Sub(Box::new(lhs), Box::new(rhs)));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.factor()?;
                lhs = self.binary(start, ExprKind::Mul(Box::new(lhs), Box::new(rhs)));
            } else if self.eat(b'/') {
                let rhs = self.factor()?;
                lhs = self.binary(start, ExprKind::Div(Box::new(lhs), Box::new(rhs)));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        if self.eat(b'-') {
            let inner = self.factor()?;
            return Ok(self.binary(start, ExprKind::Neg(Box::new(inner))));
        }
        let base = self.primary()?;
        if self.eat(b'^') {
            let exponent = self.factor()?;
            return Ok(self.binary(start, ExprKind::Pow(Box::new(base), Box::new(exponent))));
        }
        Ok(base)
    }

    fn binary(&self, start: usize, kind: ExprKind) -> Expr {
        Expr {
            kind,
            span: (start, self.pos),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        match self.peek() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some(b'(') => {
                self.eat(b'(');
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err(ParseErrorKind::Expected(')')));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                self.skip_ws();
                if name == "t" && self.peek() != Some(b'(') {
                    return Ok(Expr {
                        kind: ExprKind::Var,
                        span: (start, start + 1),
                    });
                }
                let func = match name.as_str() {
                    "gamma" => Func::Gamma,
                    "sqrt" => Func::Sqrt,
                    _ => {
                        self.pos = start;
                        return Err(self.err(ParseErrorKind::UnknownFunction(name)));
                    }
                };
                if !self.eat(b'(') {
                    return Err(self.err(ParseErrorKind::Expected('(')));
                }
                let arg = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err(ParseErrorKind::Expected(')')));
                }
                Ok(Expr {
                    kind: ExprKind::Call(func, Box::new(arg)),
                    span: (start, self.pos),
                })
            }
            Some(c) => Err(self.err(ParseErrorKind::UnexpectedChar(c as char))),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return Err(self.err(ParseErrorKind::BadNumber));
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                // not an exponent after all (e.g. `2*e` would be an ident)
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text.parse().map_err(|_| ParseError {
            offset: start,
            kind: ParseErrorKind::BadNumber,
        })?;
        if !value.is_finite() {
            return Err(ParseError {
                offset: start,
                kind: ParseErrorKind::NumberOverflow,
            });
        }
        let span = (start, self.pos);
        self.skip_ws();
        Ok(Expr {
            kind: ExprKind::Num(value),
            span,
        })
    }
}
