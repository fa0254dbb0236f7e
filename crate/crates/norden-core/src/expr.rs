//! The analytic expression language chart components are written in.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" int)?
//! atom   := number | "pi" | "e" | "x" int | fn "(" expr ")" | "(" expr ")"
//! fn     := sin | cos | tan | exp | log | sqrt | sinh | cosh | tanh
//! ```
//!
//! `^` binds tighter than unary minus, so `-x1^2` is `-(x1^2)`. Exponents
//! are integer literals (possibly negative), which keeps jet evaluation
//! exact. Numbers are decimal with an optional exponent part. Coordinates
//! are `x1 .. xD` where `D` is the dimension declared at parse time.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use crate::jet::{Elementary, Jet, JetError};

/// A parse failure with the byte offset it occurred at.
#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl core::error::Error for ParseError {}

/// An evaluation failure, annotated with the text span of the subexpression
/// that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalError {
    pub span: (usize, usize),
    pub fragment: String,
    pub source: JetError,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "evaluation error in `{}` (bytes {}..{}): {}",
            self.fragment, self.span.0, self.span.1, self.source
        )
    }
}

impl core::error::Error for EvalError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
enum NodeKind {
    Number(f64),
    Pi,
    E,
    /// Zero-based coordinate index.
    Coord(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Elementary, Box<Node>),
}

#[derive(Clone, Debug, PartialEq)]
struct Node {
    kind: NodeKind,
    span: (usize, usize),
}

/// A parsed, dimension-checked expression.
#[derive(Clone, Debug)]
pub struct Expression {
    text: String,
    dim: usize,
    root: Node,
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.root.structural_eq(&other.root)
    }
}

impl Node {
    fn structural_eq(&self, other: &Node) -> bool {
        match (&self.kind, &other.kind) {
            (NodeKind::Number(a), NodeKind::Number(b)) => a == b,
            (NodeKind::Pi, NodeKind::Pi) | (NodeKind::E, NodeKind::E) => true,
            (NodeKind::Coord(a), NodeKind::Coord(b)) => a == b,
            (NodeKind::Neg(a), NodeKind::Neg(b)) => a.structural_eq(b),
            (NodeKind::Bin(op, a1, a2), NodeKind::Bin(oq, b1, b2)) => {
                op == oq && a1.structural_eq(b1) && a2.structural_eq(b2)
            }
            (NodeKind::Pow(a, k), NodeKind::Pow(b, l)) => k == l && a.structural_eq(b),
            (NodeKind::Call(f, a), NodeKind::Call(g, b)) => f == g && a.structural_eq(b),
            _ => false,
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(self.pos, format!("expected {what}")))
        }
    }

    fn parse_expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    let span = (lhs.span.0, rhs.span.1);
                    lhs = Node {
                        kind: NodeKind::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs)),
                        span,
                    };
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    let span = (lhs.span.0, rhs.span.1);
                    lhs = Node {
                        kind: NodeKind::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs)),
                        span,
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.parse_unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    let span = (lhs.span.0, rhs.span.1);
                    lhs = Node {
                        kind: NodeKind::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs)),
                        span,
                    };
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    let span = (lhs.span.0, rhs.span.1);
                    lhs = Node {
                        kind: NodeKind::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs)),
                        span,
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Node, ParseError> {
        if self.peek() == Some(b'-') {
            let start = self.pos;
            self.pos += 1;
            let inner = self.parse_unary()?;
            let span = (start, inner.span.1);
            return Ok(Node {
                kind: NodeKind::Neg(Box::new(inner)),
                span,
            });
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Node, ParseError> {
        let base = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let (k, end) = self.parse_int_exponent()?;
            let span = (base.span.0, end);
            return Ok(Node {
                kind: NodeKind::Pow(Box::new(base), k),
                span,
            });
        }
        Ok(base)
    }

    fn parse_int_exponent(&mut self) -> Result<(i32, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut p = self.pos;
        if self.bytes.get(p) == Some(&b'-') {
            p += 1;
        }
        let digits_start = p;
        while p < self.bytes.len() && self.bytes[p].is_ascii_digit() {
            p += 1;
        }
        if p == digits_start {
            return Err(self.err(start, "expected integer exponent"));
        }
        // a fractional exponent is a dedicated error, not a generic one
        if self.bytes.get(p) == Some(&b'.') {
            return Err(self.err(p, "exponent must be an integer"));
        }
        let s = &self.text[start..p];
        let k: i32 = s
            .parse()
            .map_err(|_| self.err(start, "exponent out of range"))?;
        self.pos = p;
        Ok((k, p))
    }

    fn parse_atom(&mut self) -> Result<Node, ParseError> {
        let c = self
            .peek()
            .ok_or_else(|| self.err(self.pos, "unexpected end of input"))?;
        let start = self.pos;
        match c {
            b'(' => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err(self.pos, "unclosed parenthesis"));
                }
                self.pos += 1;
                Ok(Node {
                    kind: inner.kind,
                    span: (start, self.pos),
                })
            }
            b'0'..=b'9' | b'.' => self.parse_number(),
            b'a'..=b'z' | b'A'..=b'Z' => self.parse_ident(),
            other => Err(self.err(start, format!("unexpected character `{}`", other as char))),
        }
    }

    fn parse_number(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        let mut p = self.pos;
        while p < self.bytes.len() && self.bytes[p].is_ascii_digit() {
            p += 1;
        }
        if self.bytes.get(p) == Some(&b'.') {
            p += 1;
            while p < self.bytes.len() && self.bytes[p].is_ascii_digit() {
                p += 1;
            }
        }
        if matches!(self.bytes.get(p), Some(&b'e') | Some(&b'E')) {
            let mut q = p + 1;
            if matches!(self.bytes.get(q), Some(&b'+') | Some(&b'-')) {
                q += 1;
            }
            if self.bytes.get(q).is_some_and(|b| b.is_ascii_digit()) {
                p = q;
                while p < self.bytes.len() && self.bytes[p].is_ascii_digit() {
                    p += 1;
                }
            }
        }
        let s = &self.text[start..p];
        let v: f64 = s
            .parse()
            .map_err(|_| self.err(start, format!("invalid number `{s}`")))?;
        self.pos = p;
        Ok(Node {
            kind: NodeKind::Number(v),
            span: (start, p),
        })
    }

    fn parse_ident(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        let mut p = self.pos;
        while p < self.bytes.len()
            && (self.bytes[p].is_ascii_alphanumeric() || self.bytes[p] == b'_')
        {
            p += 1;
        }
        let name = &self.text[start..p];
        self.pos = p;
        if name == "pi" {
            return Ok(Node {
                kind: NodeKind::Pi,
                span: (start, p),
            });
        }
        if name == "e" {
            return Ok(Node {
                kind: NodeKind::E,
                span: (start, p),
            });
        }
        if let Some(rest) = name.strip_prefix('x') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let k: usize = rest
                    .parse()
                    .map_err(|_| self.err(start, "coordinate index out of range"))?;
                if k < 1 || k > self.dim {
                    return Err(self.err(
                        start,
                        format!("coordinate x{k} out of range for dimension {}", self.dim),
                    ));
                }
                return Ok(Node {
                    kind: NodeKind::Coord(k - 1),
                    span: (start, p),
                });
            }
        }
        if let Some(f) = Elementary::from_name(name) {
            self.expect(b'(', "`(` after function name")?;
            let arg = self.parse_expr()?;
            if self.peek() != Some(b')') {
                return Err(self.err(self.pos, "unclosed parenthesis"));
            }
            self.pos += 1;
            return Ok(Node {
                kind: NodeKind::Call(f, Box::new(arg)),
                span: (start, self.pos),
            });
        }
        Err(self.err(start, format!("unknown identifier `{name}`")))
    }
}

impl Expression {
    /// Parse `text` against a declared coordinate dimension.
    pub fn parse(text: &str, dim: usize) -> Result<Expression, ParseError> {
        let mut p = Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            dim,
        };
        let root = p.parse_expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.err(p.pos, "unexpected trailing input"));
        }
        Ok(Expression {
            text: text.to_string(),
            dim,
            root,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The original source text.
    pub fn text(&self) -> &str {
        &self.text
    }

    /// Zero-based coordinate indices appearing in the expression.
    pub fn free_variables(&self) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        fn walk(n: &Node, set: &mut BTreeSet<usize>) {
            match &n.kind {
                NodeKind::Coord(k) => {
                    set.insert(*k);
                }
                NodeKind::Neg(a) | NodeKind::Pow(a, _) | NodeKind::Call(_, a) => walk(a, set),
                NodeKind::Bin(_, a, b) => {
                    walk(a, set);
                    walk(b, set);
                }
                _ => {}
            }
        }
        walk(&self.root, &mut set);
        set
    }

    /// Evaluate to a jet at `point` with the requested derivative order.
    pub fn eval_jet(&self, point: &[f64], order: usize) -> Result<Jet, EvalError> {
        assert_eq!(point.len(), self.dim, "point length must equal dimension");
        let j = self.eval_node(&self.root, point, order)?;
        if !j.is_finite() {
            return Err(self.eval_err(&self.root, JetError::NonFinite));
        }
        Ok(j)
    }

    /// Plain value evaluation (order 0), convenient for finite differencing.
    pub fn eval_value(&self, point: &[f64]) -> Result<f64, EvalError> {
        Ok(self.eval_jet(point, 0)?.value())
    }

    fn eval_err(&self, n: &Node, source: JetError) -> EvalError {
        EvalError {
            span: n.span,
            fragment: self.text[n.span.0..n.span.1].to_string(),
            source,
        }
    }

    fn eval_node(&self, n: &Node, point: &[f64], order: usize) -> Result<Jet, EvalError> {
        let dim = self.dim;
        match &n.kind {
            NodeKind::Number(v) => {
                Jet::constant(*v, dim, order).map_err(|e| self.eval_err(n, e))
            }
            NodeKind::Pi => {
                Jet::constant(core::f64::consts::PI, dim, order).map_err(|e| self.eval_err(n, e))
            }
            NodeKind::E => {
                Jet::constant(core::f64::consts::E, dim, order).map_err(|e| self.eval_err(n, e))
            }
            NodeKind::Coord(k) => {
                Jet::coordinate(*k, point[*k], dim, order).map_err(|e| self.eval_err(n, e))
            }
            NodeKind::Neg(a) => Ok(-&self.eval_node(a, point, order)?),
            NodeKind::Bin(op, a, b) => {
                let ja = self.eval_node(a, point, order)?;
                let jb = self.eval_node(b, point, order)?;
                match op {
                    BinOp::Add => Ok(&ja + &jb),
                    BinOp::Sub => Ok(&ja - &jb),
                    BinOp::Mul => Ok(&ja * &jb),
                    BinOp::Div => ja.div(&jb).map_err(|e| self.eval_err(n, e)),
                }
            }
            NodeKind::Pow(a, k) => {
                let ja = self.eval_node(a, point, order)?;
                ja.powi(*k).map_err(|e| self.eval_err(n, e))
            }
            NodeKind::Call(f, a) => {
                let ja = self.eval_node(a, point, order)?;
                ja.elementary(*f).map_err(|e| self.eval_err(n, e))
            }
        }
    }
}

// precedence levels for the printer: higher binds tighter
fn prec(n: &NodeKind) -> u8 {
    match n {
        NodeKind::Bin(BinOp::Add, ..) | NodeKind::Bin(BinOp::Sub, ..) => 1,
        NodeKind::Bin(BinOp::Mul, ..) | NodeKind::Bin(BinOp::Div, ..) => 2,
        NodeKind::Neg(_) => 3,
        NodeKind::Pow(..) => 4,
        _ => 5,
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_node(n: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match &n.kind {
                NodeKind::Number(v) => {
                    if *v == libm::trunc(*v) && v.abs() < 1e15 && v.is_finite() {
                        write!(f, "{}", *v as i64)
                    } else {
                        write!(f, "{v}")
                    }
                }
                NodeKind::Pi => write!(f, "pi"),
                NodeKind::E => write!(f, "e"),
                NodeKind::Coord(k) => write!(f, "x{}", k + 1),
                NodeKind::Neg(a) => {
                    write!(f, "-")?;
                    write_child(a, 3, f)
                }
                NodeKind::Bin(op, a, b) => {
                    let (sym, p) = match op {
                        BinOp::Add => ("+", 1),
                        BinOp::Sub => ("-", 1),
                        BinOp::Mul => ("*", 2),
                        BinOp::Div => ("/", 2),
                    };
                    write_child(a, p, f)?;
                    write!(f, "{sym}")?;
                    // right operand of - and / needs strict precedence
                    write_child(b, p + 1, f)
                }
                NodeKind::Pow(a, k) => {
                    write_child(a, 5, f)?;
                    write!(f, "^{k}")
                }
                NodeKind::Call(func, a) => {
                    write!(f, "{}(", func.name())?;
                    write_node(a, f)?;
                    write!(f, ")")
                }
            }
        }
        fn write_child(n: &Node, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if prec(&n.kind) < min {
                write!(f, "(")?;
                write_node(n, f)?;
                write!(f, ")")
            } else {
                write_node(n, f)
            }
        }
        write_node(&self.root, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_product_of_power() {
        let e = Expression::parse("x1^2*x2", 2).unwrap();
        assert_eq!(e.to_string(), "x1^2*x2");
        let j = e.eval_jet(&[2.0, 3.0], 2).unwrap();
        assert_eq!(j.value(), 12.0);
        assert_eq!(j.grad(0), 12.0);
        assert_eq!(j.grad(1), 4.0);
        assert_eq!(j.hess(0, 0), 6.0);
        assert_eq!(j.hess(0, 1), 4.0);
        assert_eq!(j.hess(1, 1), 0.0);
    }

    #[test]
    fn dimension_check_is_enforced() {
        assert!(Expression::parse("exp(2*(x1+x3))", 4).is_ok());
        let err = Expression::parse("exp(2*(x1+x3))", 2).unwrap_err();
        assert!(err.message.contains("x3"), "{err}");
    }

    #[test]
    fn unclosed_paren_offset() {
        let err = Expression::parse("sin(x1", 2).unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.message.contains("unclosed"), "{err}");
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let e = Expression::parse("-x1^2", 2).unwrap();
        let j = e.eval_jet(&[3.0, 0.0], 0).unwrap();
        assert_eq!(j.value(), -9.0);
        let f = Expression::parse("(-x1)^2", 2).unwrap();
        assert_eq!(f.eval_value(&[3.0, 0.0]).unwrap(), 9.0);
    }

    #[test]
    fn constants_and_numbers() {
        let e = Expression::parse("2*pi+e", 2).unwrap();
        let v = e.eval_value(&[0.0, 0.0]).unwrap();
        assert!((v - (2.0 * core::f64::consts::PI + core::f64::consts::E)).abs() < 1e-15);
        let f = Expression::parse("1.5e-2", 2).unwrap();
        assert_eq!(f.eval_value(&[0.0, 0.0]).unwrap(), 0.015);
    }

    #[test]
    fn non_integer_exponent_rejected() {
        let err = Expression::parse("x1^2.5", 2).unwrap_err();
        assert!(err.message.contains("integer"), "{err}");
        let err = Expression::parse("x1^x2", 2).unwrap_err();
        assert!(err.message.contains("exponent"), "{err}");
    }

    #[test]
    fn free_variables() {
        let vars = |s: &str, d| Expression::parse(s, d).unwrap().free_variables();
        assert_eq!(vars("x1+x1*x2", 2).into_iter().collect::<Vec<_>>(), [0, 1]);
        assert!(vars("3.5", 2).is_empty());
        assert_eq!(vars("sin(x4)", 4).into_iter().collect::<Vec<_>>(), [3]);
    }

    #[test]
    fn eval_error_carries_span() {
        let e = Expression::parse("1/(x1-x1)", 2).unwrap();
        let err = e.eval_jet(&[1.0, 1.0], 1).unwrap_err();
        assert_eq!(err.source, JetError::DivisionByZero);
        assert_eq!(&err.fragment, "1/(x1-x1)");
        let e = Expression::parse("log(x1-2)", 2).unwrap();
        let err = e.eval_jet(&[1.0, 1.0], 1).unwrap_err();
        assert!(matches!(err.source, JetError::Domain { func: "log", .. }));
    }

    #[test]
    fn print_reparse_fixed_point() {
        for src in [
            "x1^2*x2",
            "-x1^2",
            "(x1+x2)*(x1-x2)",
            "1/(2+sin(x1))",
            "exp(2*x1*x2)",
            "-(x1+x2)^3/(1+x2^2)",
            "sqrt(1+x1^2)-e*pi",
        ] {
            let e = Expression::parse(src, 4).unwrap();
            let printed = e.to_string();
            let e2 = Expression::parse(&printed, 4).unwrap();
            assert_eq!(e, e2, "reparse of `{printed}` changed the tree");
            assert_eq!(printed, e2.to_string());
        }
    }
}
