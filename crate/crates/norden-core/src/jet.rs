//! Truncated Taylor scalars ("jets") in `dim` variables.
//!
//! A [`Jet`] carries a value together with its exact partial derivatives up
//! to a chosen order (at most 3). Arithmetic propagates derivatives through
//! the product, quotient and chain rules, so any composite of the supported
//! operations evaluated on coordinate jets yields exact derivatives of the
//! composite at the base point — no finite differencing.
//!
//! Storage is dense: the Hessian and third-order parts keep all `dim^2` and
//! `dim^3` entries (symmetry is maintained by construction, never by
//! projection). Dimensions in this crate are small (`2n <= 12`), so the
//! redundancy is cheap and keeps indexing trivial.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// Highest supported derivative order.
pub const MAX_ORDER: usize = 3;

/// Errors from jet construction and arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub enum JetError {
    /// Number of variables below 2 or unreasonably large.
    InvalidDim(usize),
    /// Requested derivative order outside `0..=3`.
    InvalidOrder(usize),
    /// Coordinate index out of range for the jet's dimension.
    IndexOutOfRange { index: usize, dim: usize },
    /// Two operands disagree in dimension or order.
    Mismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Division by a jet whose value part is exactly zero.
    DivisionByZero,
    /// Elementary function evaluated outside its real domain.
    Domain { func: &'static str, value: f64 },
    /// A non-finite component was produced (overflow or NaN poisoning).
    NonFinite,
}

impl fmt::Display for JetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetError::InvalidDim(d) => write!(f, "invalid jet dimension {d} (need 2..=16)"),
            JetError::InvalidOrder(o) => write!(f, "invalid jet order {o} (need 0..=3)"),
            JetError::IndexOutOfRange { index, dim } => {
                write!(f, "coordinate index {index} out of range for dimension {dim}")
            }
            JetError::Mismatch { left, right } => write!(
                f,
                "jet mismatch: (dim {}, order {}) vs (dim {}, order {})",
                left.0, left.1, right.0, right.1
            ),
            JetError::DivisionByZero => write!(f, "division by a jet with zero value"),
            JetError::Domain { func, value } => {
                write!(f, "domain error: {func} of {value}")
            }
            JetError::NonFinite => write!(f, "non-finite jet component"),
        }
    }
}

impl core::error::Error for JetError {}

/// The elementary functions the engine differentiates through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
}

impl Elementary {
    pub fn name(self) -> &'static str {
        match self {
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Tan => "tan",
            Elementary::Exp => "exp",
            Elementary::Log => "log",
            Elementary::Sqrt => "sqrt",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Tanh => "tanh",
        }
    }

    /// Parse a function name as it appears in the expression language.
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Elementary::Sin,
            "cos" => Elementary::Cos,
            "tan" => Elementary::Tan,
            "exp" => Elementary::Exp,
            "log" => Elementary::Log,
            "sqrt" => Elementary::Sqrt,
            "sinh" => Elementary::Sinh,
            "cosh" => Elementary::Cosh,
            "tanh" => Elementary::Tanh,
            _ => return None,
        })
    }
}

/// A truncated Taylor scalar: value plus derivatives up to `order`.
///
/// Jets of unequal dimension or order must never be mixed; the arithmetic
/// operators panic on mismatch (an internal invariant violation), while the
/// fallible entry points ([`Jet::div`], [`Jet::powi`], [`Jet::elementary`])
/// return [`JetError`] for the genuinely data-dependent failures.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    dim: usize,
    order: usize,
    value: f64,
    grad: Vec<f64>,  // dim entries when order >= 1
    hess: Vec<f64>,  // dim*dim entries when order >= 2, symmetric
    third: Vec<f64>, // dim^3 entries when order == 3, fully symmetric
}

impl Jet {
    fn check_dim_order(dim: usize, order: usize) -> Result<(), JetError> {
        if !(2..=16).contains(&dim) {
            return Err(JetError::InvalidDim(dim));
        }
        if order > MAX_ORDER {
            return Err(JetError::InvalidOrder(order));
        }
        Ok(())
    }

    fn zeros(dim: usize, order: usize) -> Jet {
        Jet {
            dim,
            order,
            value: 0.0,
            grad: if order >= 1 { vec![0.0; dim] } else { Vec::new() },
            hess: if order >= 2 { vec![0.0; dim * dim] } else { Vec::new() },
            third: if order >= 3 { vec![0.0; dim * dim * dim] } else { Vec::new() },
        }
    }

    /// Constant jet: value `c`, all derivative parts zero.
    pub fn constant(c: f64, dim: usize, order: usize) -> Result<Jet, JetError> {
        Self::check_dim_order(dim, order)?;
        let mut j = Self::zeros(dim, order);
        j.value = c;
        Ok(j)
    }

    /// Coordinate jet: value `x`, gradient the unit vector `e_index`
    /// (`index` is zero-based), higher parts zero.
    pub fn coordinate(index: usize, x: f64, dim: usize, order: usize) -> Result<Jet, JetError> {
        Self::check_dim_order(dim, order)?;
        if index >= dim {
            return Err(JetError::IndexOutOfRange { index, dim });
        }
        let mut j = Self::zeros(dim, order);
        j.value = x;
        if order >= 1 {
            j.grad[index] = 1.0;
        }
        Ok(j)
    }

    /// A zero jet with the same dimension and order as `self`.
    pub fn zero_like(&self) -> Jet {
        Self::zeros(self.dim, self.order)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// First derivative with respect to coordinate `i`. Zero-order jets
    /// report zero.
    pub fn grad(&self, i: usize) -> f64 {
        if self.order >= 1 {
            self.grad[i]
        } else {
            0.0
        }
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        if self.order >= 2 {
            self.hess[i * self.dim + j]
        } else {
            0.0
        }
    }

    pub fn third(&self, i: usize, j: usize, k: usize) -> f64 {
        if self.order >= 3 {
            self.third[(i * self.dim + j) * self.dim + k]
        } else {
            0.0
        }
    }

    /// True when every stored component is finite.
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|v| v.is_finite())
            && self.hess.iter().all(|v| v.is_finite())
            && self.third.iter().all(|v| v.is_finite())
    }

    /// Drop derivative information above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order, "truncate can only lower the order");
        let mut out = self.clone();
        out.order = order;
        if order < 3 {
            out.third = Vec::new();
        }
        if order < 2 {
            out.hess = Vec::new();
        }
        if order < 1 {
            out.grad = Vec::new();
        }
        out
    }

    /// The jet of the partial derivative with respect to coordinate `i`,
    /// one order lower: `(∂_i f)` with value `grad[i]`, gradient row `i` of
    /// the Hessian, and so on. Panics on order-0 jets.
    pub fn derivative(&self, i: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        assert!(i < self.dim);
        let d = self.dim;
        let mut out = Self::zeros(d, self.order - 1);
        out.value = self.grad[i];
        if out.order >= 1 {
            out.grad.copy_from_slice(&self.hess[i * d..(i + 1) * d]);
        }
        if out.order >= 2 {
            out.hess
                .copy_from_slice(&self.third[i * d * d..(i + 1) * d * d]);
        }
        out
    }

    fn assert_same(&self, rhs: &Jet) {
        assert!(
            self.dim == rhs.dim && self.order == rhs.order,
            "jet mismatch: (dim {}, order {}) vs (dim {}, order {})",
            self.dim,
            self.order,
            rhs.dim,
            rhs.order
        );
    }

    /// Checked binary arithmetic; mirrors the operators but reports
    /// mismatches and division failures as errors instead of panicking.
    pub fn arith(op: JetOp, a: &Jet, b: &Jet) -> Result<Jet, JetError> {
        if a.dim != b.dim || a.order != b.order {
            return Err(JetError::Mismatch {
                left: (a.dim, a.order),
                right: (b.dim, b.order),
            });
        }
        Ok(match op {
            JetOp::Add => a + b,
            JetOp::Sub => a - b,
            JetOp::Mul => a * b,
            JetOp::Div => return a.div(b),
        })
    }

    /// Multiply every component by the constant `c`.
    pub fn scale(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.value *= c;
        for v in &mut out.grad {
            *v *= c;
        }
        for v in &mut out.hess {
            *v *= c;
        }
        for v in &mut out.third {
            *v *= c;
        }
        out
    }

    /// Quotient `self / rhs`; the denominator value must be nonzero.
    pub fn div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        self.assert_same(rhs);
        if rhs.value == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let v = rhs.value;
        let recip = rhs.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v));
        Ok(self * &recip)
    }

    /// Integer power by repeated multiplication (exact truncated products).
    /// Negative exponents require a nonzero value part.
    pub fn powi(&self, k: i32) -> Result<Jet, JetError> {
        if k == 0 {
            return Jet::constant(1.0, self.dim, self.order);
        }
        let mut base = self.clone();
        if k < 0 {
            if self.value == 0.0 {
                return Err(JetError::DivisionByZero);
            }
            base = Jet::constant(1.0, self.dim, self.order)?.div(self)?;
        }
        let mut exp = k.unsigned_abs();
        let mut acc: Option<Jet> = None;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// Apply an elementary function through the chain rule.
    pub fn elementary(&self, f: Elementary) -> Result<Jet, JetError> {
        let v = self.value;
        let (f0, f1, f2, f3) = match f {
            Elementary::Sin => {
                let (s, c) = (libm::sin(v), libm::cos(v));
                (s, c, -s, -c)
            }
            Elementary::Cos => {
                let (s, c) = (libm::sin(v), libm::cos(v));
                (c, -s, -c, s)
            }
            Elementary::Tan => {
                let t = libm::tan(v);
                if !t.is_finite() {
                    return Err(JetError::Domain { func: "tan", value: v });
                }
                let s2 = 1.0 + t * t;
                (t, s2, 2.0 * t * s2, 2.0 * s2 * (s2 + 2.0 * t * t))
            }
            Elementary::Exp => {
                let e = libm::exp(v);
                (e, e, e, e)
            }
            Elementary::Log => {
                if v <= 0.0 {
                    return Err(JetError::Domain { func: "log", value: v });
                }
                (libm::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
            }
            Elementary::Sqrt => {
                if v <= 0.0 {
                    return Err(JetError::Domain { func: "sqrt", value: v });
                }
                let s = libm::sqrt(v);
                (s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v))
            }
            Elementary::Sinh => {
                let (s, c) = (libm::sinh(v), libm::cosh(v));
                (s, c, s, c)
            }
            Elementary::Cosh => {
                let (s, c) = (libm::sinh(v), libm::cosh(v));
                (c, s, c, s)
            }
            Elementary::Tanh => {
                let t = libm::tanh(v);
                let s = 1.0 - t * t;
                (t, s, -2.0 * t * s, -2.0 * s * (1.0 - 3.0 * t * t))
            }
        };
        Ok(self.compose(f0, f1, f2, f3))
    }

    /// Chain rule for a scalar function with derivatives `f1..f3` at the
    /// value part.
    fn compose(&self, f0: f64, f1: f64, f2: f64, f3: f64) -> Jet {
        let d = self.dim;
        let mut out = Self::zeros(d, self.order);
        out.value = f0;
        if self.order >= 1 {
            for a in 0..d {
                out.grad[a] = f1 * self.grad[a];
            }
        }
        if self.order >= 2 {
            for a in 0..d {
                for b in 0..d {
                    out.hess[a * d + b] =
                        f2 * self.grad[a] * self.grad[b] + f1 * self.hess[a * d + b];
                }
            }
        }
        if self.order >= 3 {
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let (ga, gb, gc) = (self.grad[a], self.grad[b], self.grad[c]);
                        let (hab, hac, hbc) = (
                            self.hess[a * d + b],
                            self.hess[a * d + c],
                            self.hess[b * d + c],
                        );
                        out.third[(a * d + b) * d + c] = f3 * ga * gb * gc
                            + f2 * (hab * gc + hac * gb + hbc * ga)
                            + f1 * self.third[(a * d + b) * d + c];
                    }
                }
            }
        }
        out
    }
}

/// Operation selector for [`Jet::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.assert_same(rhs);
        let mut out = self.clone();
        out.value += rhs.value;
        for (o, r) in out.grad.iter_mut().zip(&rhs.grad) {
            *o += r;
        }
        for (o, r) in out.hess.iter_mut().zip(&rhs.hess) {
            *o += r;
        }
        for (o, r) in out.third.iter_mut().zip(&rhs.third) {
            *o += r;
        }
        out
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.assert_same(rhs);
        let mut out = self.clone();
        out.value -= rhs.value;
        for (o, r) in out.grad.iter_mut().zip(&rhs.grad) {
            *o -= r;
        }
        for (o, r) in out.hess.iter_mut().zip(&rhs.hess) {
            *o -= r;
        }
        for (o, r) in out.third.iter_mut().zip(&rhs.third) {
            *o -= r;
        }
        out
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.assert_same(rhs);
        let d = self.dim;
        let (av, bv) = (self.value, rhs.value);
        let mut out = Jet::zeros(d, self.order);
        out.value = av * bv;
        if self.order >= 1 {
            for a in 0..d {
                out.grad[a] = self.grad[a] * bv + av * rhs.grad[a];
            }
        }
        if self.order >= 2 {
            for a in 0..d {
                for b in 0..d {
                    out.hess[a * d + b] = self.hess[a * d + b] * bv
                        + self.grad[a] * rhs.grad[b]
                        + self.grad[b] * rhs.grad[a]
                        + av * rhs.hess[a * d + b];
                }
            }
        }
        if self.order >= 3 {
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        out.third[(a * d + b) * d + c] = self.third[(a * d + b) * d + c] * bv
                            + self.hess[a * d + b] * rhs.grad[c]
                            + self.hess[a * d + c] * rhs.grad[b]
                            + self.hess[b * d + c] * rhs.grad[a]
                            + self.grad[a] * rhs.hess[b * d + c]
                            + self.grad[b] * rhs.hess[a * d + c]
                            + self.grad[c] * rhs.hess[a * d + b]
                            + av * rhs.third[(a * d + b) * d + c];
                    }
                }
            }
        }
        out
    }
}
