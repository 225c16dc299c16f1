//! Expression trees for entire functions of one complex variable.
//!
//! These are the `f`, `g` of overshear maps. Every node kind preserves
//! entirety, so anything expressible is an entire function. Equality of two
//! expressions is decided by sampling on two circles (see [`EntireExpr::approx_equal`]);
//! for polynomials and exp-polynomials of the sizes used here this is a sound
//! heuristic, but it is not a proof of identity.

use crate::parse::{self, Ast};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Deepest tree accepted by [`EntireExpr::validate`].
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum EntireExpr {
    Const(Complex64),
    Var,
    Add(Arc<EntireExpr>, Arc<EntireExpr>),
    Mul(Arc<EntireExpr>, Arc<EntireExpr>),
    Neg(Arc<EntireExpr>),
    Exp(Arc<EntireExpr>),
    IntPow(Arc<EntireExpr>, u32),
}

use EntireExpr::*;

fn sample_points() -> &'static [Complex64; 64] {
    static POINTS: OnceLock<[Complex64; 64]> = OnceLock::new();
    POINTS.get_or_init(|| {
        let mut pts = [Complex64::new(0.0, 0.0); 64];
        for k in 0..32 {
            let angle = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 32.0);
            pts[k] = angle;
            pts[32 + k] = angle * 5.0;
        }
        pts
    })
}

#[allow(clippy::should_implement_trait)]
impl EntireExpr {
    pub fn zero() -> Self {
        Const(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Const(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Const(c)
    }

    pub fn real(c: f64) -> Self {
        Const(Complex64::new(c, 0.0))
    }

    pub fn var() -> Self {
        Var
    }

    fn as_const(&self) -> Option<Complex64> {
        match self {
            Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn add(l: EntireExpr, r: EntireExpr) -> Self {
        match (l.as_const(), r.as_const()) {
            (Some(a), Some(b)) => Const(a + b),
            (Some(a), None) if a == Complex64::new(0.0, 0.0) => r,
            (None, Some(b)) if b == Complex64::new(0.0, 0.0) => l,
            _ => Add(Arc::new(l), Arc::new(r)),
        }
    }

    pub fn mul(l: EntireExpr, r: EntireExpr) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match (l.as_const(), r.as_const()) {
            (Some(a), Some(b)) => Const(a * b),
            (Some(a), _) | (_, Some(a)) if a == zero => Const(zero),
            (Some(a), None) if a == one => r,
            (None, Some(b)) if b == one => l,
            _ => Mul(Arc::new(l), Arc::new(r)),
        }
    }

    pub fn neg(e: EntireExpr) -> Self {
        match e {
            Const(c) => Const(-c),
            Neg(inner) => Arc::unwrap_or_clone(inner),
            other => Neg(Arc::new(other)),
        }
    }

    pub fn exp(e: EntireExpr) -> Self {
        match e {
            Const(c) => Const(c.exp()),
            other => Exp(Arc::new(other)),
        }
    }

    pub fn pow(e: EntireExpr, k: u32) -> Self {
        match (e, k) {
            (_, 0) => Self::one(),
            (e, 1) => e,
            (Const(c), k) => Const(c.powu(k)),
            (e, k) => IntPow(Arc::new(e), k),
        }
    }

    /// Polynomial `sum_k coeffs[k] x^k`.
    pub fn polynomial(coeffs: &[Complex64]) -> Self {
        coeffs.iter().enumerate().fold(Self::zero(), |acc, (k, &c)| {
            Self::add(acc, Self::mul(Const(c), Self::pow(Var, k as u32)))
        })
    }

    pub fn depth(&self) -> usize {
        match self {
            Const(_) | Var => 1,
            Add(l, r) | Mul(l, r) => 1 + l.depth().max(r.depth()),
            Neg(e) | Exp(e) | IntPow(e, _) => 1 + e.depth(),
        }
    }

    pub fn validate(self) -> Result<Self> {
        let d = self.depth();
        if d > MAX_DEPTH {
            Err(Error::TooDeep(d))
        } else {
            Ok(self)
        }
    }

    /// Evaluates the tree; overflow shows up as non-finite components.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Const(c) => *c,
            Var => z,
            Add(l, r) => l.eval(z) + r.eval(z),
            Mul(l, r) => l.eval(z) * r.eval(z),
            Neg(e) => -e.eval(z),
            Exp(e) => e.eval(z).exp(),
            IntPow(e, k) => e.eval(z).powu(*k),
        }
    }

    /// Symbolic derivative with respect to the variable.
    pub fn deriv(&self) -> EntireExpr {
        match self {
            Const(_) => Self::zero(),
            Var => Self::one(),
            Add(l, r) => Self::add(l.deriv(), r.deriv()),
            Mul(l, r) => Self::add(
                Self::mul(l.deriv(), (**r).clone()),
                Self::mul((**l).clone(), r.deriv()),
            ),
            Neg(e) => Self::neg(e.deriv()),
            Exp(e) => Self::mul(self.clone(), e.deriv()),
            IntPow(e, k) => Self::mul(
                Self::mul(Self::real(*k as f64), Self::pow((**e).clone(), k - 1)),
                e.deriv(),
            ),
        }
    }

    /// True if some `Exp` node has a non-constant argument.
    pub fn is_transcendental(&self) -> bool {
        match self {
            Const(_) | Var => false,
            Add(l, r) | Mul(l, r) => l.is_transcendental() || r.is_transcendental(),
            Neg(e) | IntPow(e, _) => e.is_transcendental(),
            Exp(e) => !e.is_constant() || e.is_transcendental(),
        }
    }

    fn is_constant(&self) -> bool {
        match self {
            Const(_) => true,
            Var => false,
            Add(l, r) | Mul(l, r) => l.is_constant() && r.is_constant(),
            Neg(e) | Exp(e) | IntPow(e, _) => e.is_constant(),
        }
    }

    /// Sampled equality: the largest `|a - b| / (1 + max(|a|, |b|))` over 32
    /// points on `|z| = 1` and 32 on `|z| = 5` must not exceed `tol`.
    /// Points where both sides overflow are ignored.
    pub fn approx_equal(&self, other: &EntireExpr, tol: f64) -> bool {
        sample_points().iter().all(|&z| {
            let (a, b) = (self.eval(z), other.eval(z));
            match (a.is_finite(), b.is_finite()) {
                (false, false) => true,
                (true, true) => (a - b).norm() / (1.0 + a.norm().max(b.norm())) <= tol,
                _ => false,
            }
        })
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.approx_equal(&Self::zero(), tol)
    }
}

fn lower(ast: &Ast) -> EntireExpr {
    match ast {
        Ast::Const(c) => Const(*c),
        Ast::Var(_) => Var,
        Ast::Add(l, r) => EntireExpr::add(lower(l), lower(r)),
        Ast::Sub(l, r) => EntireExpr::add(lower(l), EntireExpr::neg(lower(r))),
        Ast::Mul(l, r) => EntireExpr::mul(lower(l), lower(r)),
        Ast::Neg(e) => EntireExpr::neg(lower(e)),
        Ast::Pow(e, k) => EntireExpr::pow(lower(e), *k),
        Ast::Exp(e) => EntireExpr::exp(lower(e)),
        // the entire dialect rejects division while parsing
        Ast::Div(..) => unreachable!("division in entire expression"),
    }
}

impl std::str::FromStr for EntireExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        lower(&parse::parse_ast(s, &parse::ENTIRE)?).validate()
    }
}

/// Fully parenthesised output that parses back to the same tree.
impl fmt::Display for EntireExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const(c) => write!(f, "({})", parse::format_complex(*c)),
            Var => f.write_str("x"),
            Add(l, r) => write!(f, "({l} + {r})"),
            Mul(l, r) => write!(f, "({l} * {r})"),
            Neg(e) => write!(f, "(-{e})"),
            Exp(e) => write!(f, "exp({e})"),
            IntPow(e, k) => write!(f, "{e}^{k}"),
        }
    }
}
