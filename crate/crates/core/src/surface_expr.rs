//! Expressions in the coordinates `x, y, z` of the surface, with division.

use crate::parse::{self, Ast};
use crate::scaled::ScaledComplex;
use crate::surface::SurfacePoint;
use crate::Result;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceExpr {
    Const(Complex64),
    X,
    Y,
    Z,
    Add(Box<SurfaceExpr>, Box<SurfaceExpr>),
    Sub(Box<SurfaceExpr>, Box<SurfaceExpr>),
    Mul(Box<SurfaceExpr>, Box<SurfaceExpr>),
    Div(Box<SurfaceExpr>, Box<SurfaceExpr>),
    Neg(Box<SurfaceExpr>),
    Pow(Box<SurfaceExpr>, u32),
    Exp(Box<SurfaceExpr>),
}

use SurfaceExpr::*;

fn lower(ast: Ast) -> SurfaceExpr {
    let b = |a: Box<Ast>| Box::new(lower(*a));
    match ast {
        Ast::Const(c) => Const(c),
        Ast::Var('x') => X,
        Ast::Var('y') => Y,
        Ast::Var(_) => Z,
        Ast::Add(l, r) => Add(b(l), b(r)),
        Ast::Sub(l, r) => Sub(b(l), b(r)),
        Ast::Mul(l, r) => Mul(b(l), b(r)),
        Ast::Div(l, r) => Div(b(l), b(r)),
        Ast::Neg(e) => Neg(b(e)),
        Ast::Pow(e, k) => Pow(b(e), k),
        Ast::Exp(e) => Exp(b(e)),
    }
}

/// Parses an expression in `x, y, z` (grammar in [`crate::parse`]).
pub fn parse_expression(text: &str) -> Result<SurfaceExpr> {
    Ok(lower(parse::parse_ast(text, &parse::SURFACE)?))
}

impl std::str::FromStr for SurfaceExpr {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expression(s)
    }
}

impl SurfaceExpr {
    /// Plain evaluation. A pole or overflow gives a non-finite value.
    pub fn eval(&self, p: &SurfacePoint) -> Complex64 {
        match self {
            Const(c) => *c,
            X => p.x,
            Y => p.y,
            Z => p.z,
            Add(l, r) => l.eval(p) + r.eval(p),
            Sub(l, r) => l.eval(p) - r.eval(p),
            Mul(l, r) => l.eval(p) * r.eval(p),
            Div(l, r) => {
                let den = r.eval(p);
                if den.norm() == 0.0 {
                    Complex64::new(f64::NAN, f64::NAN)
                } else {
                    l.eval(p) / den
                }
            }
            Neg(e) => -e.eval(p),
            Pow(e, k) => e.eval(p).powu(*k),
            Exp(e) => e.eval(p).exp(),
        }
    }

    fn eval_scaled(&self, p: &SurfacePoint) -> ScaledComplex {
        match self {
            Const(c) => ScaledComplex::new(*c),
            X => ScaledComplex::new(p.x),
            Y => ScaledComplex::new(p.y),
            Z => ScaledComplex::new(p.z),
            Add(l, r) => l.eval_scaled(p) + r.eval_scaled(p),
            Sub(l, r) => l.eval_scaled(p) - r.eval_scaled(p),
            Mul(l, r) => l.eval_scaled(p) * r.eval_scaled(p),
            Div(l, r) => l.eval_scaled(p) / r.eval_scaled(p),
            Neg(e) => -e.eval_scaled(p),
            Pow(e, k) => e.eval_scaled(p).powu(*k),
            Exp(e) => e.eval_scaled(p).exp(),
        }
    }

    /// `log |F(P)|` computed in extended range, so intermediate values beyond
    /// `f64` range (such as `e^z` for large `z`) do not count as overflow.
    pub fn log_abs(&self, p: &SurfacePoint) -> f64 {
        self.eval_scaled(p).log_abs()
    }

    /// The same function precomposed with the involution `(x, y, z) -> (y, x, z)`.
    pub fn swap_xy(&self) -> SurfaceExpr {
        let b = |e: &SurfaceExpr| Box::new(e.swap_xy());
        match self {
            Const(c) => Const(*c),
            X => Y,
            Y => X,
            Z => Z,
            Add(l, r) => Add(b(l), b(r)),
            Sub(l, r) => Sub(b(l), b(r)),
            Mul(l, r) => Mul(b(l), b(r)),
            Div(l, r) => Div(b(l), b(r)),
            Neg(e) => Neg(b(e)),
            Pow(e, k) => Pow(b(e), *k),
            Exp(e) => Exp(b(e)),
        }
    }
}
