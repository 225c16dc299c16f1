//! Random generators for the experiments: small polynomial and
//! exp-polynomial data, overshears and words. Coefficients are kept small so
//! that words of moderate length stay well inside double precision at points
//! of unit scale.

use crate::autos::{Letter, Overshear, Side, Word};
use crate::entire::EntireExpr;
use crate::surface::{Danielewski, SurfacePoint};
use num_complex::Complex64;
use rand::Rng;

/// Half-width of the box the projected point `(a, b)` is drawn from in [`point`].
pub const POINT_BOX: f64 = 0.6;

/// A point over `(a, b)` with real and imaginary parts uniform in
/// `[-POINT_BOX, POINT_BOX]`, on a random sheet.
pub fn point<R: Rng + ?Sized>(s: &Danielewski, rng: &mut R) -> SurfacePoint {
    let a = coeff(rng, POINT_BOX);
    let b = coeff(rng, POINT_BOX);
    let (p1, p2) = s.fiber(a, b);
    if rng.random::<bool>() {
        p1
    } else {
        p2
    }
}

fn coeff<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Complex64 {
    Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

/// Polynomial of degree at most `max_degree`; the coefficient of `x^k` has
/// size `scale / k!`.
pub fn polynomial<R: Rng + ?Sized>(rng: &mut R, max_degree: usize, scale: f64) -> EntireExpr {
    let degree = rng.random_range(0..=max_degree);
    let mut size = scale;
    let coeffs: Vec<Complex64> = (0..=degree)
        .map(|k| {
            if k > 0 {
                size /= k as f64;
            }
            coeff(rng, size)
        })
        .collect();
    EntireExpr::polynomial(&coeffs)
}

/// `c e^{a x} + q(x)` with `q` of degree at most 1.
pub fn exp_polynomial<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> EntireExpr {
    let c = EntireExpr::constant(coeff(rng, scale));
    let a = EntireExpr::constant(coeff(rng, 0.3));
    let e = EntireExpr::exp(EntireExpr::mul(a, EntireExpr::var()));
    EntireExpr::add(EntireExpr::mul(c, e), polynomial(rng, 1, scale))
}

/// Either a polynomial of degree at most 3 or an exp-polynomial, equally likely.
pub fn entire<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> EntireExpr {
    if rng.random::<bool>() {
        polynomial(rng, 3, scale)
    } else {
        exp_polynomial(rng, scale)
    }
}

pub fn overshear<R: Rng + ?Sized>(rng: &mut R, side: Side) -> Overshear {
    let f = entire(rng, 0.05);
    let g = entire(rng, 0.1);
    Overshear::new(f, g, side)
}

fn side<R: Rng + ?Sized>(rng: &mut R) -> Side {
    if rng.random::<bool>() {
        Side::First
    } else {
        Side::Second
    }
}

/// A word of length `1..=max_len`; a quarter of the letters are involutions.
pub fn word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.random_range(1..=max_len);
    let letters = (0..len)
        .map(|_| {
            if rng.random_range(0..4) == 0 {
                Letter::Involution
            } else {
                let s = side(rng);
                Letter::Overshear(overshear(rng, s))
            }
        })
        .collect();
    Word::new(letters).expect("short word")
}
