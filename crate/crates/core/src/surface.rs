//! The Danielewski surface `D_p = {(x, y, z) : xy = p(z)}` and its 2-sheeted
//! projection `(x, y, z) -> (x + y, z)` onto `C^2`.
//!
//! Over a point `(a, b)` the fiber is the pair of roots of `t^2 - a t + p(b)`;
//! the two fiber points are exchanged by the involution `(x, y, z) -> (y, x, z)`.
//! Nothing here ever picks a global section: callers only form sums that are
//! symmetric in the two sheets, so any local ordering of the roots is valid.

use crate::poly::{ComplexPoly, SIMPLE_ZERO_TOL};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Relative tolerance used by [`SurfacePoint`] membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl SurfacePoint {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self { x, y, z }
    }

    /// The image under the projection, `(x + y, z)`.
    pub fn project(&self) -> (Complex64, Complex64) {
        (self.x + self.y, self.z)
    }

    /// The involution `(x, y, z) -> (y, x, z)`.
    pub fn swap(&self) -> Self {
        Self { x: self.y, y: self.x, z: self.z }
    }

    /// `log |pi(P)|`, or `-inf` at the two points over the origin.
    pub fn tau(&self) -> f64 {
        let (a, b) = self.project();
        let norm = a.norm().hypot(b.norm());
        if norm == 0.0 {
            f64::NEG_INFINITY
        } else {
            norm.ln()
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest coordinate-wise `|a - b| / (1 + max(|a|, |b|))`.
    pub fn rel_distance(&self, other: &SurfacePoint) -> f64 {
        [(self.x, other.x), (self.y, other.y), (self.z, other.z)]
            .iter()
            .map(|(a, b)| (a - b).norm() / (1.0 + a.norm().max(b.norm())))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Danielewski {
    p: ComplexPoly,
    dp: ComplexPoly,
}

impl Danielewski {
    /// Requires `deg p >= 1` with simple zeros (separation `1e-8`).
    pub fn new(p: ComplexPoly) -> Result<Self> {
        if p.degree() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if !p.has_simple_zeros(SIMPLE_ZERO_TOL) {
            return Err(Error::NotSimpleZeros);
        }
        let dp = p.derivative();
        Ok(Self { p, dp })
    }

    pub fn poly(&self) -> &ComplexPoly {
        &self.p
    }

    pub fn derivative(&self) -> &ComplexPoly {
        &self.dp
    }

    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    /// Relative defect `|xy - p(z)| / (1 + |xy| + |p(z)|)`.
    pub fn defect(&self, pt: &SurfacePoint) -> f64 {
        let xy = pt.x * pt.y;
        let pz = self.p.eval(pt.z);
        (xy - pz).norm() / (1.0 + xy.norm() + pz.norm())
    }

    pub fn contains(&self, pt: &SurfacePoint, tol: f64) -> bool {
        self.defect(pt) <= tol
    }

    /// The two points over `(a, b)`. The larger root of `t^2 - a t + p(b)` is
    /// computed first and the other one as `p(b) / x`, so the pair is
    /// accurate even when `|a|^2` dominates `|p(b)|`. The second point is the
    /// involution of the first; at a ramification point they coincide.
    pub fn fiber(&self, a: Complex64, b: Complex64) -> (SurfacePoint, SurfacePoint) {
        let pb = self.p.eval(b);
        let disc = (a * a - pb * 4.0).sqrt();
        let plus = a + disc;
        let minus = a - disc;
        let big = if plus.norm() >= minus.norm() { plus } else { minus } * 0.5;
        let small = if big.norm() > 0.0 { pb / big } else { Complex64::new(0.0, 0.0) };
        let p1 = SurfacePoint::new(big, small, b);
        (p1, p1.swap())
    }

    /// Draws `(a, b)` as independent complex Gaussians (unit variance per
    /// real component) times `scale` and returns one fiber point chosen by a
    /// fair coin.
    pub fn random_point<R: Rng + ?Sized>(&self, scale: f64, rng: &mut R) -> SurfacePoint {
        let mut gauss = || -> f64 { rng.sample(StandardNormal) };
        let a = Complex64::new(gauss(), gauss()) * scale;
        let b = Complex64::new(gauss(), gauss()) * scale;
        let (p1, p2) = self.fiber(a, b);
        if rng.random::<bool>() {
            p1
        } else {
            p2
        }
    }

    /// The `(x, z)` chart: `(x, p(z) / x, z)`.
    pub fn chart_xz(&self, x: Complex64, z: Complex64) -> Result<SurfacePoint> {
        if x.norm() == 0.0 {
            return Err(Error::ChartUndefined);
        }
        Ok(SurfacePoint::new(x, self.p.eval(z) / x, z))
    }
}
