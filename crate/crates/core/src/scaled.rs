//! Complex numbers with an extended exponent range, `m * e^s` with `|m| = 1`
//! (or `m = 0`). Only `log |.|` is ever read back, so values like `e^z` at
//! `|z| = 1000` stay usable long after `f64` would overflow.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    unit: Complex64,
    log_mag: f64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex { unit: Complex64::new(0.0, 0.0), log_mag: 0.0 };

    pub fn new(c: Complex64) -> Self {
        let norm = c.norm();
        if norm == 0.0 {
            Self::ZERO
        } else if norm.is_finite() {
            Self { unit: c / norm, log_mag: norm.ln() }
        } else {
            Self { unit: Complex64::new(f64::NAN, f64::NAN), log_mag: f64::NAN }
        }
    }

    fn from_parts(m: Complex64, s: f64) -> Self {
        let norm = m.norm();
        if norm == 0.0 {
            Self::ZERO
        } else {
            Self { unit: m / norm, log_mag: s + norm.ln() }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.unit.re == 0.0 && self.unit.im == 0.0
    }

    /// `log |self|`; `-inf` for zero, NaN if the value was lost.
    pub fn log_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else if self.unit.is_finite() {
            self.log_mag
        } else {
            f64::NAN
        }
    }

    /// The value as an ordinary complex number (may overflow to infinity).
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            self.unit * self.log_mag.exp()
        }
    }

    pub fn exp(self) -> Self {
        let v = self.to_complex();
        if !v.is_finite() {
            return Self { unit: Complex64::new(f64::NAN, f64::NAN), log_mag: f64::NAN };
        }
        Self { unit: Complex64::from_polar(1.0, v.im), log_mag: v.re }
    }

    pub fn powu(self, k: u32) -> Self {
        if k == 0 {
            return Self::new(Complex64::new(1.0, 0.0));
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::from_parts(self.unit.powu(k), self.log_mag * k as f64)
    }
}

impl Add for ScaledComplex {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag { (self, rhs) } else { (rhs, self) };
        let m = big.unit + small.unit * (small.log_mag - big.log_mag).exp();
        Self::from_parts(m, big.log_mag)
    }
}

impl Neg for ScaledComplex {
    type Output = Self;

    fn neg(self) -> Self {
        Self { unit: -self.unit, log_mag: self.log_mag }
    }
}

impl Sub for ScaledComplex {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for ScaledComplex {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::from_parts(self.unit * rhs.unit, self.log_mag + rhs.log_mag)
    }
}

impl Div for ScaledComplex {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        if rhs.is_zero() {
            return Self { unit: Complex64::new(f64::NAN, f64::NAN), log_mag: f64::NAN };
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::from_parts(self.unit / rhs.unit, self.log_mag - rhs.log_mag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-12 * (1.0 + b.norm())
    }

    #[test]
    fn agrees_with_plain_arithmetic() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 3.0);
        let (sa, sb) = (ScaledComplex::new(a), ScaledComplex::new(b));
        assert!(close((sa + sb).to_complex(), a + b));
        assert!(close((sa - sb).to_complex(), a - b));
        assert!(close((sa * sb).to_complex(), a * b));
        assert!(close((sa / sb).to_complex(), a / b));
        assert!(close(sa.powu(5).to_complex(), a.powu(5)));
        assert!(close(sa.exp().to_complex(), a.exp()));
        assert!(close((sa - sa).to_complex(), c(0.0, 0.0)));
    }

    #[test]
    fn survives_beyond_f64_range() {
        let z = ScaledComplex::new(c(1000.0, 1.0));
        let e = z.exp();
        assert!((e.log_abs() - 1000.0).abs() < 1e-12);
        let prod = z * e;
        assert!((prod.log_abs() - (1000.0 + 1000.0005f64.ln())).abs() < 1e-6);
        let sq = e.powu(3) + ScaledComplex::new(c(1.0, 0.0));
        assert!((sq.log_abs() - 3000.0).abs() < 1e-9);
    }

    #[test]
    fn zero_and_poles() {
        assert_eq!(ScaledComplex::ZERO.log_abs(), f64::NEG_INFINITY);
        let one = ScaledComplex::new(c(1.0, 0.0));
        assert!((one / ScaledComplex::ZERO).log_abs().is_nan());
        assert!(ScaledComplex::new(c(f64::INFINITY, 0.0)).log_abs().is_nan());
    }
}
