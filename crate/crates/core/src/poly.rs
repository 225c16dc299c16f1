//! Complex polynomials in one variable.

use crate::{parse, Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt;

/// Default separation used when testing for simple zeros.
pub const SIMPLE_ZERO_TOL: f64 = 1e-8;

const TRIM_REL: f64 = 1e-14;

/// Polynomial with complex coefficients stored in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// coefficients below `1e-14 * max|coeff|`.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= TRIM_REL * scale) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value of the derivative at `z` without building the derivative.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * k as f64;
        }
        acc
    }

    pub fn derivative(&self) -> ComplexPoly {
        if self.coeffs.len() == 1 {
            return ComplexPoly::new(vec![Complex64::new(0.0, 0.0)]);
        }
        ComplexPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect(),
        )
    }

    /// The polynomial `(p(w) - p(z)) / (w - z)` evaluated without dividing.
    ///
    /// Uses synthetic division of `p` by `(t - z)`, which expands to
    /// `sum_k a_k sum_{i<k} w^i z^(k-1-i)`. The confluent case `w == z`
    /// returns `p'(z)`.
    pub fn divided_difference(&self, w: Complex64, z: Complex64) -> Complex64 {
        if w == z {
            return self.eval_derivative(z);
        }
        let n = self.degree();
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        // quotient coefficients b_{n-1} .. b_0, evaluated at w on the fly
        let mut b = self.coeffs[n];
        let mut acc = b;
        for k in (1..n).rev() {
            b = self.coeffs[k] + z * b;
            acc = acc * w + b;
        }
        acc
    }

    /// All complex roots with multiplicity: companion-matrix eigenvalues
    /// followed by one Newton step each.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let lead = self.leading();
        if n == 1 {
            return Ok(vec![-self.coeffs[0] / lead]);
        }
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..n {
            m[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        let eig = m
            .clone()
            .schur()
            .eigenvalues()
            .map(|v| v.iter().copied().collect::<Vec<_>>())
            .unwrap_or_else(|| m.diagonal().iter().copied().collect());
        Ok(eig
            .into_iter()
            .map(|r| {
                let d = self.eval_derivative(r);
                if d.norm() > 0.0 {
                    let step = self.eval(r) / d;
                    if step.is_finite() {
                        return r - step;
                    }
                }
                r
            })
            .collect())
    }

    /// True iff the roots are pairwise further apart than `tol` and `|p'|`
    /// exceeds `tol` at every root.
    pub fn has_simple_zeros(&self, tol: f64) -> bool {
        let Ok(roots) = self.roots() else {
            return false;
        };
        for (i, a) in roots.iter().enumerate() {
            if self.eval_derivative(*a).norm() <= tol {
                return false;
            }
            if roots[i + 1..].iter().any(|b| (a - b).norm() <= tol) {
                return false;
            }
        }
        true
    }
}

impl std::str::FromStr for ComplexPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(ComplexPoly::new(parse::parse_complex_list(s)?))
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| parse::format_complex(c)).collect();
        f.write_str(&parts.join(","))
    }
}

/// Coefficients `u_0..u_{d-1}` and `q_0..q_{d-2}` with
/// `B(f)^2 = A(f) + sum_i q_i f^i`, where `B(f) = sum u_i f^i` and
/// `A(f) = (phi_1 f + ... + phi_{d-1} f^{d-1} + f^d) f^{d-2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareCompletion {
    pub us: Vec<Complex64>,
    pub qs: Vec<Complex64>,
}

/// Completes `A(f)` to a square. `phis` holds `phi_1..phi_{d-1}`.
///
/// Matching the coefficient of `f^(2d-1-k)` gives
/// `u_{d-k} = (phi_{d-k+1} - sum u_i u_j) / 2` over `i + j = 2d-1-k` with
/// `d-k < i, j < d-1`; for `k = 3` the sum is `u_{d-2}^2`.
pub fn complete_square(phis: &[Complex64], d: usize) -> Result<SquareCompletion> {
    if d < 2 {
        return Err(Error::SquareDegree(d));
    }
    if phis.len() != d - 1 {
        return Err(Error::SquareCoefficients { expected: d - 1, got: phis.len() });
    }
    let zero = Complex64::new(0.0, 0.0);
    let phi = |j: usize| if j == d { Complex64::new(1.0, 0.0) } else { phis[j - 1] };
    let mut us = vec![zero; d];
    us[d - 1] = Complex64::new(1.0, 0.0);
    for k in 2..=d {
        let target = 2 * d - 1 - k;
        let lo = d - k + 1;
        let mut cross = zero;
        for i in lo..=d - 2 {
            let j = target - i;
            if j >= lo && j <= d - 2 {
                cross += us[i] * us[j];
            }
        }
        us[d - k] = (phi(d - k + 1) - cross) * 0.5;
    }
    let qs = (0..=d - 2)
        .map(|i| (0..=i).map(|j| us[j] * us[i - j]).sum())
        .collect();
    Ok(SquareCompletion { us, qs })
}

impl SquareCompletion {
    /// `B(f)^2 - A(f) - sum q_i f^i`, which vanishes identically.
    pub fn residual(&self, phis: &[Complex64], f: Complex64) -> Complex64 {
        let d = self.us.len();
        let b = ComplexPoly { coeffs: self.us.clone() }.eval(f);
        let mut inner = f.powu(d as u32);
        for (j, phi) in phis.iter().enumerate() {
            inner += phi * f.powu(j as u32 + 1);
        }
        let a = inner * f.powu(d as u32 - 2);
        let q = ComplexPoly { coeffs: self.qs.clone() }.eval(f);
        b * b - a - q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_c(rng: &mut ChaCha8Rng) -> Complex64 {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, 0.0, 1e-20]);
        assert_eq!(p.degree(), 1);
        assert_eq!(ComplexPoly::new(vec![]).degree(), 0);
    }

    #[test]
    fn eval_examples() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.eval(c(1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(p.eval(c(0.0, 2.0)), c(-5.0, 0.0));
        // term-by-term oracle
        let q = ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]);
        let z = c(1.0, 1.0);
        let direct: Complex64 = q.coeffs().iter().enumerate().map(|(k, a)| a * z.powu(k as u32)).sum();
        assert!((q.eval(z) - direct).norm() <= 1e-12 * direct.norm());
        assert!((q.eval(z) - c(-5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(ComplexPoly::from_real(&[-1.0, 0.0, 1.0]).derivative(), ComplexPoly::from_real(&[0.0, 2.0]));
        assert_eq!(ComplexPoly::from_real(&[5.0]).derivative(), ComplexPoly::from_real(&[0.0]));
        assert_eq!(
            ComplexPoly::from_real(&[0.0, 3.0, 0.0, 0.0, 1.0]).derivative(),
            ComplexPoly::from_real(&[3.0, 0.0, 0.0, 4.0])
        );
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn roots_examples() {
        let r = sorted(ComplexPoly::from_real(&[-1.0, 0.0, 1.0]).roots().unwrap());
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-12);
        let r = sorted(ComplexPoly::from_real(&[0.0, -1.0, 1.0]).roots().unwrap());
        assert!(r[0].norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(ComplexPoly::from_real(&[3.0]).roots(), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn roots_residual_random_quintics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut coeffs: Vec<Complex64> = (0..5).map(|_| random_c(&mut rng)).collect();
            coeffs.push(c(1.0, 0.0));
            let p = ComplexPoly::new(coeffs);
            let roots = p.roots().unwrap();
            assert_eq!(roots.len(), 5);
            let bound = 1e-8 * (1.0 + p.max_coeff_norm());
            for r in roots {
                assert!(p.eval(r).norm() < bound, "residual {}", p.eval(r).norm());
            }
        }
    }

    #[test]
    fn simple_zero_examples() {
        assert!(ComplexPoly::from_real(&[-1.0, 0.0, 1.0]).has_simple_zeros(1e-6));
        assert!(!ComplexPoly::from_real(&[0.0, 0.0, 1.0]).has_simple_zeros(1e-6));
        // fourth roots of unity are pairwise at least sqrt(2) apart
        assert!(ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]).has_simple_zeros(1e-6));
        assert!(ComplexPoly::from_real(&[1.0, -1.0, 0.0, 0.0, 0.0, 1.0]).has_simple_zeros(SIMPLE_ZERO_TOL));
        assert!(!ComplexPoly::from_real(&[1.0, -2.0, 1.0]).has_simple_zeros(1e-6));
    }

    #[test]
    fn divided_difference_examples() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.divided_difference(c(3.0, 0.0), c(1.0, 0.0)), c(4.0, 0.0));
        let q = ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(q.divided_difference(c(2.0, 0.0), c(1.0, 0.0)), c(15.0, 0.0));
        let z = c(0.3, -1.2);
        assert_eq!(q.divided_difference(z, z), q.derivative().eval(z));
    }

    #[test]
    fn square_completion_small_cases() {
        let s = complete_square(&[c(0.0, 0.0)], 2).unwrap();
        assert_eq!(s.us, vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(s.qs, vec![c(0.0, 0.0)]);

        let (p1, p2) = (c(0.4, -1.0), c(2.0, 0.5));
        let s = complete_square(&[p1, p2], 3).unwrap();
        assert_eq!(s.us[2], c(1.0, 0.0));
        assert_eq!(s.us[1], p2 * 0.5);
        assert!((s.us[0] - (p1 - p2 * p2 * 0.25) * 0.5).norm() < 1e-15);

        assert_eq!(complete_square(&[], 1), Err(Error::SquareDegree(1)));
        assert!(complete_square(&[c(1.0, 0.0)], 3).is_err());
    }

    #[test]
    fn square_completion_identity_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..=7 {
            let phis: Vec<Complex64> = (0..d - 1).map(|_| random_c(&mut rng)).collect();
            let s = complete_square(&phis, d).unwrap();
            for _ in 0..10 {
                let f = random_c(&mut rng) * 2.0;
                let scale = 1.0 + f.norm().powi(2 * d as i32 - 2);
                assert!(s.residual(&phis, f).norm() < 1e-10 * scale, "d={d}");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let p: ComplexPoly = "-1,0,0.5-2i,1".parse().unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.to_string().parse::<ComplexPoly>().unwrap(), p);
    }

    proptest::proptest! {
        #[test]
        fn divided_difference_identity(
            coeffs in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..7),
            w in (-3.0f64..3.0, -3.0f64..3.0),
            z in (-3.0f64..3.0, -3.0f64..3.0),
        ) {
            let p = ComplexPoly::new(coeffs.into_iter().map(|(a, b)| c(a, b)).collect());
            let (w, z) = (c(w.0, w.1), c(z.0, z.1));
            let lhs = (w - z) * p.divided_difference(w, z);
            let rhs = p.eval(w) - p.eval(z);
            // rounding scale of the two Horner evaluations
            let scale: f64 = 1.0 + p.coeffs().iter().enumerate()
                .map(|(k, a)| a.norm() * (w.norm().powi(k as i32) + z.norm().powi(k as i32)))
                .sum::<f64>();
            proptest::prop_assert!((lhs - rhs).norm() < 1e-12 * scale);
        }
    }
}
