//! Derivatives of surface functions along four vector fields:
//!
//! ```text
//! theta_1 = x/(x-y) d/dx - y/(x-y) d/dy                    lift of d/da
//! theta_2 = p'(z)/(y-x) (d/dx - d/dy) + d/dz               lift of d/db
//! theta   = d/dx - (y/x) d/dy                              chart d/dx
//! theta~  = (p'(z)/x) d/dy + d/dz                          chart d/dz
//! ```
//!
//! The lifts are differentiated along the covering: `(a, b)` is moved and the
//! fiber point that continues `P` is followed. The chart fields move `x` or
//! `z` in `(x, p(z)/x, z)`. The two routes share no code beyond the
//! difference formula, so `theta = ((x-y)/x) theta_1` and
//! `theta~ = theta_2 + (p'(z)/x) theta_1` are genuine cross-checks.

use super::SurfaceFunction;
use crate::diff::{richardson_central, step_for};
use crate::poly::ComplexPoly;
use crate::surface::{Danielewski, SurfacePoint};
use crate::{Error, Result};
use num_complex::Complex64;

/// Steps never exceed this fraction of the distance to the nearest singularity.
const STEP_FRACTION: f64 = 0.01;
/// Relative margin below which a denominator counts as zero.
const MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theta {
    Theta1,
    Theta2,
    Theta,
    ThetaTilde,
}

fn scale(p: &SurfacePoint) -> f64 {
    1.0 + p.x.norm().max(p.y.norm()).max(p.z.norm())
}

/// The fiber point over `(a, b)` closest to `near`.
fn follow(s: &Danielewski, a: Complex64, b: Complex64, near: &SurfacePoint) -> SurfacePoint {
    let (p1, p2) = s.fiber(a, b);
    if (p1.x - near.x).norm() <= (p2.x - near.x).norm() {
        p1
    } else {
        p2
    }
}

/// Distance from `a` to the branch values `+-2 sqrt(p(b))` in the `a`-plane.
fn branch_distance_a(s: &Danielewski, a: Complex64, b: Complex64) -> f64 {
    let w = (s.poly().eval(b) * 4.0).sqrt();
    (a - w).norm().min((a + w).norm())
}

/// Distance from `b` to the zeros of `a^2 - 4 p(t)` in the `t`-plane.
fn branch_distance_b(s: &Danielewski, a: Complex64, b: Complex64) -> f64 {
    let mut coeffs: Vec<Complex64> = s.poly().coeffs().iter().map(|c| -c * 4.0).collect();
    coeffs[0] += a * a;
    match ComplexPoly::new(coeffs).roots() {
        Ok(roots) => roots.iter().map(|r| (b - r).norm()).fold(f64::INFINITY, f64::min),
        Err(_) => f64::INFINITY,
    }
}

fn capped(h_rel: f64, coordinate: Complex64, distance: f64) -> f64 {
    step_for(h_rel, coordinate).min(STEP_FRACTION * distance)
}

/// `theta(F)(P)` with relative step `h_rel`.
pub fn theta_apply<F: SurfaceFunction + ?Sized>(
    s: &Danielewski,
    which: Theta,
    f: &F,
    p: &SurfacePoint,
    h_rel: f64,
) -> Result<Complex64> {
    let sc = scale(p);
    match which {
        Theta::Theta1 | Theta::Theta2 => {
            if (p.x - p.y).norm() <= MARGIN * sc {
                return Err(Error::NearSingular);
            }
            let (a, b) = p.project();
            if which == Theta::Theta1 {
                let h = capped(h_rel, a, branch_distance_a(s, a, b));
                Ok(richardson_central(|t| f.eval(&follow(s, a + t, b, p)), h))
            } else {
                let h = capped(h_rel, b, branch_distance_b(s, a, b));
                Ok(richardson_central(|t| f.eval(&follow(s, a, b + t, p)), h))
            }
        }
        Theta::Theta | Theta::ThetaTilde => {
            if p.x.norm() <= MARGIN * sc {
                return Err(Error::NearSingular);
            }
            let chart = |x: Complex64, z: Complex64| SurfacePoint::new(x, s.poly().eval(z) / x, z);
            if which == Theta::Theta {
                let h = capped(h_rel, p.x, p.x.norm());
                Ok(richardson_central(|t| f.eval(&chart(p.x + t, p.z)), h))
            } else {
                let h = step_for(h_rel, p.z);
                Ok(richardson_central(|t| f.eval(&chart(p.x, p.z + t)), h))
            }
        }
    }
}

/// `theta(F)` as a surface function; points where the field is undefined
/// evaluate to NaN and are skipped by the estimator.
pub struct ThetaFunction<'a, F: ?Sized> {
    pub surface: &'a Danielewski,
    pub which: Theta,
    pub inner: &'a F,
    pub h_rel: f64,
}

impl<F: SurfaceFunction + ?Sized> SurfaceFunction for ThetaFunction<'_, F> {
    fn eval(&self, p: &SurfacePoint) -> Complex64 {
        theta_apply(self.surface, self.which, self.inner, p, self.h_rel)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::gen;
    use crate::diff::DEFAULT_REL_STEP;
    use crate::surface_expr::{parse_expression, SurfaceExpr};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quartic() -> Danielewski {
        Danielewski::new(ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0])).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / (1.0 + b.norm())
    }

    fn generic_points(s: &Danielewski, n: usize) -> Vec<SurfacePoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut out = Vec::new();
        while out.len() < n {
            let p = gen::point(s, &mut rng);
            if (p.x - p.y).norm() > 1e-3 && p.x.norm() > 1e-3 {
                out.push(p);
            }
        }
        out
    }

    /// The four fields applied through their coefficient formulas to an
    /// expression whose ambient partials are known in closed form.
    fn by_formula(s: &Danielewski, which: Theta, p: &SurfacePoint) -> Complex64 {
        // F = x^2 y + 3 z^3 - y z: F_x = 2xy, F_y = x^2 - z, F_z = 9 z^2 - y
        let (x, y, z) = (p.x, p.y, p.z);
        let fx = x * y * 2.0;
        let fy = x * x - z;
        let fz = z * z * 9.0 - y;
        let dp = s.poly().eval_derivative(z);
        match which {
            Theta::Theta1 => (x * fx - y * fy) / (x - y),
            Theta::Theta2 => dp / (y - x) * (fx - fy) + fz,
            Theta::Theta => fx - y / x * fy,
            Theta::ThetaTilde => dp / x * fy + fz,
        }
    }

    #[test]
    fn fields_match_their_formulas() {
        let s = quartic();
        let f = parse_expression("x^2*y + 3*z^3 - y*z").unwrap();
        for p in generic_points(&s, 50) {
            for which in [Theta::Theta1, Theta::Theta2, Theta::Theta, Theta::ThetaTilde] {
                let got = theta_apply(&s, which, &f, &p, DEFAULT_REL_STEP).unwrap();
                let want = by_formula(&s, which, &p);
                assert!(rel(got, want) < 1e-6, "{which:?} at {p:?}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn coordinate_examples() {
        let s = quartic();
        let x: SurfaceExpr = "x".parse().unwrap();
        let z: SurfaceExpr = "z".parse().unwrap();
        for p in generic_points(&s, 20) {
            assert!(rel(theta_apply(&s, Theta::Theta, &x, &p, DEFAULT_REL_STEP).unwrap(), Complex64::new(1.0, 0.0)) < 1e-8);
            assert!(rel(theta_apply(&s, Theta::ThetaTilde, &z, &p, DEFAULT_REL_STEP).unwrap(), Complex64::new(1.0, 0.0)) < 1e-8);
            assert!(rel(theta_apply(&s, Theta::Theta2, &z, &p, DEFAULT_REL_STEP).unwrap(), Complex64::new(1.0, 0.0)) < 1e-8);
        }
    }

    #[test]
    fn linear_combinations() {
        let s = quartic();
        let f = parse_expression("x*exp(z) + y^2 - 2*z").unwrap();
        for p in generic_points(&s, 100) {
            let t1 = theta_apply(&s, Theta::Theta1, &f, &p, DEFAULT_REL_STEP).unwrap();
            let t2 = theta_apply(&s, Theta::Theta2, &f, &p, DEFAULT_REL_STEP).unwrap();
            let t = theta_apply(&s, Theta::Theta, &f, &p, DEFAULT_REL_STEP).unwrap();
            let tt = theta_apply(&s, Theta::ThetaTilde, &f, &p, DEFAULT_REL_STEP).unwrap();
            assert!(rel(t, (p.x - p.y) / p.x * t1) < 1e-6);
            assert!(rel(tt, t2 + s.poly().eval_derivative(p.z) / p.x * t1) < 1e-6);
        }
    }

    #[test]
    fn singular_points_are_rejected() {
        let s = quartic();
        let f: SurfaceExpr = "x".parse().unwrap();
        let b = Complex64::new(0.3, 0.2);
        let a = (s.poly().eval(b) * 4.0).sqrt();
        let (ram, _) = s.fiber(a, b);
        assert_eq!(theta_apply(&s, Theta::Theta1, &f, &ram, 1e-5), Err(Error::NearSingular));
        let axis = SurfacePoint::new(Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0));
        assert_eq!(theta_apply(&s, Theta::Theta, &f, &axis, 1e-5), Err(Error::NearSingular));
        let wrapped = ThetaFunction { surface: &s, which: Theta::Theta, inner: &f, h_rel: 1e-5 };
        assert!(wrapped.eval(&axis).re.is_nan());
    }
}
