//! Monte-Carlo estimation of the Nevanlinna characteristic over the 2-sheeted
//! projection `D_p -> C^2`, plus lifted derivatives and chart Jacobians.
//!
//! The estimate is
//!
//! ```text
//! T(F, r) = E_{zeta ~ Unif(S^3)} [ log+ |F(P1)| + log+ |F(P2)| ],   {P1, P2} = fiber(r zeta)
//! ```
//!
//! which differs from the integral over `r S^3` with the invariant form by a
//! constant factor only; every experiment works with ratios, differences or
//! slopes. Sample `i` always uses random stream `i` of the seed, so a run is
//! reproducible bit for bit on any number of threads, and different radii or
//! functions evaluated with the same seed share their sphere points.

mod estimate;
mod jacobian;
mod theta;

pub use estimate::{
    characteristic, characteristic_many, integrand_samples, sample_sphere, slope_vs_logr, summarize,
    to_csv, CharacteristicEstimate, RSchedule, CSV_HEADER, MAX_SKIP_FRACTION,
};
pub use jacobian::{jacobian_xz, step_jacobian};
pub use theta::{theta_apply, Theta, ThetaFunction};

use crate::autos::Word;
use crate::surface::{Danielewski, SurfacePoint};
use crate::surface_expr::SurfaceExpr;
use num_complex::Complex64;

/// A function on the surface. `log_abs` may be overridden by evaluators
/// that can represent values beyond `f64` range.
pub trait SurfaceFunction: Sync {
    /// The value at `p`; overflow or a pole gives a non-finite result.
    fn eval(&self, p: &SurfacePoint) -> Complex64;

    fn log_abs(&self, p: &SurfacePoint) -> f64 {
        let v = self.eval(p);
        if v.is_finite() {
            v.norm().ln()
        } else {
            f64::NAN
        }
    }
}

impl SurfaceFunction for SurfaceExpr {
    fn eval(&self, p: &SurfacePoint) -> Complex64 {
        SurfaceExpr::eval(self, p)
    }

    fn log_abs(&self, p: &SurfacePoint) -> f64 {
        SurfaceExpr::log_abs(self, p)
    }
}

/// Wraps a closure as a [`SurfaceFunction`].
pub struct FnFunction<F>(pub F);

impl<F> SurfaceFunction for FnFunction<F>
where
    F: Fn(&SurfacePoint) -> Complex64 + Sync,
{
    fn eval(&self, p: &SurfacePoint) -> Complex64 {
        (self.0)(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    X,
    Y,
    Z,
}

/// One coordinate of `W(P)`: the functions `u_k`, `v_k`, `w_k` of a word.
pub struct WordComponent {
    pub surface: Danielewski,
    pub word: Word,
    pub coordinate: Coordinate,
}

impl SurfaceFunction for WordComponent {
    fn eval(&self, p: &SurfacePoint) -> Complex64 {
        let q = self.word.apply(&self.surface, p);
        match self.coordinate {
            Coordinate::X => q.x,
            Coordinate::Y => q.y,
            Coordinate::Z => q.z,
        }
    }
}
