//! Jacobians of automorphisms with respect to the volume form `dx ^ dz / x`.
//!
//! In the chart `(x, z) -> (x, p(z)/x, z)` a map `(x, z) -> (u, w)` changes
//! that form by `(x/u) (u_x w_z - u_z w_x)`.

use crate::autos::{Overshear, Side, Word};
use crate::diff::{richardson_central, step_for};
use crate::surface::{Danielewski, SurfacePoint};
use crate::{Error, Result};
use num_complex::Complex64;

const MARGIN: f64 = 1e-8;

/// Numerical chart Jacobian of `w` at `p`.
pub fn jacobian_xz(s: &Danielewski, w: &Word, p: &SurfacePoint, h_rel: f64) -> Result<Complex64> {
    let sc = 1.0 + p.x.norm().max(p.y.norm()).max(p.z.norm());
    if p.x.norm() <= MARGIN * sc {
        return Err(Error::NearSingular);
    }
    let image = w.apply(s, p);
    let isc = 1.0 + image.x.norm().max(image.y.norm()).max(image.z.norm());
    if !image.is_finite() || image.x.norm() <= MARGIN * isc {
        return Err(Error::NearSingular);
    }
    let at = |x: Complex64, z: Complex64| w.apply(s, &SurfacePoint::new(x, s.poly().eval(z) / x, z));
    let hx = step_for(h_rel, p.x).min(0.01 * p.x.norm());
    let hz = step_for(h_rel, p.z);
    let ux = richardson_central(|t| at(p.x + t, p.z).x, hx);
    let wx = richardson_central(|t| at(p.x + t, p.z).z, hx);
    let uz = richardson_central(|t| at(p.x, p.z + t).x, hz);
    let wz = richardson_central(|t| at(p.x, p.z + t).z, hz);
    let jac = p.x / image.x * (ux * wz - uz * wx);
    if jac.is_finite() {
        Ok(jac)
    } else {
        Err(Error::NearSingular)
    }
}

/// Closed form of the Jacobian of one step `I o O_{f,g}` with `O` on the
/// first side: `-dw/dz = -e^{x f(x)}`.
pub fn step_jacobian(o: &Overshear, p: &SurfacePoint) -> Result<Complex64> {
    if o.side != Side::First {
        return Err(Error::SideMismatch);
    }
    Ok(-(p.x * o.f.eval(p.x)).exp())
}
