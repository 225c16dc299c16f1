//! Central differences with one Richardson step.

use num_complex::Complex64;

/// Derivative at `t = 0` of a function holomorphic along a complex line,
/// sampled at real offsets. `D(h) = (G(h) - G(-h)) / 2h` and the result is
/// `(4 D(h/2) - D(h)) / 3`, which cancels the `h^2` error term.
pub fn richardson_central<G>(g: G, h: f64) -> Complex64
where
    G: Fn(f64) -> Complex64,
{
    let d1 = (g(h) - g(-h)) / (2.0 * h);
    let half = 0.5 * h;
    let d2 = (g(half) - g(-half)) / h;
    (d2 * 4.0 - d1) / 3.0
}

/// Default relative step: `1e-5 * (1 + |coordinate|)`.
pub const DEFAULT_REL_STEP: f64 = 1e-5;

pub fn step_for(h_rel: f64, coordinate: Complex64) -> f64 {
    h_rel * (1.0 + coordinate.norm())
}
