//! Pointwise identities involving derivatives: chart Jacobians, the lifted
//! vector fields and the involution splitting.

use super::{gen, worst, Outcome, Params};
use crate::autos::{Letter, Overshear, Side, Word};
use crate::diff::DEFAULT_REL_STEP;
use crate::nevanlinna::{characteristic, jacobian_xz, step_jacobian, theta_apply, Theta};
use crate::rng::stream;
use crate::surface::{Danielewski, SurfacePoint};
use crate::surface_expr::{parse_expression, SurfaceExpr};
use crate::Result;
use num_complex::Complex64;
use rand::Rng;

const QUARTIC: &str = "-1,0,0,0,1";
const MIXED: &str = "x*exp(z) + y^2 - 2*z";
/// Distance kept from the axis `x = 0` and the ramification locus `x = y`.
const MARGIN: f64 = 1e-3;

fn rel(a: Complex64, b: Complex64) -> f64 {
    let e = (a - b).norm() / b.norm();
    if e.is_finite() {
        e
    } else {
        f64::NAN
    }
}

fn abs_rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

fn generic_point<R: Rng + ?Sized>(s: &Danielewski, rng: &mut R) -> SurfacePoint {
    loop {
        let p = gen::point(s, rng);
        if p.x.norm() >= MARGIN && (p.x - p.y).norm() >= MARGIN {
            return p;
        }
    }
}

fn step(o: &Overshear) -> Word {
    Word::new(vec![Letter::Involution, o.clone().into()]).expect("two letters")
}

pub(crate) fn jacobi_step_ratio(params: &mut Params, seed: u64) -> Result<Outcome> {
    let s = params.surface(QUARTIC)?;
    let points = params.usize("points", 100)?;
    let mut rng = stream(seed, 0);
    let (mut step_err, mut chain_err, mut recursion_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut min_margin = f64::INFINITY;
    let mut done = 0;
    while done < points {
        let o = gen::overshear(&mut rng, Side::First);
        let p = generic_point(&s, &mut rng);
        let image = step(&o).apply(&s, &p);
        if image.x.norm() < MARGIN {
            continue;
        }
        done += 1;
        min_margin = min_margin.min(p.x.norm()).min((p.x - p.y).norm()).min(image.x.norm());
        let numeric = jacobian_xz(&s, &step(&o), &p, DEFAULT_REL_STEP)?;
        step_err = worst([step_err, rel(numeric, step_jacobian(&o, &p)?)]);

        // three steps: the Jacobian is the product of the step ratios, and the
        // coordinates follow u' = p(w')/u, v' = u, w' = w e^{u f(u)} + u g(u)
        let os: Vec<Overshear> = (0..3).map(|_| gen::overshear(&mut rng, Side::First)).collect();
        let mut letters = Vec::new();
        for o in os.iter().rev() {
            letters.push(Letter::Involution);
            letters.push(o.clone().into());
        }
        let word = Word::new(letters).expect("six letters");
        let (mut u, mut w) = (p.x, p.z);
        let mut v = p.y;
        let mut product = Complex64::new(1.0, 0.0);
        for o in &os {
            product *= step_jacobian(o, &SurfacePoint::new(u, v, w))?;
            let w_next = w * (u * o.f.eval(u)).exp() + u * o.g.eval(u);
            v = u;
            u = s.poly().eval(w_next) / u;
            w = w_next;
        }
        let q = word.apply(&s, &p);
        recursion_err = worst([recursion_err, q.rel_distance(&SurfacePoint::new(u, v, w))]);
        if q.x.norm() >= MARGIN {
            chain_err = worst([chain_err, rel(jacobian_xz(&s, &word, &p, DEFAULT_REL_STEP)?, product)]);
        }
    }
    let mut out = Outcome::default();
    out.metric("max_rel_error", step_err);
    out.metric("max_rel_error_three_steps", chain_err);
    out.metric("max_recursion_error", recursion_err);
    out.metric("min_margin", min_margin);
    out.pass = step_err < 1e-4 && min_margin >= MARGIN;
    out.note(
        "One step I o O_{f,g} scales dx^dz/x by -e^{x f(x)}, the z-derivative of the new third coordinate.",
    );
    Ok(out)
}

pub(crate) fn theta_combination(params: &mut Params, seed: u64) -> Result<Outcome> {
    let s = params.surface(QUARTIC)?;
    let f = parse_expression(&params.string("expr", MIXED)?)?;
    let points = params.usize("points", 100)?;
    let mut rng = stream(seed, 0);
    let (mut chart_x, mut chart_z) = (0.0f64, 0.0f64);
    for _ in 0..points {
        let p = generic_point(&s, &mut rng);
        let t1 = theta_apply(&s, Theta::Theta1, &f, &p, DEFAULT_REL_STEP)?;
        let t2 = theta_apply(&s, Theta::Theta2, &f, &p, DEFAULT_REL_STEP)?;
        let t = theta_apply(&s, Theta::Theta, &f, &p, DEFAULT_REL_STEP)?;
        let tt = theta_apply(&s, Theta::ThetaTilde, &f, &p, DEFAULT_REL_STEP)?;
        chart_x = worst([chart_x, abs_rel(t, (p.x - p.y) / p.x * t1)]);
        chart_z = worst([chart_z, abs_rel(tt, t2 + s.derivative().eval(p.z) / p.x * t1)]);
    }
    let mut out = Outcome::default();
    out.metric("max_error_theta", chart_x);
    out.metric("max_error_theta_tilde", chart_z);
    out.pass = chart_x < 1e-6 && chart_z < 1e-6;
    Ok(out)
}

pub(crate) fn invariant_decomposition(params: &mut Params, seed: u64) -> Result<Outcome> {
    let s = params.surface(QUARTIC)?;
    let f = parse_expression(&params.string("expr", MIXED)?)?;
    let points = params.usize("points", 100)?;
    let r = params.f64("r", 10.0)?;
    let samples = params.samples(10_000)?;
    let g = f.swap_xy();
    let half = SurfaceExpr::Const(Complex64::new(0.5, 0.0));
    let even = SurfaceExpr::Mul(half.clone().into(), SurfaceExpr::Add(f.clone().into(), g.clone().into()).into());
    let odd = SurfaceExpr::Mul(half.into(), SurfaceExpr::Sub(f.clone().into(), g.clone().into()).into());
    let mut rng = stream(seed, 0);
    let (mut sum_err, mut even_err, mut odd_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..points {
        let p = gen::point(&s, &mut rng);
        let ip = p.swap();
        let fp = f.eval(&p);
        sum_err = worst([sum_err, abs_rel(even.eval(&p) + odd.eval(&p), fp)]);
        even_err = worst([even_err, abs_rel(even.eval(&ip), even.eval(&p))]);
        odd_err = worst([odd_err, abs_rel(-odd.eval(&ip), odd.eval(&p))]);
    }
    let tf = characteristic(&s, &f, r, samples, seed)?;
    let tg = characteristic(&s, &g, r, samples, seed)?;
    let mut out = Outcome::default();
    out.metric("max_error_sum", sum_err);
    out.metric("max_error_invariant", even_err);
    out.metric("max_error_anti_invariant", odd_err);
    out.metric("t_f", tf.mean);
    out.metric("t_f_after_involution", tg.mean);
    let t_diff = (tf.mean - tg.mean).abs();
    out.metric("t_difference", t_diff);
    out.pass = sum_err < 1e-6 && even_err < 1e-6 && odd_err < 1e-6 && t_diff <= 1e-12 * (1.0 + tf.mean.abs());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::run_check;
    use serde_json::Map;

    #[test]
    fn pointwise_checks_pass() {
        for name in ["jacobi-step-ratio", "theta-combination", "invariant-decomposition"] {
            let r = run_check(name, &Map::new(), 0).unwrap();
            assert!(r.pass, "{name}: {:?}", r.metrics);
        }
        let r = run_check("jacobi-step-ratio", &Map::new(), 0).unwrap();
        assert!(r.metrics["max_recursion_error"] < 1e-8);
        assert!(r.metrics["max_rel_error_three_steps"] < 1e-4);
    }
}
