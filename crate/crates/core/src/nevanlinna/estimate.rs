use super::SurfaceFunction;
use crate::rng::{pairwise_sum, stream};
use crate::surface::Danielewski;
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Estimates with a larger share of skipped draws are flagged invalid.
pub const MAX_SKIP_FRACTION: f64 = 0.01;

pub const CSV_HEADER: &str = "r,mean,stderr,n_samples,n_skipped,seed";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicEstimate {
    pub r: f64,
    pub mean: f64,
    pub stderr: f64,
    /// Accepted draws.
    pub n_samples: usize,
    /// Draws whose value overflowed or hit a pole.
    pub n_skipped: usize,
    pub seed: u64,
    pub valid: bool,
}

/// The geometric grid `r_start * factor^i`, `i < steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RSchedule {
    pub r_start: f64,
    pub factor: f64,
    pub steps: usize,
}

impl RSchedule {
    pub fn new(r_start: f64, factor: f64, steps: usize) -> Result<Self> {
        if !(r_start > 0.0 && r_start.is_finite()) {
            return Err(Error::InvalidArgument(format!("r_start must be positive, got {r_start}")));
        }
        if !(factor > 1.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument(format!("factor must exceed 1, got {factor}")));
        }
        if steps < 1 {
            return Err(Error::InvalidArgument("steps must be at least 1".into()));
        }
        Ok(Self { r_start, factor, steps })
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.r_start * self.factor.powi(i as i32)).collect()
    }
}

/// A uniform point on the unit sphere of `C^2` from four standard normals.
pub fn sample_sphere<R: Rng + ?Sized>(rng: &mut R) -> (Complex64, Complex64) {
    let mut g = || -> f64 { rng.sample(StandardNormal) };
    let (a, b) = (Complex64::new(g(), g()), Complex64::new(g(), g()));
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / norm, b / norm)
}

/// `log+ |F|` on one sheet, or `None` when the value is unusable.
fn log_plus(l: f64) -> Option<f64> {
    if l.is_nan() || l == f64::INFINITY {
        None
    } else {
        Some(l.max(0.0))
    }
}

/// Per-sample integrands `log+|F(P1)| + log+|F(P2)|` for each function, in
/// sample order; `NaN` marks a skipped draw.
pub fn integrand_samples(
    s: &Danielewski,
    fs: &[&dyn SurfaceFunction],
    r: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    if n < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 samples, got {n}")));
    }
    let rows: Vec<Vec<f64>> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let (a, b) = sample_sphere(&mut stream(seed, i));
            let (p1, p2) = s.fiber(a * r, b * r);
            fs.iter()
                .map(|f| match (log_plus(f.log_abs(&p1)), log_plus(f.log_abs(&p2))) {
                    (Some(u), Some(v)) => u + v,
                    _ => f64::NAN,
                })
                .collect()
        })
        .collect();
    Ok((0..fs.len()).map(|k| rows.iter().map(|row| row[k]).collect()).collect())
}

/// Mean and standard error of the finite entries of `values`.
pub fn summarize(values: &[f64], r: f64, seed: u64) -> CharacteristicEstimate {
    let kept: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    let n = kept.len();
    let skipped = values.len() - n;
    let mean = if n > 0 { pairwise_sum(&kept) / n as f64 } else { f64::NAN };
    let stderr = if n > 1 {
        let dev: Vec<f64> = kept.iter().map(|v| (v - mean) * (v - mean)).collect();
        (pairwise_sum(&dev) / (n - 1) as f64 / n as f64).sqrt()
    } else {
        f64::NAN
    };
    CharacteristicEstimate {
        r,
        mean,
        stderr,
        n_samples: n,
        n_skipped: skipped,
        seed,
        valid: n > 1 && (skipped as f64) < MAX_SKIP_FRACTION * n as f64,
    }
}

/// Estimates for several functions from the same sphere draws.
pub fn characteristic_many(
    s: &Danielewski,
    fs: &[&dyn SurfaceFunction],
    r: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<CharacteristicEstimate>> {
    let cols = integrand_samples(s, fs, r, n, seed)?;
    Ok(cols.iter().map(|c| summarize(c, r, seed)).collect())
}

pub fn characteristic<F: SurfaceFunction>(
    s: &Danielewski,
    f: &F,
    r: f64,
    n: usize,
    seed: u64,
) -> Result<CharacteristicEstimate> {
    Ok(characteristic_many(s, &[f as &dyn SurfaceFunction], r, n, seed)?.remove(0))
}

/// Least-squares slope of `mean` against `log r`, with the standard error
/// propagated from the individual estimates.
pub fn slope_vs_logr(estimates: &[CharacteristicEstimate]) -> Result<(f64, f64)> {
    if estimates.len() < 3 {
        return Err(Error::TooFewEstimates(estimates.len()));
    }
    let xs: Vec<f64> = estimates.iter().map(|e| e.r.ln()).collect();
    let n = xs.len() as f64;
    let x_bar = xs.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_bar).powi(2)).sum();
    let weights: Vec<f64> = xs.iter().map(|x| (x - x_bar) / sxx).collect();
    let slope = weights.iter().zip(estimates).map(|(w, e)| w * e.mean).sum();
    let var: f64 = weights.iter().zip(estimates).map(|(w, e)| (w * e.stderr).powi(2)).sum();
    Ok((slope, var.sqrt()))
}

pub fn to_csv(estimates: &[CharacteristicEstimate]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for e in estimates {
        out.push_str(&format!("{},{},{},{},{},{}\n", e.r, e.mean, e.stderr, e.n_samples, e.n_skipped, e.seed));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ComplexPoly;
    use crate::surface_expr::parse_expression;

    fn quartic() -> Danielewski {
        Danielewski::new(ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0])).unwrap()
    }

    fn estimate(r: f64, mean: f64) -> CharacteristicEstimate {
        CharacteristicEstimate { r, mean, stderr: 0.01, n_samples: 100, n_skipped: 0, seed: 0, valid: true }
    }

    #[test]
    fn sphere_points() {
        let mut acc = Vec::new();
        for i in 0..100_000 {
            let (a, b) = sample_sphere(&mut stream(1, i));
            assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-12);
            acc.push(b.norm_sqr());
        }
        // |b|^2 is uniform on [0, 1]
        let mean = pairwise_sum(&acc) / acc.len() as f64;
        let sigma = (1.0 / 12.0 / acc.len() as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "{mean}");
        assert_eq!(sample_sphere(&mut stream(9, 4)), sample_sphere(&mut stream(9, 4)));
    }

    #[test]
    fn constants_vanish() {
        let s = quartic();
        let c = parse_expression("0.5 - 0.5i").unwrap();
        let e = characteristic(&s, &c, 100.0, 1000, 3).unwrap();
        assert_eq!(e.mean, 0.0);
        assert_eq!(e.stderr, 0.0);
        assert_eq!((e.n_samples, e.n_skipped), (1000, 0));
    }

    #[test]
    fn z_grows_with_slope_two() {
        let s = quartic();
        let z = parse_expression("z").unwrap();
        let ests: Vec<_> = [1e2, 1e3, 1e4, 1e5, 1e6]
            .iter()
            .map(|&r| characteristic(&s, &z, r, 20_000, 42).unwrap())
            .collect();
        for w in ests.windows(2) {
            assert!(w[1].mean > w[0].mean - 3.0 * w[1].stderr);
        }
        let (slope, se) = slope_vs_logr(&ests).unwrap();
        assert!((slope - 2.0).abs() < 0.1, "{slope} +- {se}");
        // E log|b| = E log(U) / 2 = -1/2 on the unit sphere, so 2 log r - 1
        let top = ests.last().unwrap();
        assert!((top.mean - (2.0 * 1e6f64.ln() - 1.0)).abs() < 0.05, "{}", top.mean);
    }

    #[test]
    fn x_over_z_tends_to_half_the_degree() {
        let s = quartic();
        let x = parse_expression("x").unwrap();
        let z = parse_expression("z").unwrap();
        let e = characteristic_many(&s, &[&x, &z], 1e4, 20_000, 5).unwrap();
        let ratio = e[0].mean / e[1].mean;
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn sheet_symmetry_is_exact() {
        let s = quartic();
        let f = parse_expression("x*exp(z) + y^2").unwrap();
        let g = f.swap_xy();
        let cols = integrand_samples(&s, &[&f, &g], 50.0, 500, 8).unwrap();
        assert_eq!(cols[0], cols[1]);
    }

    #[test]
    fn overflow_is_counted() {
        let s = quartic();
        let f = parse_expression("exp(exp(z))").unwrap();
        let e = characteristic(&s, &f, 1e3, 1000, 2).unwrap();
        assert!(e.n_skipped > 0);
        assert!(!e.valid);
        assert_eq!(e.n_samples + e.n_skipped, 1000);
    }

    #[test]
    fn determinism_across_thread_counts() {
        let s = quartic();
        let f = parse_expression("x + z^2").unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| characteristic(&s, &f, 1e3, 5000, 77).unwrap())
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.mean.to_bits(), four.mean.to_bits());
        assert_eq!(one.stderr.to_bits(), four.stderr.to_bits());
    }

    #[test]
    fn argument_checks() {
        let s = quartic();
        let z = parse_expression("z").unwrap();
        assert!(characteristic(&s, &z, -1.0, 1000, 0).is_err());
        assert!(characteristic(&s, &z, 10.0, 99, 0).is_err());
        assert!(RSchedule::new(0.0, 10.0, 3).is_err());
        assert!(RSchedule::new(1.0, 1.0, 3).is_err());
        assert_eq!(RSchedule::new(100.0, 10.0, 3).unwrap().radii(), vec![100.0, 1000.0, 10000.0]);
    }

    #[test]
    fn slope_examples() {
        let flat: Vec<_> = [1e1, 1e2, 1e3].iter().map(|&r| estimate(r, 4.0)).collect();
        assert!(slope_vs_logr(&flat).unwrap().0.abs() < 1e-12);
        let lin: Vec<_> = [1e1, 1e2, 1e3, 1e4].iter().map(|&r| estimate(r, 2.0 * r.ln())).collect();
        assert!((slope_vs_logr(&lin).unwrap().0 - 2.0).abs() < 1e-12);
        assert_eq!(slope_vs_logr(&flat[..2]), Err(Error::TooFewEstimates(2)));
    }

    #[test]
    fn csv_layout() {
        let text = to_csv(&[estimate(10.0, 1.5)]);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("r,mean,stderr,n_samples,n_skipped,seed"));
        assert_eq!(lines.next(), Some("10,1.5,0.01,100,0,0"));
    }
}
