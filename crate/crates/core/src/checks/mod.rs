//! Named, seeded numerical experiments. Each one reproduces a checkable
//! statement about Danielewski surfaces and their overshear groups and
//! returns a [`CheckReport`].
//!
//! A check reads its parameters from a JSON object (missing keys take the
//! check's defaults) and draws all randomness from streams of its seed, so
//! the report metrics depend on `(name, config, seed)` alone.

mod algebra;
mod calculus;
pub mod gen;
mod growth;

use crate::nevanlinna::{CharacteristicEstimate, RSchedule};
use crate::poly::ComplexPoly;
use crate::surface::Danielewski;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub metrics: BTreeMap<String, f64>,
    /// The parameters the check ran with, defaults included.
    pub config: Map<String, Value>,
    pub seed: u64,
    pub runtime_ms: u64,
    pub notes: String,
}

type CheckFn = fn(&mut Params, u64) -> Result<Outcome>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("composition-relation", algebra::composition_relation),
    ("surface-preservation", algebra::surface_preservation),
    ("inverse-law", algebra::inverse_law),
    ("sequence-normal-form", algebra::sequence_normal_form),
    ("jacobi-step-ratio", calculus::jacobi_step_ratio),
    ("coordinate-growth", growth::coordinate_growth),
    ("mohonko-polynomial", growth::mohonko_polynomial),
    ("transcendental-growth", growth::transcendental_growth),
    ("step1-ratio", growth::step1_ratio),
    ("stepk-propagation", growth::stepk_propagation),
    ("main-estimate-report", growth::main_estimate_report),
    ("proper-subgroup", growth::proper_subgroup),
    ("counterexample-n2", algebra::counterexample_n2),
    ("shear-identity-n1", algebra::shear_identity_n1),
    ("invariant-decomposition", calculus::invariant_decomposition),
    ("theta-combination", calculus::theta_combination),
    ("square-completion", algebra::square_completion),
];

/// Names of all checks, in registry order.
pub fn registry() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run_check(name: &str, config: &Map<String, Value>, seed: u64) -> Result<CheckReport> {
    let Some((_, check)) = CHECKS.iter().find(|(n, _)| *n == name) else {
        return Err(Error::UnknownCheck {
            name: name.to_string(),
            registry: registry().into_iter().map(String::from).collect(),
        });
    };
    let start = Instant::now();
    let mut params = Params { given: config, used: Map::new() };
    let outcome = check(&mut params, seed)?;
    let mut echoed = params.used;
    for (k, v) in config {
        echoed.insert(k.clone(), v.clone());
    }
    Ok(CheckReport {
        name: name.to_string(),
        pass: outcome.pass,
        metrics: outcome.metrics,
        config: echoed,
        seed,
        runtime_ms: start.elapsed().as_millis() as u64,
        notes: outcome.notes,
    })
}

/// Parameter lookup with per-check defaults. Every value read is recorded so
/// the report can echo the effective configuration.
pub(crate) struct Params<'a> {
    given: &'a Map<String, Value>,
    used: Map<String, Value>,
}

impl Params<'_> {
    fn bad(key: &str, v: &Value) -> Error {
        Error::InvalidArgument(format!("config `{key}` has unusable value {v}"))
    }

    pub(crate) fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        let v = match self.given.get(key) {
            None => default,
            Some(Value::Number(n)) => n.as_f64().ok_or_else(|| Self::bad(key, &Value::Number(n.clone())))?,
            Some(Value::String(s)) => s.trim().parse().map_err(|_| Self::bad(key, &Value::String(s.clone())))?,
            Some(v) => return Err(Self::bad(key, v)),
        };
        self.used.insert(key.into(), v.into());
        Ok(v)
    }

    pub(crate) fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        let v = match self.given.get(key) {
            None => default,
            Some(Value::Number(n)) => n
                .as_u64()
                .or_else(|| n.as_f64().filter(|f| f.fract() == 0.0 && *f >= 0.0).map(|f| f as u64))
                .ok_or_else(|| Self::bad(key, &Value::Number(n.clone())))? as usize,
            Some(Value::String(s)) => s.trim().parse().map_err(|_| Self::bad(key, &Value::String(s.clone())))?,
            Some(v) => return Err(Self::bad(key, v)),
        };
        self.used.insert(key.into(), v.into());
        Ok(v)
    }

    pub(crate) fn string(&mut self, key: &str, default: &str) -> Result<String> {
        let v = match self.given.get(key) {
            None => default.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(v) => return Err(Self::bad(key, v)),
        };
        self.used.insert(key.into(), v.clone().into());
        Ok(v)
    }

    /// The surface for the `poly` key, given as ascending coefficients.
    pub(crate) fn surface(&mut self, default: &str) -> Result<Danielewski> {
        let text = self.string("poly", default)?;
        Danielewski::new(text.parse::<ComplexPoly>()?)
    }

    pub(crate) fn schedule(&mut self, r_start: f64, factor: f64, steps: usize) -> Result<RSchedule> {
        let r_start = self.f64("r_start", r_start)?;
        let factor = self.f64("factor", factor)?;
        let steps = self.usize("steps", steps)?;
        RSchedule::new(r_start, factor, steps)
    }

    pub(crate) fn samples(&mut self, default: usize) -> Result<usize> {
        let n = self.usize("samples", default)?;
        if n < 100 {
            return Err(Error::InvalidArgument(format!("samples must be at least 100, got {n}")));
        }
        Ok(n)
    }
}

#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub pass: bool,
    pub metrics: BTreeMap<String, f64>,
    pub notes: String,
}

impl Outcome {
    pub(crate) fn metric(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    /// Records mean, stderr and skip count of an estimate under `label`.
    pub(crate) fn estimate(&mut self, label: &str, e: &CharacteristicEstimate) {
        let r = radius_label(e.r);
        self.metric(format!("{label}@{r}"), e.mean);
        self.metric(format!("{label}@{r}.stderr"), e.stderr);
        self.metric(format!("{label}@{r}.skipped"), e.n_skipped as f64);
    }

    pub(crate) fn note(&mut self, text: &str) {
        if !self.notes.is_empty() {
            self.notes.push(' ');
        }
        self.notes.push_str(text);
    }
}

/// `1e3` rather than `1000` in metric names.
pub(crate) fn radius_label(r: f64) -> String {
    format!("{r:e}")
}

/// Largest value, treating NaN as a failure (infinite).
pub(crate) fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}
