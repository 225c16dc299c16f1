//! Overshear automorphisms of `D_p`, the involution, and words in them.
//!
//! `O_{f,g}` on the first side maps `(x, y, z)` to `(x, y', w)` with
//! `w = z e^{x f(x)} + x g(x)` and `y' = y + (p(w) - p(z)) / x`. The second
//! side is `I O_{f,g} I`, where `I` swaps `x` and `y`.
//!
//! A [`Word`] is read as a composition, so its leftmost letter is applied
//! last. Composing two overshears of the same side gives
//! `O_{f1,g1} o O_{f2,g2} = O_{f1+f2, g1 + g2 e^{x f1}}`.

use crate::entire::EntireExpr;
use crate::surface::{Danielewski, SurfacePoint};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Longest word accepted from the outside.
pub const MAX_WORD_LEN: usize = 64;
/// Tolerance for deciding that an overshear is the identity.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Membership tolerance for inputs of [`overshear_apply`] and [`word_apply`].
pub const INPUT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Overshear {
    pub f: EntireExpr,
    pub g: EntireExpr,
    pub side: Side,
}

/// `(e^u - 1) / u`, with `em(0) = 1`.
pub fn em(u: Complex64) -> Complex64 {
    if u.norm() < 1e-4 {
        Complex64::new(1.0, 0.0) + u * (0.5 + u * (1.0 / 6.0 + u / 24.0))
    } else {
        (u.exp() - 1.0) / u
    }
}

/// `e^{x f} g` as a tree.
fn twist(f: &EntireExpr, g: &EntireExpr) -> EntireExpr {
    EntireExpr::mul(g.clone(), EntireExpr::exp(EntireExpr::mul(EntireExpr::var(), f.clone())))
}

impl Overshear {
    pub fn new(f: EntireExpr, g: EntireExpr, side: Side) -> Self {
        Self { f, g, side }
    }

    pub fn identity(side: Side) -> Self {
        Self::new(EntireExpr::zero(), EntireExpr::zero(), side)
    }

    /// A shear: exponent `0`, translation `g`.
    pub fn shear(g: EntireExpr, side: Side) -> Self {
        Self::new(EntireExpr::zero(), g, side)
    }

    pub fn is_identity(&self) -> bool {
        self.f.is_zero(IDENTITY_TOL) && self.g.is_zero(IDENTITY_TOL)
    }

    pub fn with_side(&self, side: Side) -> Self {
        Self { side, ..self.clone() }
    }

    /// `O_{-f, -g e^{-x f}}` on the same side.
    pub fn inverse(&self) -> Self {
        let f = EntireExpr::neg(self.f.clone());
        let g = EntireExpr::neg(twist(&f, &self.g));
        Self::new(f, g, self.side)
    }

    /// Applies the map without checking that `p` lies on the surface.
    pub fn apply(&self, s: &Danielewski, p: &SurfacePoint) -> SurfacePoint {
        match self.side {
            Side::First => self.apply_first(s, p),
            Side::Second => self.apply_first(s, &p.swap()).swap(),
        }
    }

    fn apply_first(&self, s: &Danielewski, p: &SurfacePoint) -> SurfacePoint {
        let fx = self.f.eval(p.x);
        let gx = self.g.eval(p.x);
        let u = p.x * fx;
        let w = p.z * u.exp() + p.x * gx;
        // w - z = x q, so (p(w) - p(z)) / x = dp(w, z) q with no division by x
        let q = p.z * fx * em(u) + gx;
        let y = p.y + s.poly().divided_difference(w, p.z) * q;
        SurfacePoint::new(p.x, y, w)
    }
}

/// `a o b` (apply `b` first). Both must act on the same side.
pub fn compose_same_side(a: &Overshear, b: &Overshear) -> Result<Overshear> {
    if a.side != b.side {
        return Err(Error::SideMismatch);
    }
    let f = EntireExpr::add(a.f.clone(), b.f.clone());
    let g = EntireExpr::add(a.g.clone(), twist(&a.f, &b.g));
    Ok(Overshear::new(f, g, a.side))
}

/// The overshear obtained by applying `first` and then `then`:
/// `O_{f+h, g e^{x h} + k}` for `first = O_{f,g}`, `then = O_{h,k}`.
pub fn compose_then(first: &Overshear, then: &Overshear) -> Result<Overshear> {
    compose_same_side(then, first)
}

pub fn invert(o: &Overshear) -> Overshear {
    o.inverse()
}

pub fn involution_apply(p: &SurfacePoint) -> SurfacePoint {
    p.swap()
}

pub fn overshear_apply(s: &Danielewski, o: &Overshear, p: &SurfacePoint) -> Result<SurfacePoint> {
    if !s.contains(p, INPUT_TOL) {
        return Err(Error::OffSurface);
    }
    Ok(o.apply(s, p))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Letter {
    Overshear(Overshear),
    Involution,
}

impl Letter {
    pub fn apply(&self, s: &Danielewski, p: &SurfacePoint) -> SurfacePoint {
        match self {
            Letter::Overshear(o) => o.apply(s, p),
            Letter::Involution => p.swap(),
        }
    }

    pub fn inverse(&self) -> Letter {
        match self {
            Letter::Overshear(o) => Letter::Overshear(o.inverse()),
            Letter::Involution => Letter::Involution,
        }
    }
}

impl From<Overshear> for Letter {
    fn from(o: Overshear) -> Self {
        Letter::Overshear(o)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// Rejects words longer than [`MAX_WORD_LEN`].
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.len() > MAX_WORD_LEN {
            return Err(Error::WordTooLong(letters.len()));
        }
        Ok(Self { letters })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    fn from_vec(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word::from_vec(self.letters.iter().rev().map(Letter::inverse).collect())
    }

    /// `self o other`.
    pub fn compose(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word::from_vec(letters)
    }

    /// No involutions, no identity overshears, strictly alternating sides.
    pub fn is_normal_form(&self) -> bool {
        let mut prev: Option<Side> = None;
        for l in &self.letters {
            match l {
                Letter::Involution => return false,
                Letter::Overshear(o) => {
                    if o.is_identity() || prev == Some(o.side) {
                        return false;
                    }
                    prev = Some(o.side);
                }
            }
        }
        true
    }

    /// Applies the word without checking the input point.
    pub fn apply(&self, s: &Danielewski, p: &SurfacePoint) -> SurfacePoint {
        self.letters.iter().rev().fold(*p, |q, l| l.apply(s, &q))
    }

    pub fn from_json(text: &str) -> Result<Word> {
        let raw: WordJson = serde_json::from_str(text).map_err(|e| Error::WordJson(e.to_string()))?;
        let mut letters = Vec::with_capacity(raw.letters.len());
        for l in raw.letters {
            letters.push(match l {
                LetterJson::Involution => Letter::Involution,
                LetterJson::Overshear { side, f, g } => {
                    Letter::Overshear(Overshear::new(f.parse()?, g.parse()?, side))
                }
            });
        }
        Word::new(letters)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("word serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let letters = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Involution => LetterJson::Involution,
                Letter::Overshear(o) => {
                    LetterJson::Overshear { side: o.side, f: o.f.to_string(), g: o.g.to_string() }
                }
            })
            .collect();
        serde_json::to_value(WordJson { letters }).expect("word serializes")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Involution => "I".to_string(),
                Letter::Overshear(o) => {
                    let side = if o.side == Side::First { 1 } else { 2 };
                    format!("O{side}[{}, {}]", o.f, o.g)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" . "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum LetterJson {
    Overshear { side: Side, f: String, g: String },
    Involution,
}

#[derive(Serialize, Deserialize)]
struct WordJson {
    letters: Vec<LetterJson>,
}

/// Applies `w` to `p`; the leftmost letter acts last.
pub fn word_apply(s: &Danielewski, w: &Word, p: &SurfacePoint) -> Result<SurfacePoint> {
    if !s.contains(p, INPUT_TOL) {
        return Err(Error::OffSurface);
    }
    Ok(w.apply(s, p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedWord {
    /// Alternating overshears; no involutions.
    pub word: Word,
    /// Whether a single `I` remains on the right: the element is `word o I`.
    pub trailing_involution: bool,
}

impl ReducedWord {
    /// The reduced element as one word, with the trailing `I` spelled out.
    pub fn to_word(&self) -> Word {
        let mut letters = self.word.letters.clone();
        if self.trailing_involution {
            letters.push(Letter::Involution);
        }
        Word::from_vec(letters)
    }
}

/// Pushes `o` onto an alternating stack, merging with the top if the sides agree.
fn push_merge(stack: &mut Vec<Overshear>, o: Overshear) {
    if o.is_identity() {
        return;
    }
    match stack.last() {
        Some(top) if top.side == o.side => {
            let merged = compose_same_side(top, &o).expect("same side");
            stack.pop();
            if !merged.is_identity() {
                stack.push(merged);
            }
        }
        _ => stack.push(o),
    }
}

/// Moves every involution to the right end (`I o O` on one side equals `O` on
/// the other side followed by `I`), cancels pairs of them, merges neighbouring
/// same-side overshears and drops identities.
pub fn word_reduce(w: &Word) -> ReducedWord {
    let mut stack: Vec<Overshear> = Vec::new();
    let mut odd = false;
    for l in &w.letters {
        match l {
            Letter::Involution => odd = !odd,
            Letter::Overshear(o) => {
                let o = if odd { o.with_side(o.side.flip()) } else { o.clone() };
                push_merge(&mut stack, o);
            }
        }
    }
    ReducedWord {
        word: Word::from_vec(stack.into_iter().map(Letter::Overshear).collect()),
        trailing_involution: odd,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalShape {
    Empty,
    Involution,
    /// `(I, O_1, I, O_2, ..., I, O_m)` with first-side, non-identity `O_i`.
    Alternating { m: usize },
    /// A single first-side overshear, which no conjugation removes.
    SingleOvershear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub normal: Word,
    /// Witness with `normal = conjugator^{-1} o w o conjugator`.
    pub conjugator: Word,
    pub shape: NormalShape,
}

/// Rewrites with only first-side overshears and involutions, cancelling `I I`,
/// merging adjacent overshears and dropping identities.
fn tighten(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    let push = |out: &mut Vec<Letter>, l: Letter| match (out.last(), l) {
        (Some(Letter::Involution), Letter::Involution) => {
            out.pop();
        }
        (_, Letter::Overshear(o)) if o.is_identity() => {}
        (Some(Letter::Overshear(top)), Letter::Overshear(o)) => {
            let merged = compose_same_side(top, &o).expect("first side");
            out.pop();
            if !merged.is_identity() {
                out.push(Letter::Overshear(merged));
            }
        }
        (_, l) => out.push(l),
    };
    for l in letters {
        match l {
            Letter::Involution => push(&mut out, Letter::Involution),
            Letter::Overshear(o) if o.side == Side::First => push(&mut out, Letter::Overshear(o.clone())),
            Letter::Overshear(o) => {
                push(&mut out, Letter::Involution);
                push(&mut out, Letter::Overshear(o.with_side(Side::First)));
                push(&mut out, Letter::Involution);
            }
        }
    }
    out
}

/// Conjugates `w` into the shape `(I, O_1, I, O_2, ..., I, O_m)`.
///
/// After tightening, the letters alternate between `I` and first-side
/// overshears, so only the first and last letters matter:
/// `I ... O` is done; `I ... I` and `O ... I` are conjugated by `I`;
/// `O_1 ... O_k` with `k > 1` letters is conjugated by `O_1`, which merges
/// `O_k O_1` at the right end. A lone overshear is returned as is.
pub fn conjugate_normal_form(w: &Word) -> NormalForm {
    let mut current = tighten(&w.letters);
    let mut conjugator: Vec<Letter> = Vec::new();
    loop {
        let shape = match (current.first(), current.last()) {
            (None, _) => Some(NormalShape::Empty),
            (Some(Letter::Involution), _) if current.len() == 1 => Some(NormalShape::Involution),
            (Some(Letter::Involution), Some(Letter::Overshear(_))) => {
                Some(NormalShape::Alternating { m: current.len() / 2 })
            }
            (Some(Letter::Overshear(_)), _) if current.len() == 1 => Some(NormalShape::SingleOvershear),
            _ => None,
        };
        if let Some(shape) = shape {
            return NormalForm {
                normal: Word::from_vec(current),
                conjugator: Word::from_vec(conjugator),
                shape,
            };
        }
        let d = match (&current[0], current.last()) {
            (Letter::Overshear(o), Some(Letter::Overshear(_))) => Letter::Overshear(o.clone()),
            _ => Letter::Involution,
        };
        let mut next = vec![d.inverse()];
        next.extend(current);
        next.push(d.clone());
        current = tighten(&next);
        conjugator.push(d);
    }
}
