//! Partial symplectic quasi-states evaluated on pullbacks `f∘Φ`.
//!
//! Every state implemented here is atomic on the pullback class: it is
//! determined by finitely many weighted values `yᵢ` of the moment map and
//! acts by `ζ(f∘Φ) = Σ wᵢ f(yᵢ)`. The two-point average `½(f(y₁) + f(y₂))`
//! is the main example. Heaviness tags are computed relative to a generated
//! test class of profiles; negative tags carry genuine counterexamples.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::displace::psi_displaces_slab;
use crate::error::{Error, Result};
use crate::moment::{JField, MomentSystem};
use crate::poly::{Polynomial, Term};
use crate::sphere::{poisson_bracket, seeded_rng, Ambient, ProductPoint, ScalarField};

/// Residual threshold shared by the axiom checks.
pub const AXIOM_TOL: f64 = 1e-9;

/// Number of bump widths in the brute-force cross-check of `τ`.
pub const TAU_BRUTE_FORCE_WIDTHS: usize = 1000;

/// Largest `j` of the neighbourhood radii `2⁻ʲ` in pseudoheaviness tests.
pub const PSEUDOHEAVY_MAX_J: u32 = 20;

/// Note attached to every heaviness verdict.
pub const CLASS_NOTE: &str = "relative to pullback class";

/// Profile variables for two-dimensional moment maps.
pub const PLANE_VARS: [&str; 2] = ["a", "b"];
/// Profile variable for one-dimensional moment maps.
pub const LINE_VARS: [&str; 1] = ["c"];

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// A closed piece of `ℝᵏ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Point { at: Vec<f64> },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Point { at } => at.len(),
            Shape::Box { lo, .. } => lo.len(),
            Shape::Ball { center, .. } => center.len(),
        }
    }

    pub fn distance(&self, y: &[f64]) -> f64 {
        match self {
            Shape::Point { at } => {
                let d: Vec<f64> = at.iter().zip(y).map(|(p, q)| q - p).collect();
                norm(&d)
            }
            Shape::Box { lo, hi } => {
                let d: Vec<f64> = y
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&v, (&l, &h))| (l - v).max(0.0).max(v - h))
                    .collect();
                norm(&d)
            }
            Shape::Ball { center, radius } => {
                let d: Vec<f64> = center.iter().zip(y).map(|(p, q)| q - p).collect();
                (norm(&d) - radius).max(0.0)
            }
        }
    }

    fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Shape::Point { at } => (at.clone(), at.clone()),
            Shape::Box { lo, hi } => (lo.clone(), hi.clone()),
            Shape::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            Shape::Point { at } => write!(f, "point({})", list(at)),
            Shape::Box { lo, hi } => {
                let parts: Vec<String> = lo.iter().zip(hi).map(|(l, h)| format!("{l}..{h}")).collect();
                write!(f, "box({})", parts.join(", "))
            }
            Shape::Ball { center, radius } => write!(f, "ball({radius}; {})", list(center)),
        }
    }
}

/// A finite union of points, closed boxes and closed balls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub shapes: Vec<Shape>,
}

impl Region {
    pub fn new(shapes: Vec<Shape>) -> Result<Self> {
        let dim = shapes.first().map(Shape::dim).ok_or_else(|| Error::Parse("empty region".into()))?;
        for s in &shapes {
            let ok = match s {
                Shape::Point { at } => at.iter().all(|x| x.is_finite()),
                Shape::Box { lo, hi } => lo.len() == hi.len() && lo.iter().zip(hi).all(|(l, h)| l <= h),
                Shape::Ball { center, radius } => {
                    center.iter().all(|x| x.is_finite()) && *radius >= 0.0 && radius.is_finite()
                }
            };
            if !ok || s.dim() != dim || dim == 0 {
                return Err(Error::Parse(format!("malformed shape {s}")));
            }
        }
        Ok(Region { shapes })
    }

    /// Region consisting of finitely many points.
    pub fn points(points: &[Vec<f64>]) -> Result<Self> {
        Region::new(points.iter().map(|p| Shape::Point { at: p.clone() }).collect())
    }

    /// Parses `shape (';' shape)*` with shapes `point(y1, .., yk)`,
    /// `box(lo1..hi1, .., lok..hik)` and `ball(r; y1, .., yk)`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("{m} in region {text:?}"));
        let num = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|_| bad(&format!("bad number {:?}", s.trim())))
        };
        let mut shapes = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| bad("expected '('"))?;
            let close = rest.find(')').ok_or_else(|| bad("expected ')'"))?;
            if close < open {
                return Err(bad("unbalanced parentheses"));
            }
            let name = rest[..open].trim();
            let body = &rest[open + 1..close];
            let shape = match name {
                "point" => Shape::Point {
                    at: body.split(',').map(num).collect::<Result<_>>()?,
                },
                "box" => {
                    let mut lo = Vec::new();
                    let mut hi = Vec::new();
                    for part in body.split(',') {
                        let (l, h) = part.split_once("..").ok_or_else(|| bad("expected lo..hi"))?;
                        lo.push(num(l)?);
                        hi.push(num(h)?);
                    }
                    Shape::Box { lo, hi }
                }
                "ball" => {
                    let (r, c) = body.split_once(';').ok_or_else(|| bad("expected radius;"))?;
                    Shape::Ball {
                        center: c.split(',').map(num).collect::<Result<_>>()?,
                        radius: num(r)?,
                    }
                }
                other => return Err(bad(&format!("unknown shape {other:?}"))),
            };
            shapes.push(shape);
            rest = rest[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(';') {
                rest = r.trim_start();
            } else if !rest.is_empty() {
                return Err(bad("expected ';' between shapes"));
            }
        }
        Region::new(shapes)
    }

    pub fn dim(&self) -> usize {
        self.shapes[0].dim()
    }

    pub fn distance(&self, y: &[f64]) -> f64 {
        self.shapes.iter().map(|s| s.distance(y)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.distance(y) == 0.0
    }

    /// Coordinate range of the first variable.
    fn first_coordinate_range(&self) -> (f64, f64) {
        self.shapes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            let (l, h) = s.bounds();
            (lo.min(l[0]), hi.max(h[0]))
        })
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.shapes.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// An open box `Π (loᵢ, hiᵢ)`; element of a cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl OpenBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() || lo.iter().zip(&hi).any(|(l, h)| !(l < h)) {
            return Err(Error::Parameter(format!("degenerate open box {lo:?} .. {hi:?}")));
        }
        Ok(OpenBox { lo, hi })
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        y.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&v, (&l, &h))| l < v && v < h)
    }

    pub fn closure_contains(&self, y: &[f64]) -> bool {
        y.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&v, (&l, &h))| l <= v && v <= h)
    }

    /// `log` of the smooth bump `Π exp(−1/(tᵢ(1 − tᵢ)))`, `−∞` off the box.
    fn log_weight(&self, y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (&v, (&l, &h)) in y.iter().zip(self.lo.iter().zip(&self.hi)) {
            let t = (v - l) / (h - l);
            if !(t > 0.0 && t < 1.0) {
                return f64::NEG_INFINITY;
            }
            acc -= 1.0 / (t * (1.0 - t));
        }
        acc
    }
}

/// Partition of unity `ρᵢ = wᵢ / Σ wₖ` subordinate to a cover by open boxes;
/// `None` where no box covers `y`.
pub fn partition_of_unity(cover: &[OpenBox], y: &[f64]) -> Option<Vec<f64>> {
    let logs: Vec<f64> = cover.iter().map(|b| b.log_weight(y)).collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return None;
    }
    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    Some(w.into_iter().map(|x| x / total).collect())
}

/// `S(t) = 6t⁵ − 15t⁴ + 10t³` on `[0, 1]`.
pub fn smoothstep5(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

/// A function `f : ℝᵏ → ℝ` applied to moment values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Constant { value: f64 },
    Polynomial { poly: Polynomial },
    /// Equal to 1 on `region`, `1 − S(dist/width)` nearby, 0 at distance
    /// `≥ width`.
    Bump { region: Region, width: f64 },
    Scaled { factor: f64, inner: Box<Profile> },
    Sum { left: Box<Profile>, right: Box<Profile> },
    Product { left: Box<Profile>, right: Box<Profile> },
    /// `ρ_index · inner` for the partition of unity of `cover`; zero where
    /// `inner` vanishes.
    PartitionTerm {
        cover: Vec<OpenBox>,
        index: usize,
        inner: Box<Profile>,
    },
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    pub fn bump(region: Region, width: f64) -> Self {
        Profile::Bump { region, width }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Profile::Scaled {
            factor,
            inner: Box::new(self),
        }
    }

    pub fn plus(self, other: Profile) -> Self {
        Profile::Sum {
            left: Box::new(self),
            right: Box::new(other),
        }
    }

    pub fn times(self, other: Profile) -> Self {
        Profile::Product {
            left: Box::new(self),
            right: Box::new(other),
        }
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        match self {
            Profile::Constant { value } => *value,
            Profile::Polynomial { poly } => poly.eval(y),
            Profile::Bump { region, width } => {
                let d = region.distance(y);
                if d == 0.0 {
                    1.0
                } else if d >= *width {
                    0.0
                } else {
                    1.0 - smoothstep5(d / width)
                }
            }
            Profile::Scaled { factor, inner } => factor * inner.eval(y),
            Profile::Sum { left, right } => left.eval(y) + right.eval(y),
            Profile::Product { left, right } => left.eval(y) * right.eval(y),
            Profile::PartitionTerm { cover, index, inner } => {
                let h = inner.eval(y);
                if h == 0.0 {
                    return 0.0;
                }
                match partition_of_unity(cover, y) {
                    Some(rho) => rho[*index] * h,
                    None => f64::NAN,
                }
            }
        }
    }

    /// Interval containing the first coordinate of every point where the
    /// profile may be non-zero; `None` when no bound is known. An empty
    /// support is reported as `(∞, −∞)`.
    pub fn first_coordinate_support(&self) -> Option<(f64, f64)> {
        const EMPTY: (f64, f64) = (f64::INFINITY, f64::NEG_INFINITY);
        match self {
            Profile::Constant { value } => (*value == 0.0).then_some(EMPTY),
            Profile::Polynomial { poly } => poly.is_zero().then_some(EMPTY),
            Profile::Bump { region, width } => {
                let (lo, hi) = region.first_coordinate_range();
                Some((lo - width, hi + width))
            }
            Profile::Scaled { factor, inner } => {
                if *factor == 0.0 {
                    Some(EMPTY)
                } else {
                    inner.first_coordinate_support()
                }
            }
            Profile::Sum { left, right } => {
                let (l, r) = (left.first_coordinate_support()?, right.first_coordinate_support()?);
                Some((l.0.min(r.0), l.1.max(r.1)))
            }
            Profile::Product { left, right } => {
                match (left.first_coordinate_support(), right.first_coordinate_support()) {
                    (Some(l), Some(r)) => Some((l.0.max(r.0), l.1.min(r.1))),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (None, None) => None,
                }
            }
            Profile::PartitionTerm { cover, index, inner } => {
                let b = &cover[*index];
                let own = (b.lo[0], b.hi[0]);
                Some(match inner.first_coordinate_support() {
                    Some(r) => (own.0.max(r.0), own.1.min(r.1)),
                    None => own,
                })
            }
        }
    }

    /// The profile `y ↦ f(−y₁, y₂, ..)` for polynomials and bumps over boxes,
    /// balls and points.
    pub fn reflect_first(&self) -> Option<Profile> {
        match self {
            Profile::Constant { .. } => Some(self.clone()),
            Profile::Polynomial { poly } => {
                let vars: Vec<&str> = poly.vars().iter().map(String::as_str).collect();
                let terms = poly
                    .terms()
                    .iter()
                    .map(|t| Term {
                        coef: if t.powers[0] % 2 == 1 { -t.coef } else { t.coef },
                        powers: t.powers.clone(),
                    })
                    .collect();
                Some(Profile::Polynomial {
                    poly: Polynomial::new(&vars, terms).ok()?,
                })
            }
            Profile::Bump { region, width } => {
                let flip = |v: &[f64]| {
                    let mut v = v.to_vec();
                    v[0] = -v[0];
                    v
                };
                let shapes = region
                    .shapes
                    .iter()
                    .map(|s| match s {
                        Shape::Point { at } => Shape::Point { at: flip(at) },
                        Shape::Ball { center, radius } => Shape::Ball {
                            center: flip(center),
                            radius: *radius,
                        },
                        Shape::Box { lo, hi } => {
                            let mut l = lo.clone();
                            let mut h = hi.clone();
                            l[0] = -hi[0];
                            h[0] = -lo[0];
                            Shape::Box { lo: l, hi: h }
                        }
                    })
                    .collect();
                Some(Profile::Bump {
                    region: Region { shapes },
                    width: *width,
                })
            }
            Profile::Scaled { factor, inner } => Some(inner.reflect_first()?.scaled(*factor)),
            Profile::Sum { left, right } => Some(left.reflect_first()?.plus(right.reflect_first()?)),
            Profile::Product { left, right } => Some(left.reflect_first()?.times(right.reflect_first()?)),
            Profile::PartitionTerm { .. } => None,
        }
    }
}

/// The moment map a profile is pulled back by.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseMap {
    /// `Φ_{R,f} = (J_R, H_f)` on `S² × S²`.
    System { system: MomentSystem },
    /// A moment map known only through its values (e.g. a Morse function on
    /// a surface).
    Abstract { label: String, dim: usize },
}

impl BaseMap {
    pub fn dim(&self) -> usize {
        match self {
            BaseMap::System { .. } => 2,
            BaseMap::Abstract { dim, .. } => *dim,
        }
    }
}

/// `profile ∘ base`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullbackFunction {
    pub base: BaseMap,
    pub profile: Profile,
}

impl PullbackFunction {
    pub fn new(base: BaseMap, profile: Profile) -> Self {
        PullbackFunction { base, profile }
    }

    /// Value at a point of `S² × S²`; `None` for abstract bases.
    pub fn eval_at(&self, p: &ProductPoint) -> Option<f64> {
        match &self.base {
            BaseMap::System { system } => {
                let v = system.phi(p);
                Some(self.profile.eval(&[v.a, v.b]))
            }
            BaseMap::Abstract { .. } => None,
        }
    }
}

/// A support value with its weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atom {
    pub point: Vec<f64>,
    pub weight: f64,
}

/// A quasi-state acting on pullbacks as a finite weighted sum of point
/// evaluations.
pub trait QuasiState {
    fn atoms(&self) -> Vec<Atom>;

    fn dim(&self) -> usize;

    fn eval(&self, f: &Profile) -> f64 {
        self.atoms().iter().map(|a| a.weight * f.eval(&a.point)).sum()
    }
}

/// `ζ(f∘Φ) = ½(f(y₁) + f(y₂))` with `y₁ ≠ y₂`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragedQuasiState {
    y1: Vec<f64>,
    y2: Vec<f64>,
}

impl AveragedQuasiState {
    pub fn new(y1: Vec<f64>, y2: Vec<f64>) -> Result<Self> {
        if y1.is_empty() || y1.len() != y2.len() {
            return Err(Error::Parameter(format!(
                "support points {y1:?}, {y2:?} must have the same positive dimension"
            )));
        }
        if y1.iter().chain(&y2).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("support points must be finite".into()));
        }
        if y1 == y2 {
            return Err(Error::Parameter(format!("support points coincide at {y1:?}")));
        }
        Ok(AveragedQuasiState { y1, y2 })
    }

    pub fn supports(&self) -> (&[f64], &[f64]) {
        (&self.y1, &self.y2)
    }
}

impl QuasiState for AveragedQuasiState {
    fn atoms(&self) -> Vec<Atom> {
        vec![
            Atom { point: self.y1.clone(), weight: 0.5 },
            Atom { point: self.y2.clone(), weight: 0.5 },
        ]
    }

    fn dim(&self) -> usize {
        self.y1.len()
    }
}

/// `ζ(f∘Φ) = f(y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointState {
    y: Vec<f64>,
}

impl PointState {
    pub fn new(y: Vec<f64>) -> Result<Self> {
        if y.is_empty() || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("bad support point {y:?}")));
        }
        Ok(PointState { y })
    }
}

impl QuasiState for PointState {
    fn atoms(&self) -> Vec<Atom> {
        vec![Atom { point: self.y.clone(), weight: 1.0 }]
    }

    fn dim(&self) -> usize {
        self.y.len()
    }
}

/// `½(ζ₁ + ζ₂)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedState {
    atoms: Vec<Atom>,
    dim: usize,
}

impl QuasiState for MixedState {
    fn atoms(&self) -> Vec<Atom> {
        self.atoms.clone()
    }

    fn dim(&self) -> usize {
        self.dim
    }
}

pub fn average(z1: &dyn QuasiState, z2: &dyn QuasiState) -> Result<MixedState> {
    if z1.dim() != z2.dim() {
        return Err(Error::Parameter(format!(
            "cannot average states on ℝ^{} and ℝ^{}",
            z1.dim(),
            z2.dim()
        )));
    }
    let mut atoms: Vec<Atom> = Vec::new();
    for a in z1.atoms().into_iter().chain(z2.atoms()) {
        let w = 0.5 * a.weight;
        match atoms.iter_mut().find(|b| b.point == a.point) {
            Some(b) => b.weight += w,
            None => atoms.push(Atom { point: a.point, weight: w }),
        }
    }
    Ok(MixedState { atoms, dim: z1.dim() })
}

pub fn zeta_eval(zs: &dyn QuasiState, h: &PullbackFunction) -> f64 {
    zs.eval(&h.profile)
}

/// The one-dimensional averaged state with supports `c3 < c4`.
pub fn genus2_instance(c3: f64, c4: f64) -> Result<AveragedQuasiState> {
    if !(c3 < c4) {
        return Err(Error::Parameter(format!(
            "critical values must satisfy c3 < c4, got {c3}, {c4}"
        )));
    }
    AveragedQuasiState::new(vec![c3], vec![c4])
}

/// The abstract base of [`genus2_instance`].
pub fn genus2_base() -> BaseMap {
    BaseMap::Abstract {
        label: "F_P".into(),
        dim: 1,
    }
}

fn random_polynomial<R: Rng>(rng: &mut R, vars: &[&str], max_degree: u32, n_terms: usize) -> Polynomial {
    let terms = (0..n_terms)
        .map(|_| {
            let mut budget = rng.random_range(0..=max_degree);
            let powers = vars
                .iter()
                .map(|_| {
                    let k = rng.random_range(0..=budget);
                    budget -= k;
                    k
                })
                .collect();
            Term {
                coef: rng.random_range(-1.0..1.0),
                powers,
            }
        })
        .collect();
    Polynomial::new(vars, terms).expect("generated polynomial")
}

fn random_region<R: Rng>(rng: &mut R, lo: &[f64], hi: &[f64]) -> Region {
    let pick = |rng: &mut R| -> Vec<f64> { lo.iter().zip(hi).map(|(l, h)| rng.random_range(*l..*h)).collect() };
    let shape = match rng.random_range(0..3) {
        0 => Shape::Point { at: pick(rng) },
        1 => {
            let c = pick(rng);
            let r: Vec<f64> = c.iter().map(|_| rng.random_range(0.0..0.3)).collect();
            Shape::Box {
                lo: c.iter().zip(&r).map(|(c, r)| c - r).collect(),
                hi: c.iter().zip(&r).map(|(c, r)| c + r).collect(),
            }
        }
        _ => Shape::Ball {
            center: pick(rng),
            radius: rng.random_range(0.0..0.3),
        },
    };
    Region { shapes: vec![shape] }
}

/// Deterministic family of `n` profiles on `ℝᵏ` (`k ∈ {1, 2}`): polynomials
/// of degree ≤ 6, scaled bumps over `[lo, hi]`, their sums and products, and
/// (for `k = 2`) bumps supported in the slab `a ∈ [1/4, 1]`.
pub fn profile_family(dim: usize, n: usize, seed: u64, lo: &[f64], hi: &[f64]) -> Result<Vec<Profile>> {
    let vars: &[&str] = match dim {
        1 => &LINE_VARS,
        2 => &PLANE_VARS,
        _ => return Err(Error::Parameter(format!("profiles live on ℝ¹ or ℝ², not ℝ^{dim}"))),
    };
    if lo.len() != dim || hi.len() != dim || lo.iter().zip(hi).any(|(l, h)| !(l < h)) {
        return Err(Error::Parameter("bad profile bounding box".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let poly = |rng: &mut rand_chacha::ChaCha8Rng| Profile::Polynomial {
            poly: random_polynomial(rng, vars, 6, 6),
        };
        let bump = |rng: &mut rand_chacha::ChaCha8Rng| {
            let width = rng.random_range(0.05..0.8);
            let c = rng.random_range(-1.0..1.0);
            Profile::bump(random_region(rng, lo, hi), width).scaled(c)
        };
        let p = match i % 10 {
            0..=4 => poly(&mut rng),
            5..=6 => bump(&mut rng),
            7 => poly(&mut rng).plus(bump(&mut rng)),
            8 => poly(&mut rng).times(bump(&mut rng)),
            _ if dim == 2 => {
                let a0 = rng.random_range(0.45..0.8);
                let b0 = rng.random_range(lo[1]..hi[1]);
                let region = Region {
                    shapes: vec![Shape::Box {
                        lo: vec![a0 - 0.1, b0 - 0.2],
                        hi: vec![a0 + 0.1, b0 + 0.2],
                    }],
                };
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                Profile::bump(region, 0.1).scaled(sign * rng.random_range(0.1..2.0))
            }
            _ => bump(&mut rng),
        };
        out.push(p);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Normalization,
    Stability,
    SemiHomogeneity,
    QuasiSubadditivity,
    Vanishing,
    HamiltonianInvariance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    pub worst_residual: f64,
    pub tested: usize,
    pub skipped: usize,
    pub notes: Vec<String>,
}

impl AxiomCheck {
    fn new(axiom: Axiom) -> Self {
        AxiomCheck {
            axiom,
            passed: true,
            worst_residual: 0.0,
            tested: 0,
            skipped: 0,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, residual: f64) {
        self.tested += 1;
        if !(residual <= AXIOM_TOL) {
            self.passed = false;
        }
        if residual.is_nan() {
            self.worst_residual = f64::NAN;
        } else if !self.worst_residual.is_nan() {
            self.worst_residual = self.worst_residual.max(residual);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    pub all_passed: bool,
}

impl AxiomReport {
    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("every axiom is reported")
    }

    pub fn failed(&self) -> Vec<Axiom> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.axiom).collect()
    }
}

const NORMALIZATION_CONSTANTS: [f64; 6] = [-2.0, -0.5, 0.0, 1.0, 3.75, 10.0];
const HOMOGENEITY_FACTORS: [f64; 4] = [0.25, 0.5, 2.0, 3.5];
const BRACKET_POINTS: usize = 64;
const BRACKET_TOL: f64 = 1e-8;

fn bracket_magnitude(f: &PullbackFunction, g: &PullbackFunction, seed: u64) -> Result<Option<f64>> {
    let (BaseMap::System { system: sf }, BaseMap::System { system: sg }) = (&f.base, &g.base) else {
        return Ok(None);
    };
    let field = |sys: &MomentSystem, prof: &Profile| {
        let sys = sys.clone();
        let prof = prof.clone();
        move |x: &Ambient| {
            let j = JField::value(&sys.j_field(), x);
            let h = sys.h_field().value(x);
            prof.eval(&[j, h])
        }
    };
    let ff = field(sf, &f.profile);
    let gg = field(sg, &g.profile);
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..BRACKET_POINTS {
        let p = ProductPoint::random(&mut rng);
        worst = worst.max(poisson_bracket(&ff, &gg, &p, sf.r)?.abs());
    }
    Ok(Some(worst))
}

/// Checks the quasi-state axioms for `zeta` on `family`.
///
/// `samples` are moment values over which `min`/`max` in the stability
/// sandwich are taken; include the state's support values. `pairs` index
/// pairs of `family` tested for quasi-subadditivity. Pairs over the same base
/// commute; pairs over different systems are gated by a sampled Poisson
/// bracket and rejected with [`Error::NonCommuting`]; pairs over unrelated
/// abstract bases are skipped.
pub fn axiom_suite<Z>(
    zeta: Z,
    family: &[PullbackFunction],
    pairs: &[(usize, usize)],
    samples: &[Vec<f64>],
) -> Result<AxiomReport>
where
    Z: Fn(&Profile) -> f64,
{
    if samples.is_empty() {
        return Err(Error::Parameter("stability needs at least one sample value".into()));
    }
    for &(i, j) in pairs {
        if i >= family.len() || j >= family.len() {
            return Err(Error::Parameter(format!("pair ({i}, {j}) out of range")));
        }
    }

    let mut normalization = AxiomCheck::new(Axiom::Normalization);
    for c in NORMALIZATION_CONSTANTS {
        normalization.record((zeta(&Profile::constant(c)) - c).abs());
    }

    let mut stability = AxiomCheck::new(Axiom::Stability);
    for w in family.windows(2) {
        let (h1, h2) = (&w[0].profile, &w[1].profile);
        let diffs: Vec<f64> = samples.iter().map(|y| h1.eval(y) - h2.eval(y)).collect();
        let lo = diffs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let d = zeta(h1) - zeta(h2);
        stability.record((lo - d).max(d - hi).max(0.0));
    }

    let mut homogeneity = AxiomCheck::new(Axiom::SemiHomogeneity);
    for h in family {
        let base = zeta(&h.profile);
        for s in HOMOGENEITY_FACTORS {
            let scaled = zeta(&h.profile.clone().scaled(s));
            homogeneity.record((scaled - s * base).abs() / (1.0 + base.abs()));
        }
    }

    let mut subadditivity = AxiomCheck::new(Axiom::QuasiSubadditivity);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let (f, g) = (&family[i], &family[j]);
        if f.base != g.base {
            match bracket_magnitude(f, g, k as u64)? {
                Some(m) if m > BRACKET_TOL => return Err(Error::NonCommuting { magnitude: m }),
                Some(_) => {}
                None => {
                    subadditivity.skipped += 1;
                    continue;
                }
            }
        }
        let sum = f.profile.clone().plus(g.profile.clone());
        subadditivity.record((zeta(&sum) - zeta(&f.profile) - zeta(&g.profile)).max(0.0));
    }
    if subadditivity.skipped > 0 {
        subadditivity
            .notes
            .push(format!("{} pairs over unrelated abstract bases skipped", subadditivity.skipped));
    }

    let mut vanishing = AxiomCheck::new(Axiom::Vanishing);
    for h in family {
        let certified = matches!(h.base, BaseMap::System { .. })
            && h.profile
                .first_coordinate_support()
                .is_some_and(|(lo, hi)| lo > hi || psi_displaces_slab(lo, hi));
        if certified {
            vanishing.record(zeta(&h.profile).abs());
        } else {
            vanishing.skipped += 1;
        }
    }
    vanishing.notes.push(format!(
        "{} profiles without a displaceability certificate for their support skipped",
        vanishing.skipped
    ));

    let mut invariance = AxiomCheck::new(Axiom::HamiltonianInvariance);
    let systems: Vec<&MomentSystem> = family
        .iter()
        .filter_map(|h| match &h.base {
            BaseMap::System { system } => Some(system),
            _ => None,
        })
        .collect();
    if let Some(sys) = systems.first() {
        let mut rng = seeded_rng(0x5eed);
        let mut drift = 0.0f64;
        for _ in 0..64 {
            let p = ProductPoint::random(&mut rng);
            let t: f64 = rng.random_range(-10.0..10.0);
            drift = drift.max(sys.phi(&p.rotate_z(t)).distance(&sys.phi(&p)));
        }
        invariance.record(drift);
        invariance.notes.push(format!("J_R-flow moves moment values by at most {drift:e}"));
        let a_only = a_only_profiles(16, 0xa11);
        for g in &a_only {
            let reflected = g.reflect_first().expect("a-only profiles reflect");
            invariance.record((zeta(g) - zeta(&reflected)).abs());
        }
        invariance
            .notes
            .push(format!("{} profiles of J_R compared with their ψ-pullbacks", a_only.len()));
    } else {
        invariance.skipped += 1;
        invariance.notes.push("no explicit Hamiltonian diffeomorphisms for abstract bases".into());
    }

    let checks = vec![normalization, stability, homogeneity, subadditivity, vanishing, invariance];
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(AxiomReport { checks, all_passed })
}

/// Profiles on `ℝ²` depending only on the first coordinate.
fn a_only_profiles(n: usize, seed: u64) -> Vec<Profile> {
    let mut rng = seeded_rng(seed);
    (0..n)
        .map(|i| {
            if i % 2 == 0 {
                let terms = (0..4)
                    .map(|_| Term {
                        coef: rng.random_range(-1.0..1.0),
                        powers: vec![rng.random_range(0..=6), 0],
                    })
                    .collect();
                Profile::Polynomial {
                    poly: Polynomial::new(&PLANE_VARS, terms).expect("a-only polynomial"),
                }
            } else {
                let a0 = rng.random_range(-1.5..1.5);
                let half = rng.random_range(0.05..0.5);
                let region = Region {
                    shapes: vec![Shape::Box {
                        lo: vec![a0 - half, f64::NEG_INFINITY],
                        hi: vec![a0 + half, f64::INFINITY],
                    }],
                };
                Profile::bump(region, rng.random_range(0.05..0.5))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiMeasureValue {
    pub value: f64,
    /// Infimum over [`TAU_BRUTE_FORCE_WIDTHS`] bump widths.
    pub brute_force: f64,
    /// A bump equal to 1 on `K` realizing `value`.
    pub realizing: Profile,
}

fn atom_distances(zs: &dyn QuasiState, k: &Region) -> Vec<(Atom, f64)> {
    zs.atoms()
        .into_iter()
        .map(|a| {
            let d = k.distance(&a.point);
            (a, d)
        })
        .collect()
}

/// `τ_ζ(K) = inf {ζ(f) : f ∈ [0, 1], f ≡ 1 on K}` over plateau bumps; for
/// atomic states this is the weight of the atoms in `K`.
pub fn tau(zs: &dyn QuasiState, k: &Region) -> Result<QuasiMeasureValue> {
    if k.dim() != zs.dim() {
        return Err(Error::Parse(format!(
            "subset of ℝ^{} for a state on ℝ^{}",
            k.dim(),
            zs.dim()
        )));
    }
    let ad = atom_distances(zs, k);
    let value = ad.iter().filter(|(_, d)| *d == 0.0).fold(0.0, |acc, (a, _)| acc + a.weight);
    let gap = ad.iter().filter(|(_, d)| *d > 0.0).map(|(_, d)| *d).fold(f64::INFINITY, f64::min);
    let width = if gap.is_finite() { 0.5 * gap } else { 1.0 };
    let realizing = Profile::bump(k.clone(), width);

    let brute_force = (0..TAU_BRUTE_FORCE_WIDTHS)
        .map(|j| {
            let eps = 10f64.powf(1.0 - 13.0 * j as f64 / (TAU_BRUTE_FORCE_WIDTHS - 1) as f64);
            zs.eval(&Profile::bump(k.clone(), eps))
        })
        .chain(std::iter::once(zs.eval(&realizing)))
        .fold(f64::INFINITY, f64::min);
    if (brute_force - value).abs() > 1e-6 {
        return Err(Error::NonConvergence {
            what: format!("τ cross-check on {k}: support count {value}, bump infimum {brute_force}"),
            evaluations: TAU_BRUTE_FORCE_WIDTHS,
            estimate: (brute_force - value).abs(),
        });
    }
    Ok(QuasiMeasureValue {
        value,
        brute_force,
        realizing,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub profile: Profile,
    pub zeta: f64,
    /// `inf_K G` (heavy) or `sup_K G` (superheavy).
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassTest {
    /// No counterexample in the generated class.
    pub holds_on_class: bool,
    pub candidates: usize,
    pub counterexample: Option<Counterexample>,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoheavyWitness {
    pub j: u32,
    pub radius: f64,
    pub profile: Profile,
    pub zeta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoheavyTest {
    pub holds: bool,
    pub witnesses: Vec<PseudoheavyWitness>,
    /// `(j, 2⁻ʲ)` of the first radius without a witness.
    pub first_failure: Option<(u32, f64)>,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeavinessReport {
    pub subset: Vec<Vec<f64>>,
    pub heavy: ClassTest,
    pub superheavy: ClassTest,
    pub pseudoheavy: PseudoheavyTest,
}

const HEAVY_TOL: f64 = 1e-12;

/// Heavy, superheavy and pseudoheavy tests for the fiber set over the finite
/// value set `k`.
pub fn heaviness_report(zs: &dyn QuasiState, k: &[Vec<f64>]) -> Result<HeavinessReport> {
    let region = Region::points(k)?;
    if region.dim() != zs.dim() {
        return Err(Error::Parameter(format!(
            "values in ℝ^{} for a state on ℝ^{}",
            region.dim(),
            zs.dim()
        )));
    }
    let widths: Vec<f64> = (0..=20).rev().map(|j| 2f64.powi(-j)).collect();
    let vars: &[&str] = if zs.dim() == 1 { &LINE_VARS } else { &PLANE_VARS };
    let mut rng = seeded_rng(0x4ea7);
    let polys: Vec<Profile> = if zs.dim() <= 2 {
        (0..64)
            .map(|_| Profile::Polynomial {
                poly: random_polynomial(&mut rng, vars, 6, 6),
            })
            .collect()
    } else {
        Vec::new()
    };
    let inf_k = |g: &Profile| k.iter().map(|y| g.eval(y)).fold(f64::INFINITY, f64::min);
    let sup_k = |g: &Profile| k.iter().map(|y| g.eval(y)).fold(f64::NEG_INFINITY, f64::max);

    let class_test = |candidates: Vec<Profile>, heavy: bool| {
        let n = candidates.len();
        let counterexample = candidates.into_iter().find_map(|g| {
            let z = zs.eval(&g);
            let (bound, bad) = if heavy {
                let b = inf_k(&g);
                (b, z < b - HEAVY_TOL)
            } else {
                let b = sup_k(&g);
                (b, z > b + HEAVY_TOL)
            };
            bad.then_some(Counterexample { profile: g, zeta: z, bound })
        });
        ClassTest {
            holds_on_class: counterexample.is_none(),
            candidates: n,
            counterexample,
            note: CLASS_NOTE,
        }
    };

    let bumps: Vec<Profile> = widths.iter().map(|&w| Profile::bump(region.clone(), w)).collect();
    let heavy = class_test(bumps.iter().cloned().chain(polys.iter().cloned()).collect(), true);
    let co_bumps = bumps
        .iter()
        .map(|b| Profile::constant(1.0).plus(b.clone().scaled(-1.0)));
    let superheavy = class_test(co_bumps.chain(polys.iter().cloned()).collect(), false);

    let mut witnesses = Vec::new();
    let mut first_failure = None;
    for j in 0..=PSEUDOHEAVY_MAX_J {
        let radius = 2f64.powi(-(j as i32));
        let profile = Profile::bump(region.clone(), radius * (1.0 - 1e-9));
        let zeta = zs.eval(&profile);
        if zeta > 0.0 {
            witnesses.push(PseudoheavyWitness { j, radius, profile, zeta });
        } else {
            first_failure = Some((j, radius));
            break;
        }
    }
    Ok(HeavinessReport {
        subset: k.to_vec(),
        heavy,
        superheavy,
        pseudoheavy: PseudoheavyTest {
            holds: first_failure.is_none(),
            witnesses,
            first_failure,
            note: CLASS_NOTE,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplicityEntry {
    pub subset: Vec<Vec<f64>>,
    pub tau: f64,
    pub heavy_on_class: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplicityReport {
    pub entries: Vec<SimplicityEntry>,
    /// Indices with `τ ∉ {0, 1}`.
    pub violators: Vec<usize>,
    pub simple: bool,
    /// `τ(K) = 1` exactly when `K` passes the heavy test, on every entry.
    pub heavy_iff_full_measure: bool,
}

/// Evaluates `τ` on finite value sets and checks it takes only the values 0, 1.
pub fn simplicity_scan(zs: &dyn QuasiState, ks: &[Vec<Vec<f64>>]) -> Result<SimplicityReport> {
    let mut entries = Vec::with_capacity(ks.len());
    for k in ks {
        let t = tau(zs, &Region::points(k)?)?.value;
        let heavy = heaviness_report(zs, k)?.heavy.holds_on_class;
        entries.push(SimplicityEntry {
            subset: k.clone(),
            tau: t,
            heavy_on_class: heavy,
        });
    }
    let violators: Vec<usize> = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.tau.abs() > 1e-6 && (e.tau - 1.0).abs() > 1e-6)
        .map(|(i, _)| i)
        .collect();
    let heavy_iff_full_measure = entries.iter().all(|e| ((e.tau - 1.0).abs() <= 1e-6) == e.heavy_on_class);
    Ok(SimplicityReport {
        simple: violators.is_empty(),
        entries,
        violators,
        heavy_iff_full_measure,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NphRefusal {
    /// A grid value outside `V` covered by no open box.
    CoverGap { point: Vec<f64> },
    /// `H` does not vanish at a grid value in `V`.
    NotVanishingOnV { point: Vec<f64>, value: f64 },
    /// `ζ(Φ*(ρᵢH)) > 0`.
    PositiveTerm { index: usize, zeta: f64 },
    /// A support value of the state lies in the closure of cover element
    /// `index`, so its fibers are pseudoheavy.
    PseudoheavyElement { index: usize, atom: Vec<f64> },
}

impl fmt::Display for NphRefusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NphRefusal::CoverGap { point } => write!(f, "cover gap at grid value {point:?}"),
            NphRefusal::NotVanishingOnV { point, value } => {
                write!(f, "H = {value} at {point:?} inside V")
            }
            NphRefusal::PositiveTerm { index, zeta } => {
                write!(f, "term {index} has ζ(Φ*(ρ_{index} H)) = {zeta} > 0")
            }
            NphRefusal::PseudoheavyElement { index, atom } => {
                write!(f, "cover element {index} contains the pseudoheavy value {atom:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NphCertificate {
    pub grid_points: usize,
    /// Grid values outside `V` at which `Σ ρᵢ` was checked.
    pub partition_checked: usize,
    pub partition_max_defect: f64,
    pub terms: Vec<f64>,
    pub zeta_h: f64,
    pub sum_terms: f64,
    pub ledger: Vec<String>,
    pub conclusion: String,
}

/// Certificate that `ζ(Φ*H) ≤ 0` for `H` vanishing on the ball `V` of radius
/// `v_radius` about `p`, assembled from a partition of unity subordinate to
/// `cover` and quasi-subadditivity.
pub fn nph_stem_certificate(
    zs: &dyn QuasiState,
    grid: &[Vec<f64>],
    p: &[f64],
    v_radius: f64,
    h: &Profile,
    cover: &[OpenBox],
) -> std::result::Result<NphCertificate, NphRefusal> {
    let in_v = |y: &[f64]| norm(&y.iter().zip(p).map(|(u, v)| u - v).collect::<Vec<_>>()) <= v_radius;
    let mut partition_checked = 0;
    let mut partition_max_defect = 0.0f64;
    for y in grid {
        let v = in_v(y);
        if v {
            let hv = h.eval(y);
            if hv != 0.0 {
                return Err(NphRefusal::NotVanishingOnV {
                    point: y.clone(),
                    value: hv,
                });
            }
        }
        match partition_of_unity(cover, y) {
            Some(rho) => {
                partition_checked += 1;
                partition_max_defect = partition_max_defect.max((rho.iter().sum::<f64>() - 1.0).abs());
            }
            None if !v => return Err(NphRefusal::CoverGap { point: y.clone() }),
            None => {}
        }
    }

    let terms: Vec<f64> = (0..cover.len())
        .map(|i| {
            zs.eval(&Profile::PartitionTerm {
                cover: cover.to_vec(),
                index: i,
                inner: Box::new(h.clone()),
            })
        })
        .collect();
    if let Some((index, &zeta)) = terms.iter().enumerate().find(|(_, z)| !(**z <= 0.0)) {
        return Err(NphRefusal::PositiveTerm { index, zeta });
    }
    for (index, b) in cover.iter().enumerate() {
        if let Some(a) = zs.atoms().into_iter().find(|a| b.closure_contains(&a.point)) {
            return Err(NphRefusal::PseudoheavyElement { index, atom: a.point });
        }
    }

    let zeta_h = zs.eval(h);
    let sum_terms: f64 = terms.iter().sum();
    let mut ledger = vec![format!(
        "Σρᵢ = 1 within {partition_max_defect:e} on {partition_checked} grid values"
    )];
    for (i, t) in terms.iter().enumerate() {
        ledger.push(format!("ζ(Φ*(ρ_{i} H)) = {t} ≤ 0"));
    }
    ledger.push(format!("ζ(Φ*H) = {zeta_h} ≤ Σᵢ ζ(Φ*(ρᵢ H)) = {sum_terms} ≤ 0"));
    Ok(NphCertificate {
        grid_points: grid.len(),
        partition_checked,
        partition_max_defect,
        terms,
        zeta_h,
        sum_terms,
        ledger,
        conclusion: "ζ(Φ*H) ≤ 0".into(),
    })
}

/// Four open boxes covering `[lo, hi]²` minus the open square of half-width
/// `hole/√2` (inside the ball of radius `hole`) centred at `p`; none of them
/// contains `p` in its closure.
pub fn punctured_cover(lo: [f64; 2], hi: [f64; 2], p: [f64; 2], hole: f64) -> Result<Vec<OpenBox>> {
    let h = 0.99 * hole / std::f64::consts::SQRT_2;
    let m = 0.1 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
    let (xl, xh, yl, yh) = (lo[0] - m, hi[0] + m, lo[1] - m, hi[1] + m);
    Ok(vec![
        OpenBox::new(vec![xl, yl], vec![p[0] - h, yh])?,
        OpenBox::new(vec![p[0] + h, yl], vec![xh, yh])?,
        OpenBox::new(vec![xl, yl], vec![xh, p[1] - h])?,
        OpenBox::new(vec![xl, p[1] + h], vec![xh, yh])?,
    ])
}

/// `n × n` grid of `[lo, hi]²`.
pub fn plane_grid(lo: [f64; 2], hi: [f64; 2], n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let t = |k: usize, d: usize| {
                if n == 1 {
                    0.5 * (lo[d] + hi[d])
                } else {
                    lo[d] + (hi[d] - lo[d]) * k as f64 / (n - 1) as f64
                }
            };
            out.push(vec![t(i, 0), t(j, 1)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment::CouplingFunction;
    use crate::sphere::SymplecticWeight;

    fn prop41() -> AveragedQuasiState {
        AveragedQuasiState::new(vec![0.0, -0.5], vec![0.0, -1.0]).unwrap()
    }

    fn system_base() -> BaseMap {
        BaseMap::System {
            system: MomentSystem::coupled(SymplecticWeight::UNIT, 1.0),
        }
    }

    #[test]
    fn region_parsing() {
        let r = Region::parse("point(0, -0.5); box(-0.1..0.1, -1.1..-0.9); ball(0.2; 1, 1)").unwrap();
        assert_eq!(r.shapes.len(), 3);
        assert!(r.contains(&[0.0, -0.5]));
        assert!(r.contains(&[0.05, -1.0]));
        assert!((r.distance(&[1.5, 1.0]) - 0.3).abs() < 1e-12);
        assert_eq!(Region::parse(&r.to_string()).unwrap(), r);
        for bad in ["", "point(", "cube(1,2)", "box(1..0)", "point(1); point(1, 2)", "ball(1, 2)", "point(x)"] {
            assert!(matches!(Region::parse(bad), Err(Error::Parse(_))), "{bad:?}");
        }
    }

    #[test]
    fn smoothstep_bump_is_in_unit_interval() {
        let b = Profile::bump(Region::parse("point(0)").unwrap(), 0.5);
        assert_eq!(b.eval(&[0.0]), 1.0);
        assert_eq!(b.eval(&[0.5]), 0.0);
        assert!((b.eval(&[0.25]) - 0.5).abs() < 1e-15);
        for k in 0..=100 {
            let v = b.eval(&[k as f64 / 100.0]);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn zeta_eval_examples() {
        let zs = prop41();
        let base = system_base();
        assert_eq!(zeta_eval(&zs, &PullbackFunction::new(base.clone(), Profile::constant(0.7))), 0.7);
        let g = Profile::bump(Region::points(&[vec![0.0, -0.5]]).unwrap(), 0.25);
        assert_eq!(zeta_eval(&zs, &PullbackFunction::new(base.clone(), g.clone())), 0.5);
        let two = g.clone().scaled(2.0);
        assert_eq!(zs.eval(&two), 2.0 * zs.eval(&g));
    }

    #[test]
    fn averaged_state_rejects_equal_supports() {
        assert!(AveragedQuasiState::new(vec![1.0, 0.0], vec![1.0, 0.0]).is_err());
        assert!(AveragedQuasiState::new(vec![1.0], vec![1.0, 0.0]).is_err());
        assert!(genus2_instance(1.0, 1.0).is_err());
        assert!(genus2_instance(2.0, 1.0).is_err());
    }

    #[test]
    fn average_of_two_states() {
        let u = AveragedQuasiState::new(vec![0.0], vec![1.0]).unwrap();
        let v = AveragedQuasiState::new(vec![2.0], vec![3.0]).unwrap();
        let m = average(&u, &v).unwrap();
        let f = Profile::Polynomial {
            poly: Polynomial::parse(&LINE_VARS, "c^3 - c").unwrap(),
        };
        let expect = 0.25 * [0.0f64, 1.0, 2.0, 3.0].iter().map(|c| c.powi(3) - c).sum::<f64>();
        assert!((m.eval(&f) - expect).abs() < 1e-14);
        assert!(average(&u, &prop41()).is_err());
    }

    #[test]
    fn partition_of_unity_sums_to_one() {
        let cover = punctured_cover([-2.0, -2.0], [2.0, 2.0], [0.0, -0.5], 0.3).unwrap();
        for y in plane_grid([-2.0, -2.0], [2.0, 2.0], 50) {
            if let Some(rho) = partition_of_unity(&cover, &y) {
                assert!((rho.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(rho.iter().all(|r| (0.0..=1.0).contains(r)));
            } else {
                assert!(norm(&[y[0], y[1] + 0.5]) <= 0.3);
            }
        }
        assert!(partition_of_unity(&cover, &[0.0, -0.5]).is_none());
    }

    #[test]
    fn tau_examples() {
        let zs = prop41();
        let t = |s: &str| tau(&zs, &Region::parse(s).unwrap()).unwrap().value;
        assert_eq!(t("point(0, -0.5)"), 0.5);
        assert_eq!(t("point(0, -0.5); ball(0.1; 0, -1)"), 1.0);
        assert_eq!(t("box(0.5..1, -2..2)"), 0.0);
        assert!(matches!(tau(&zs, &Region::parse("point(1)").unwrap()), Err(Error::Parse(_))));
    }

    #[test]
    fn heaviness_examples() {
        let zs = prop41();
        let y1 = vec![0.0, -0.5];
        let y2 = vec![0.0, -1.0];
        let both = heaviness_report(&zs, &[y1.clone(), y2.clone()]).unwrap();
        assert!(both.heavy.holds_on_class && both.superheavy.holds_on_class);
        assert!(both.pseudoheavy.holds);
        assert_eq!(both.pseudoheavy.witnesses.len(), 21);

        let one = heaviness_report(&zs, &[y1]).unwrap();
        assert!(one.pseudoheavy.holds);
        let ce = one.heavy.counterexample.unwrap();
        assert_eq!((ce.zeta, ce.bound), (0.5, 1.0));
        assert!(!one.superheavy.holds_on_class);

        let far = heaviness_report(&zs, &[vec![0.0, 0.25]]).unwrap();
        let (_, r) = far.pseudoheavy.first_failure.unwrap();
        assert!(r < 0.75);
        assert!(!far.pseudoheavy.holds);
    }

    #[test]
    fn simplicity_examples() {
        let zs = prop41();
        let ks = vec![vec![vec![0.0, -0.5]], vec![vec![0.0, -1.0]], vec![vec![0.0, -0.5], vec![0.0, -1.0]]];
        let rep = simplicity_scan(&zs, &ks).unwrap();
        assert!(!rep.simple);
        assert_eq!(rep.violators, vec![0, 1]);
        assert!(rep.heavy_iff_full_measure);

        let dirac = PointState::new(vec![0.0, -0.5]).unwrap();
        let rep = simplicity_scan(&dirac, &ks).unwrap();
        assert!(rep.simple && rep.heavy_iff_full_measure);
    }

    #[test]
    fn axiom_suite_passes_for_averaged_state() {
        let zs = prop41();
        let base = system_base();
        let profiles = profile_family(2, 200, 1, &[-2.0, -1.5], &[2.0, 1.5]).unwrap();
        let family: Vec<PullbackFunction> =
            profiles.into_iter().map(|p| PullbackFunction::new(base.clone(), p)).collect();
        let pairs: Vec<(usize, usize)> = (0..199).map(|i| (i, i + 1)).collect();
        let samples: Vec<Vec<f64>> = zs.atoms().into_iter().map(|a| a.point).collect();
        let rep = axiom_suite(|f| zs.eval(f), &family, &pairs, &samples).unwrap();
        assert!(rep.all_passed, "{rep:#?}");
        assert!(rep.check(Axiom::Vanishing).tested > 0);
    }

    #[test]
    fn mixed_systems_are_gated_by_the_bracket() {
        let zs = prop41();
        let other = BaseMap::System {
            system: MomentSystem::new(SymplecticWeight::UNIT, CouplingFunction::scaled_product(0.4)),
        };
        let b = Profile::Polynomial {
            poly: Polynomial::parse(&PLANE_VARS, "b").unwrap(),
        };
        let family = vec![
            PullbackFunction::new(system_base(), b.clone()),
            PullbackFunction::new(other, b),
        ];
        let samples = vec![vec![0.0, -0.5]];
        let err = axiom_suite(|f| zs.eval(f), &family, &[(0, 1)], &samples).unwrap_err();
        assert!(matches!(err, Error::NonCommuting { magnitude } if magnitude > 1e-3));
    }

    #[test]
    fn nph_certificate_single_support() {
        let p = [0.0, -0.5];
        let zs = PointState::new(p.to_vec()).unwrap();
        let grid = plane_grid([-2.2, -2.2], [2.2, 2.2], 100);
        let cover = punctured_cover([-2.2, -2.2], [2.2, 2.2], p, 0.3).unwrap();
        let v = Region::parse("ball(0.3; 0, -0.5)").unwrap();
        let h = Profile::constant(1.0).plus(Profile::bump(v, 0.2).scaled(-1.0));
        let cert = nph_stem_certificate(&zs, &grid, &p, 0.3, &h, &cover).unwrap();
        assert!(cert.partition_max_defect < 1e-12);
        assert!(cert.terms.iter().all(|t| *t <= 0.0));
        assert!(cert.zeta_h <= 0.0);

        let gap = &cover[..3];
        assert!(matches!(
            nph_stem_certificate(&zs, &grid, &p, 0.3, &h, gap),
            Err(NphRefusal::CoverGap { .. })
        ));
        let two = AveragedQuasiState::new(p.to_vec(), vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            nph_stem_certificate(&two, &grid, &p, 0.3, &h, &cover),
            Err(NphRefusal::PositiveTerm { .. })
        ));
    }
}
