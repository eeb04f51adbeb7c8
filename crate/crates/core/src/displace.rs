//! Displaceability verdicts for fibers of `Φ_{R,f}`.
//!
//! The involution `ψ` reverses `J_R` and maps the fiber over `(0, b)` into
//! `{0} × [−b + 2m, −b + 2M]`, where `[m, M]` is the range of
//!
//! ```text
//! F_{R,f}(z) = −½ (f(−Rz, z) + f(Rz, −z) + 2Rz²)
//! ```
//!
//! so every fiber with `a ≠ 0` or `b ∉ [m, M]` is displaced by `ψ`. When
//! `F ≡ 0` the fiber over `(0, 0)` is a stem. Inside the window nothing is
//! decided and the verdict says so.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moment::{fiber_sample, CouplingFunction, MomentSystem, MomentValue};
use crate::reduction::{self, AreaResult};
use crate::sphere::{psi, seeded_rng, ProductPoint, ScalarField, SpherePoint, SymplecticWeight};

/// Number of intervals of the grid scan of `F_{R,f}`.
pub const WINDOW_GRID: usize = 10_000;

/// Width to which golden-section search refines the extremizers.
pub const WINDOW_REFINE_TOL: f64 = 1e-10;

/// Grid sup of `|F_{R,f}|` below which the stem criterion fires.
pub const STEM_TOL: f64 = 1e-10;

/// Slack between the analytic margin and the sampled distance.
pub const EMPIRICAL_SLACK: f64 = 1e-6;

/// Residual accepted for a fiber-proxy point.
pub const PROXY_RESIDUAL_TOL: f64 = 1e-11;

/// Statements the verdicts rely on, keyed by content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Citation {
    /// `ψ` displaces `Φ_{R,f}⁻¹(a, b)` whenever `(a, b) ∉ {0} × [m, M]`.
    InvolutionDisplacesOutsideWindow,
    /// `F_{R,f} ≡ 0` makes `Φ_{R,f}⁻¹(0, 0)` a stem.
    VanishingWindowGivesStem,
    /// Stems are superheavy.
    StemIsSuperheavy,
    /// `‖f‖_{L∞} < 1/4` leaves at least two non-displaceable fibers of `Φ_{1,f}`.
    SmallCouplingTwoNonDisplaceableFibers,
    /// Displacing `α(s, b)` from `α(1, d)` in the annulus lifts to `S² × S²`.
    ReducedDisplacementLifts,
}

impl Citation {
    pub fn key(&self) -> &'static str {
        match self {
            Citation::InvolutionDisplacesOutsideWindow => "involution_displaces_outside_window",
            Citation::VanishingWindowGivesStem => "vanishing_window_gives_stem",
            Citation::StemIsSuperheavy => "stem_is_superheavy",
            Citation::SmallCouplingTwoNonDisplaceableFibers => {
                "small_coupling_two_non_displaceable_fibers"
            }
            Citation::ReducedDisplacementLifts => "reduced_displacement_lifts",
        }
    }
}

/// `F_{R,f}(z) = −½ (f(−Rz, z) + f(Rz, −z) + 2Rz²)`.
///
/// Polynomial couplings are evaluated for every `z ∈ [−1, 1]`; black-box
/// couplings only where `|Rz| ≤ 1`.
pub fn f_rf(r: SymplecticWeight, f: &CouplingFunction, z: f64) -> Result<f64> {
    let rv = r.value();
    if !(z.abs() <= 1.0) {
        return Err(Error::Domain(format!("z = {z} outside [-1, 1]")));
    }
    if !f.extends_globally() && (rv * z).abs() > 1.0 {
        return Err(Error::Domain(format!(
            "z = {z} has |Rz| > 1 for R = {rv}; {f} is only defined on [-1, 1]²"
        )));
    }
    let v = -0.5 * (f.eval(-rv * z, z) + f.eval(rv * z, -z) + 2.0 * rv * z * z);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation(format!("F_R,f not finite at z = {z}")))
    }
}

/// Half-width of the `z`-range on which `F_{R,f}` is scanned.
pub fn window_z_limit(r: SymplecticWeight, f: &CouplingFunction) -> f64 {
    if f.extends_globally() {
        1.0
    } else {
        (1.0 / r.value()).min(1.0)
    }
}

/// The range `[m, M]` of `F_{R,f}` with its extremizers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisplacementWindow {
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub argmin: f64,
    pub argmax: f64,
    /// Grid step of the scan.
    pub resolution: f64,
    /// Scanned range is `[−z_limit, z_limit]`.
    pub z_limit: f64,
    /// `max |F|` over the scan grid.
    pub grid_sup: f64,
}

impl DisplacementWindow {
    pub fn contains(&self, b: f64) -> bool {
        self.m <= b && b <= self.big_m
    }

    /// Distance from `b` to `[m, M]`; zero inside.
    pub fn distance(&self, b: f64) -> f64 {
        if b < self.m {
            self.m - b
        } else if b > self.big_m {
            b - self.big_m
        } else {
            0.0
        }
    }
}

fn golden_section_min<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    while hi - lo > tol {
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        }
    }
    if g1 <= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

/// Extremes of `F_{R,f}` by a grid scan with [`WINDOW_GRID`] intervals and
/// golden-section refinement around the best grid points.
pub fn window(r: SymplecticWeight, f: &CouplingFunction) -> Result<DisplacementWindow> {
    let zl = window_z_limit(r, f);
    let step = 2.0 * zl / WINDOW_GRID as f64;
    let zs: Vec<f64> = (0..=WINDOW_GRID)
        .map(|i| zl * (2.0 * i as f64 - WINDOW_GRID as f64) / WINDOW_GRID as f64)
        .collect();
    let values = zs.iter().map(|&z| f_rf(r, f, z)).collect::<Result<Vec<f64>>>()?;
    let mut imin = 0;
    let mut imax = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[imin] {
            imin = i;
        }
        if *v > values[imax] {
            imax = i;
        }
    }
    let grid_sup = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let bracket = |i: usize| (zs[i.saturating_sub(1)], zs[(i + 1).min(WINDOW_GRID)]);
    let eval = |z: f64| f_rf(r, f, z.clamp(-zl, zl)).unwrap_or(f64::NAN);

    let (lo, hi) = bracket(imin);
    let (zmin, vmin) = golden_section_min(eval, lo, hi, WINDOW_REFINE_TOL);
    let (argmin, m) = if vmin < values[imin] { (zmin, vmin) } else { (zs[imin], values[imin]) };

    let (lo, hi) = bracket(imax);
    let (zmax, vneg) = golden_section_min(|z| -eval(z), lo, hi, WINDOW_REFINE_TOL);
    let (argmax, big_m) = if -vneg > values[imax] { (zmax, -vneg) } else { (zs[imax], values[imax]) };

    Ok(DisplacementWindow {
        m,
        big_m,
        argmin,
        argmax,
        resolution: step,
        z_limit: zl,
        grid_sup,
    })
}

/// Points of `Φ⁻¹(target)` found by damped Gauss–Newton projection from
/// random starts, spread along the orbits of the circle action.
#[derive(Debug, Clone, Serialize)]
pub struct FiberProxy {
    pub target: MomentValue,
    pub points: Vec<ProductPoint>,
    /// Number of independent Newton solutions the points were generated from.
    pub seeds: usize,
    pub residual: f64,
}

fn tangent(g: [f64; 6], x: &[f64; 6]) -> [f64; 6] {
    let mut out = g;
    for k in 0..2 {
        let o = 3 * k;
        let dot = g[o] * x[o] + g[o + 1] * x[o + 1] + g[o + 2] * x[o + 2];
        for i in 0..3 {
            out[o + i] -= dot * x[o + i];
        }
    }
    out
}

fn dot6(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn project_to_fiber(sys: &MomentSystem, target: MomentValue, start: ProductPoint) -> Option<ProductPoint> {
    let jf = sys.j_field();
    let hf = sys.h_field();
    let mut p = start;
    for _ in 0..80 {
        let x = p.to_ambient();
        let r0 = jf.value(&x) - target.a;
        let r1 = hf.value(&x) - target.b;
        if r0.abs().max(r1.abs()) <= 1e-14 {
            return Some(p);
        }
        let gj = tangent(jf.gradient(&x), &x);
        let gh = tangent(hf.gradient(&x), &x);
        let mu = 1e-12;
        let (g00, g01, g11) = (dot6(&gj, &gj) + mu, dot6(&gj, &gh), dot6(&gh, &gh) + mu);
        let det = g00 * g11 - g01 * g01;
        if !(det.abs() > 1e-300) {
            return None;
        }
        let y0 = (g11 * r0 - g01 * r1) / det;
        let y1 = (g00 * r1 - g01 * r0) / det;
        let mut delta = [0.0; 6];
        for i in 0..6 {
            delta[i] = y0 * gj[i] + y1 * gh[i];
        }
        let norm = dot6(&delta, &delta).sqrt();
        let scale = if norm > 0.5 { 0.5 / norm } else { 1.0 };
        let mut next = x;
        for i in 0..6 {
            next[i] -= scale * delta[i];
        }
        p = ProductPoint::from_ambient(&next).ok()?;
    }
    let x = p.to_ambient();
    let res = (jf.value(&x) - target.a).abs().max((hf.value(&x) - target.b).abs());
    (res <= PROXY_RESIDUAL_TOL).then_some(p)
}

/// Samples `n` points of `Φ⁻¹(target)`. An empty fiber (or one the Newton
/// iteration cannot reach) yields an empty point list.
pub fn fiber_proxy(sys: &MomentSystem, target: MomentValue, n: usize, seed: u64) -> FiberProxy {
    let mut rng = seeded_rng(seed ^ target.a.to_bits().rotate_left(17) ^ target.b.to_bits());
    let want_seeds = n.min(64);
    let mut seeds: Vec<ProductPoint> = Vec::new();
    let mut attempts = 0;
    while seeds.len() < want_seeds && attempts < 8 * want_seeds.max(1) {
        attempts += 1;
        let start = ProductPoint::random(&mut rng);
        if let Some(q) = project_to_fiber(sys, target, start) {
            seeds.push(q);
        }
    }
    let mut points = Vec::with_capacity(n);
    if !seeds.is_empty() {
        for k in 0..n {
            let q = seeds[k % seeds.len()];
            let angle = if k < seeds.len() { 0.0 } else { rng.random::<f64>() * std::f64::consts::TAU };
            points.push(q.rotate_z(angle));
        }
    }
    let residual = points
        .iter()
        .map(|p| sys.phi(p))
        .map(|v| (v.a - target.a).abs().max((v.b - target.b).abs()))
        .fold(0.0, f64::max);
    FiberProxy {
        target,
        seeds: seeds.len(),
        points,
        residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictTag {
    DisplaceableByPsi,
    DisplaceableInReduction,
    InsideWindowUnknown,
    NonDisplaceableCited,
    SuperheavyCited,
    NotApplicable,
}

impl VerdictTag {
    pub fn label(&self) -> &'static str {
        match self {
            VerdictTag::DisplaceableByPsi => "DisplaceableByPsi",
            VerdictTag::DisplaceableInReduction => "DisplaceableInReduction",
            VerdictTag::InsideWindowUnknown => "InsideWindow-Unknown",
            VerdictTag::NonDisplaceableCited => "NonDisplaceable-Cited",
            VerdictTag::SuperheavyCited => "Superheavy-Cited",
            VerdictTag::NotApplicable => "NotApplicable",
        }
    }
}

/// What a verdict rests on.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `Φ∘ψ` maps the fiber into `{−a} × ℝ`.
    OppositeLevel { image_a: f64 },
    /// `Φ∘ψ` maps the fiber over `(0, b)` into `{0} × [lo, hi]`.
    WindowImage {
        window: DisplacementWindow,
        image_b: [f64; 2],
    },
    /// The target lies in the window; `ψ` proves nothing.
    InsideWindow { window: DisplacementWindow },
    /// `F_{R,f}` vanishes on the scan grid.
    Stem { window: DisplacementWindow },
    /// `F_{R,f}` does not vanish on the scan grid.
    NonVanishingWindow { window: DisplacementWindow },
    /// σ-areas of `D(s, b)` and `D(1, d)`.
    AreaComparison {
        s: f64,
        b: f64,
        d: f64,
        pinched: bool,
        curve_area: AreaResult,
        reference_area: AreaResult,
        threshold: f64,
    },
    /// The sampled image of a fiber lies in an open window.
    FiberWindow(FiberWindowCheck),
}

/// Sampled confirmation of a `ψ` certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalCheck {
    pub samples: usize,
    pub seeds: usize,
    pub fiber_residual: f64,
    /// `min |Φ(ψ(q)) − (a, b)|` over the samples.
    pub min_distance: f64,
    /// True when `min_distance ≥ margin − EMPIRICAL_SLACK` and every image
    /// lies in the certified set.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub tag: VerdictTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<MomentValue>,
    pub certificate: Certificate,
    pub margin: f64,
    pub citations: Vec<Citation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<EmpiricalCheck>,
}

/// Verdict for the fiber `Φ_{R,f}⁻¹(a, b)`. With `n > 0` the certificate is
/// confirmed on `n` fiber-proxy samples.
pub fn displaceable(sys: &MomentSystem, target: MomentValue, n: usize, seed: u64) -> Result<Verdict> {
    let w = window(sys.r, &sys.f)?;
    Ok(displaceable_in_window(sys, &w, target, n, seed))
}

/// [`displaceable`] with a precomputed window.
pub fn displaceable_in_window(
    sys: &MomentSystem,
    w: &DisplacementWindow,
    target: MomentValue,
    n: usize,
    seed: u64,
) -> Verdict {
    let MomentValue { a, b } = target;
    let (certificate, margin) = if a != 0.0 {
        (Certificate::OppositeLevel { image_a: -a }, 2.0 * a.abs())
    } else if !w.contains(b) {
        let image_b = [-b + 2.0 * w.m, -b + 2.0 * w.big_m];
        (Certificate::WindowImage { window: *w, image_b }, 2.0 * w.distance(b))
    } else {
        return Verdict {
            tag: VerdictTag::InsideWindowUnknown,
            target: Some(target),
            certificate: Certificate::InsideWindow { window: *w },
            margin: 0.0,
            citations: vec![],
            empirical: None,
        };
    };
    let empirical = (n > 0).then(|| {
        let proxy = fiber_proxy(sys, target, n, seed);
        let mut min_distance = f64::INFINITY;
        let mut inside = true;
        for q in &proxy.points {
            let v = sys.phi(&psi(q));
            min_distance = min_distance.min(v.distance(&target));
            inside &= match &certificate {
                Certificate::OppositeLevel { image_a } => (v.a - image_a).abs() <= 1e-9,
                Certificate::WindowImage { image_b, .. } => {
                    v.a.abs() <= 1e-9 && v.b >= image_b[0] - 1e-9 && v.b <= image_b[1] + 1e-9
                }
                _ => true,
            };
        }
        EmpiricalCheck {
            samples: proxy.points.len(),
            seeds: proxy.seeds,
            fiber_residual: proxy.residual,
            min_distance,
            agrees: inside && min_distance >= margin - EMPIRICAL_SLACK,
        }
    });
    Verdict {
        tag: VerdictTag::DisplaceableByPsi,
        target: Some(target),
        certificate,
        margin,
        citations: vec![Citation::InvolutionDisplacesOutsideWindow],
        empirical,
    }
}

/// Stem criterion: if `F_{R,f}` vanishes on the scan grid, the fiber over
/// `(0, 0)` is a stem, hence superheavy, and every other fiber is displaced
/// by `ψ`.
pub fn stem_check(r: SymplecticWeight, f: &CouplingFunction) -> Result<Verdict> {
    let w = window(r, f)?;
    Ok(stem_verdict(&w))
}

fn stem_verdict(w: &DisplacementWindow) -> Verdict {
    if w.grid_sup <= STEM_TOL {
        Verdict {
            tag: VerdictTag::SuperheavyCited,
            target: Some(MomentValue::new(0.0, 0.0)),
            certificate: Certificate::Stem { window: *w },
            margin: STEM_TOL - w.grid_sup,
            citations: vec![
                Citation::VanishingWindowGivesStem,
                Citation::StemIsSuperheavy,
                Citation::InvolutionDisplacesOutsideWindow,
            ],
            empirical: None,
        }
    } else {
        Verdict {
            tag: VerdictTag::NotApplicable,
            target: Some(MomentValue::new(0.0, 0.0)),
            certificate: Certificate::NonVanishingWindow { window: *w },
            margin: w.grid_sup - STEM_TOL,
            citations: vec![],
            empirical: None,
        }
    }
}

/// Compares `Area_σ(D(s, b))` with `Area_σ(D(1, d))` in the reduced annulus.
///
/// A closed curve `α(s, b)` enclosing strictly less area than `α(1, d)` can be
/// moved inside `D(1, d)`; the pinched lines `θ = ±Arccos(−s)` bound a strip
/// that holds `D(1, d)` once the strip is strictly larger. "Strictly" means by
/// more than ten times the combined quadrature error.
pub fn annulus_displaceable(s: f64, b: f64, d: f64) -> Result<Verdict> {
    if !(-1.0..=-0.5).contains(&d) {
        return Err(Error::Domain(format!("d = {d} outside [-1, -1/2]")));
    }
    let curve_area = reduction::area(s, b)?;
    let reference_area = reduction::area(1.0, d)?;
    let threshold = (10.0 * (curve_area.estimated_error + reference_area.estimated_error)).max(1e-12);
    let pinched = b == -s;
    let gap = if pinched {
        curve_area.value - reference_area.value
    } else {
        reference_area.value - curve_area.value
    };
    let displaced = gap > threshold;
    Ok(Verdict {
        tag: if displaced {
            VerdictTag::DisplaceableInReduction
        } else {
            VerdictTag::InsideWindowUnknown
        },
        target: None,
        certificate: Certificate::AreaComparison {
            s,
            b,
            d,
            pinched,
            curve_area,
            reference_area,
            threshold,
        },
        margin: gap,
        citations: if displaced { vec![Citation::ReducedDisplacementLifts] } else { vec![] },
        empirical: None,
    })
}

/// Sampled image of a fiber of `Φ_1^1` under `Φ_{1,f}` against an open window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberWindowCheck {
    /// The fiber is `L_c = (Φ_1^1)⁻¹(0, c)`.
    pub c: f64,
    pub open_window: [f64; 2],
    pub observed_b: [f64; 2],
    pub max_abs_a: f64,
    pub samples: usize,
    /// Distance of the observed range to the window boundary.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub coupling: String,
    pub linf_bound: f64,
    pub checks: [FiberWindowCheck; 2],
    pub verdicts: Vec<Verdict>,
}

const SEPARATION_THETA: usize = 400;
const SEPARATION_PHASE: usize = 8;

fn window_check(f: &CouplingFunction, c: f64, open_window: [f64; 2]) -> Result<FiberWindowCheck> {
    let sample = fiber_sample(1.0, c, SEPARATION_THETA, SEPARATION_PHASE)?;
    let sys = MomentSystem::new(SymplecticWeight::UNIT, f.clone());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut max_abs_a = 0.0f64;
    for p in &sample.points {
        let v = sys.phi(p);
        lo = lo.min(v.b);
        hi = hi.max(v.b);
        max_abs_a = max_abs_a.max(v.a.abs());
    }
    let margin = (lo - open_window[0]).min(open_window[1] - hi);
    Ok(FiberWindowCheck {
        c,
        open_window,
        observed_b: [lo, hi],
        max_abs_a,
        samples: sample.points.len(),
        margin,
        holds: margin > 0.0 && max_abs_a <= 1e-10,
    })
}

/// For `‖f‖_{L∞} < 1/4`, checks on samples that `Φ_{1,f}(L_{−1/2})` lies in
/// `{0} × (−3/4, −1/4)` and `Φ_{1,f}(L_{−1})` in `{0} × (−5/4, −3/4)`, and cites
/// the resulting pair of non-displaceable fibers.
pub fn two_fiber_separation(f: &CouplingFunction) -> Result<SeparationReport> {
    let linf_bound = f.linf_bound();
    if !(linf_bound < 0.25) {
        return Err(Error::Hypothesis(format!(
            "certified bound ‖f‖ <= {linf_bound} for f = {f} is not below 1/4"
        )));
    }
    let checks = [
        window_check(f, -0.5, [-0.75, -0.25])?,
        window_check(f, -1.0, [-1.25, -0.75])?,
    ];
    let verdicts = checks
        .iter()
        .filter(|c| c.holds)
        .map(|c| Verdict {
            tag: VerdictTag::NonDisplaceableCited,
            target: None,
            certificate: Certificate::FiberWindow(*c),
            margin: c.margin,
            citations: vec![Citation::SmallCouplingTwoNonDisplaceableFibers],
            empirical: None,
        })
        .collect();
    Ok(SeparationReport {
        coupling: f.to_string(),
        linf_bound,
        checks,
        verdicts,
    })
}

/// Known bounds on the largest `ℵ` such that `‖f‖_{L∞} < ℵ` forces two
/// non-displaceable fibers of `Φ_{1,f}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlephBracket {
    pub low: f64,
    pub high: f64,
    pub low_citation: Citation,
    pub high_citation: Citation,
    /// Coupling with a stem at `(0, 0)`, so a single non-displaceable fiber.
    pub high_witness: String,
    pub high_witness_linf: f64,
    pub high_witness_is_stem: bool,
}

pub fn aleph_bracket() -> AlephBracket {
    let witness = CouplingFunction::scaled_product(1.0);
    let is_stem = stem_check(SymplecticWeight::UNIT, &witness)
        .map(|v| v.tag == VerdictTag::SuperheavyCited)
        .unwrap_or(false);
    AlephBracket {
        low: 0.25,
        high: 1.0,
        low_citation: Citation::SmallCouplingTwoNonDisplaceableFibers,
        high_citation: Citation::VanishingWindowGivesStem,
        high_witness: witness.to_string(),
        high_witness_linf: witness.linf_bound(),
        high_witness_is_stem: is_stem,
    }
}

/// `ψ` displaces every set whose `J_R`-values lie in `[a_lo, a_hi]` when the
/// interval misses 0: such a set and its image have disjoint `J_R`-ranges.
pub fn psi_displaces_slab(a_lo: f64, a_hi: f64) -> bool {
    a_lo > 0.0 || a_hi < 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub tag: VerdictTag,
    pub margin: f64,
}

/// Verdicts on the grid `a_values × b_values`. When the stem criterion holds
/// the cell `(0, 0)` is reported as superheavy.
pub fn sweep(sys: &MomentSystem, a_values: &[f64], b_values: &[f64], n: usize, seed: u64) -> Result<Vec<SweepRow>> {
    let w = window(sys.r, &sys.f)?;
    let stem = stem_verdict(&w);
    let mut rows = Vec::with_capacity(a_values.len() * b_values.len());
    for &a in a_values {
        for &b in b_values {
            let target = MomentValue::new(a, b);
            let v = if a == 0.0 && b == 0.0 && stem.tag == VerdictTag::SuperheavyCited {
                stem.clone()
            } else {
                displaceable_in_window(sys, &w, target, n, seed)
            };
            rows.push(SweepRow {
                a,
                b,
                tag: v.tag,
                margin: v.margin,
            });
        }
    }
    Ok(rows)
}

/// A point of `S² × S²` with prescribed heights; used to seed examples.
pub fn point_with_heights(z1: f64, z2: f64, phi1: f64, phi2: f64) -> Result<ProductPoint> {
    Ok(ProductPoint::new(
        SpherePoint::from_height_azimuth(z1, phi1)?,
        SpherePoint::from_height_azimuth(z2, phi2)?,
    ))
}
