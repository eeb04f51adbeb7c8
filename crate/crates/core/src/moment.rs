//! The generalized coupled angular momenta `Φ_{R,f} = (J_R, H_f)` on `S² × S²`:
//!
//! ```text
//! J_R = z₁ + R·z₂
//! H_f = x₁x₂ + y₁y₂ + z₁z₂ − f(z₁, z₂)
//! ```
//!
//! With `f = (1 − s)·z₁z₂` this is `H^s = x₁x₂ + y₁y₂ + s·z₁z₂`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Term};
use crate::reduction;
use crate::sphere::{Ambient, ProductPoint, ScalarField, SpherePoint, SymplecticWeight};

/// Variables of a coupling polynomial.
pub const COUPLING_VARS: [&str; 2] = ["z1", "z2"];

/// Grid step used to certify `‖f‖_{L∞}` on `[-1, 1]²`.
pub const LINF_GRID_STEP: f64 = 1e-3;

/// Tolerance on the fiber residual `|Φ(p) − target|`.
pub const FIBER_RESIDUAL_TOL: f64 = 1e-10;

type CouplingFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// The coupling `f : [-1, 1]² → ℝ` of `H_f`.
#[derive(Clone)]
pub enum CouplingFunction {
    /// A polynomial in `z1, z2`; extends to all of ℝ².
    Polynomial {
        poly: Polynomial,
        derivatives: Arc<[Polynomial; 2]>,
        bound: Arc<OnceLock<f64>>,
    },
    /// An opaque function evaluable on `[-1, 1]²` only, registered with a
    /// Lipschitz constant for its sup-norm certificate.
    BlackBox {
        name: String,
        func: Arc<CouplingFn>,
        lipschitz: f64,
        bound: f64,
    },
}

impl CouplingFunction {
    pub fn polynomial(poly: Polynomial) -> Result<Self> {
        if poly.vars() != COUPLING_VARS {
            return Err(Error::Parameter(format!(
                "coupling polynomial must be in z1, z2, got {:?}",
                poly.vars()
            )));
        }
        let derivatives = Arc::new([poly.derivative(0), poly.derivative(1)]);
        Ok(CouplingFunction::Polynomial {
            poly,
            derivatives,
            bound: Arc::new(OnceLock::new()),
        })
    }

    /// Parses a polynomial in `z1, z2`.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::polynomial(Polynomial::parse(&COUPLING_VARS, spec)?)
    }

    pub fn zero() -> Self {
        Self::polynomial(Polynomial::zero(&COUPLING_VARS)).expect("zero polynomial")
    }

    /// `λ · z₁z₂`.
    pub fn scaled_product(lambda: f64) -> Self {
        let poly = Polynomial::new(
            &COUPLING_VARS,
            vec![Term {
                coef: lambda,
                powers: vec![1, 1],
            }],
        )
        .expect("monomial");
        Self::polynomial(poly).expect("z1, z2 polynomial")
    }

    /// `(1 − s) · z₁z₂`, the coupling that turns `H_f` into `H^s`.
    pub fn for_s(s: f64) -> Self {
        Self::scaled_product(1.0 - s)
    }

    /// Registers an opaque coupling. Its sup-norm bound is certified on the
    /// grid of step [`LINF_GRID_STEP`] plus `lipschitz · step / √2`.
    pub fn black_box<F>(name: &str, lipschitz: f64, func: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
            return Err(Error::Parameter(format!(
                "Lipschitz constant must be finite and >= 0, got {lipschitz}"
            )));
        }
        let grid_max = grid_sup(&func)?;
        Ok(CouplingFunction::BlackBox {
            name: name.to_string(),
            func: Arc::new(func),
            lipschitz,
            bound: grid_max + lipschitz * LINF_GRID_STEP / std::f64::consts::SQRT_2,
        })
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self {
            CouplingFunction::Polynomial { poly, .. } => Some(poly),
            CouplingFunction::BlackBox { .. } => None,
        }
    }

    /// True if `f` may be evaluated outside `[-1, 1]²`.
    pub fn extends_globally(&self) -> bool {
        self.as_polynomial().is_some()
    }

    /// Evaluates `f`. Black-box couplings are clamped to their domain; use
    /// [`CouplingFunction::eval_checked`] to reject out-of-domain arguments.
    pub fn eval(&self, z1: f64, z2: f64) -> f64 {
        match self {
            CouplingFunction::Polynomial { poly, .. } => poly.eval(&[z1, z2]),
            CouplingFunction::BlackBox { func, .. } => {
                func(z1.clamp(-1.0, 1.0), z2.clamp(-1.0, 1.0))
            }
        }
    }

    pub fn eval_checked(&self, z1: f64, z2: f64) -> Result<f64> {
        if !self.extends_globally() && (z1.abs() > 1.0 || z2.abs() > 1.0) {
            return Err(Error::Domain(format!(
                "({z1}, {z2}) outside [-1, 1]², where {self} is defined"
            )));
        }
        let v = self.eval(z1, z2);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(format!("{self} is not finite at ({z1}, {z2})")))
        }
    }

    /// `(∂f/∂z₁, ∂f/∂z₂)`; exact for polynomials, central differences otherwise.
    pub fn gradient(&self, z1: f64, z2: f64) -> (f64, f64) {
        match self {
            CouplingFunction::Polynomial { derivatives, .. } => (
                derivatives[0].eval(&[z1, z2]),
                derivatives[1].eval(&[z1, z2]),
            ),
            CouplingFunction::BlackBox { .. } => {
                let h = crate::sphere::FD_STEP;
                (
                    (self.eval(z1 + h, z2) - self.eval(z1 - h, z2)) / (2.0 * h),
                    (self.eval(z1, z2 + h) - self.eval(z1, z2 - h)) / (2.0 * h),
                )
            }
        }
    }

    /// Certified upper bound for `‖f‖_{L∞([-1,1]²)}`: grid maximum of `|f|`
    /// with step [`LINF_GRID_STEP`] plus a Lipschitz allowance.
    pub fn linf_bound(&self) -> f64 {
        match self {
            CouplingFunction::Polynomial { poly, bound, .. } => *bound.get_or_init(|| {
                if poly.is_zero() {
                    return 0.0;
                }
                let f = |a: f64, b: f64| poly.eval(&[a, b]);
                let grid_max = grid_sup(&f).unwrap_or(f64::INFINITY);
                let lip = poly.derivative_bound(0).hypot(poly.derivative_bound(1));
                grid_max + lip * LINF_GRID_STEP / std::f64::consts::SQRT_2
            }),
            CouplingFunction::BlackBox { bound, .. } => *bound,
        }
    }
}

fn grid_sup<F: Fn(f64, f64) -> f64 + ?Sized>(f: &F) -> Result<f64> {
    let n = (2.0 / LINF_GRID_STEP).round() as usize;
    let mut best = 0.0f64;
    for i in 0..=n {
        let a = -1.0 + 2.0 * i as f64 / n as f64;
        for j in 0..=n {
            let b = -1.0 + 2.0 * j as f64 / n as f64;
            let v = f(a, b);
            if !v.is_finite() {
                return Err(Error::Evaluation(format!("coupling not finite at ({a}, {b})")));
            }
            best = best.max(v.abs());
        }
    }
    Ok(best)
}

impl fmt::Debug for CouplingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CouplingFunction({self})")
    }
}

impl fmt::Display for CouplingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingFunction::Polynomial { poly, .. } => write!(f, "{poly}"),
            CouplingFunction::BlackBox { name, .. } => write!(f, "<{name}>"),
        }
    }
}

impl PartialEq for CouplingFunction {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                CouplingFunction::Polynomial { poly: a, .. },
                CouplingFunction::Polynomial { poly: b, .. },
            ) => a == b,
            (
                CouplingFunction::BlackBox { name: a, func: fa, .. },
                CouplingFunction::BlackBox { name: b, func: fb, .. },
            ) => a == b && Arc::ptr_eq(fa, fb),
            _ => false,
        }
    }
}

#[derive(Serialize)]
struct CouplingRecord<'a> {
    kind: &'static str,
    expression: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<&'a [Term]>,
    linf_bound: f64,
}

impl Serialize for CouplingFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let record = CouplingRecord {
            kind: if self.extends_globally() { "polynomial" } else { "black_box" },
            expression: self.to_string(),
            terms: self.as_polynomial().map(|p| p.terms()),
            linf_bound: self.linf_bound(),
        };
        record.serialize(serializer)
    }
}

/// A pair `(R, f)` defining `Φ_{R,f} = (J_R, H_f)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSystem {
    pub r: SymplecticWeight,
    pub f: CouplingFunction,
}

/// A value `(a, b) = (J_R, H_f)` of the moment map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct MomentValue {
    pub a: f64,
    pub b: f64,
}

impl MomentValue {
    pub fn new(a: f64, b: f64) -> Self {
        MomentValue { a, b }
    }

    pub fn distance(&self, other: &MomentValue) -> f64 {
        (self.a - other.a).hypot(self.b - other.b)
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.a, self.b]
    }
}

impl MomentSystem {
    pub fn new(r: SymplecticWeight, f: CouplingFunction) -> Self {
        MomentSystem { r, f }
    }

    /// `Φ_R^s = (J_R, H^s)`.
    pub fn coupled(r: SymplecticWeight, s: f64) -> Self {
        MomentSystem::new(r, CouplingFunction::for_s(s))
    }

    pub fn j(&self, p: &ProductPoint) -> f64 {
        eval_j(self.r, p)
    }

    pub fn h(&self, p: &ProductPoint) -> f64 {
        eval_h(self, p)
    }

    pub fn phi(&self, p: &ProductPoint) -> MomentValue {
        MomentValue::new(self.j(p), self.h(p))
    }

    pub fn j_field(&self) -> JField {
        JField { r: self.r.value() }
    }

    pub fn h_field(&self) -> HField<'_> {
        HField { f: &self.f }
    }
}

/// `J_R(p) = z₁ + R·z₂`.
pub fn eval_j(r: SymplecticWeight, p: &ProductPoint) -> f64 {
    p.p1.z() + r.value() * p.p2.z()
}

/// `H_f(p) = x₁x₂ + y₁y₂ + z₁z₂ − f(z₁, z₂)`.
pub fn eval_h(sys: &MomentSystem, p: &ProductPoint) -> f64 {
    h_ambient(&sys.f, &p.to_ambient())
}

/// `H^s(p) = x₁x₂ + y₁y₂ + s·z₁z₂`, evaluated directly.
pub fn eval_h_s(s: f64, p: &ProductPoint) -> f64 {
    p.p1.x() * p.p2.x() + p.p1.y() * p.p2.y() + s * p.p1.z() * p.p2.z()
}

fn h_ambient(f: &CouplingFunction, x: &Ambient) -> f64 {
    x[0] * x[3] + x[1] * x[4] + x[2] * x[5] - f.eval(x[2], x[5])
}

/// `J_R` as an ambient field with exact gradient.
#[derive(Debug, Clone, Copy)]
pub struct JField {
    r: f64,
}

impl ScalarField for JField {
    fn value(&self, x: &Ambient) -> f64 {
        x[2] + self.r * x[5]
    }

    fn gradient(&self, _x: &Ambient) -> Ambient {
        [0.0, 0.0, 1.0, 0.0, 0.0, self.r]
    }
}

/// `H_f` as an ambient field; gradient exact up to the coupling's derivative.
#[derive(Debug, Clone, Copy)]
pub struct HField<'a> {
    f: &'a CouplingFunction,
}

impl ScalarField for HField<'_> {
    fn value(&self, x: &Ambient) -> f64 {
        h_ambient(self.f, x)
    }

    fn gradient(&self, x: &Ambient) -> Ambient {
        let (d1, d2) = self.f.gradient(x[2], x[5]);
        [x[3], x[4], x[5] - d1, x[0], x[1], x[2] - d2]
    }
}

/// Points on a fiber `(Φ₁^s)⁻¹(0, b)`, obtained by lifting the reduced curve.
#[derive(Debug, Clone, Serialize)]
pub struct FiberSample {
    pub s: f64,
    pub target: MomentValue,
    pub points: Vec<ProductPoint>,
    /// `max |Φ₁^s(p) − target|` over the points (max-norm).
    pub residual: f64,
}

/// Samples the fiber `(Φ₁^s)⁻¹(0, b)` for `b ∈ [−s, 0]`.
///
/// The curve branch (`b > −s`) lifts `n_theta` points of `α(s, b)`; the pinched
/// branch (`b = −s`) lifts `n_theta` points of the two lines `θ = ±Arccos(−s)`
/// and appends the pole pairs `(N, S)` and `(S, N)`. Each reduced point is
/// lifted at `n_phase` equally spaced phases of the circle action.
pub fn fiber_sample(s: f64, b: f64, n_theta: usize, n_phase: usize) -> Result<FiberSample> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    if !(b >= -s && b <= 0.0) {
        return Err(Error::Domain(format!(
            "b = {b} outside the window [{}, 0] of the a = 0 slice for s = {s}",
            -s
        )));
    }
    if n_theta == 0 || n_phase == 0 {
        return Err(Error::Parameter("fiber sampling needs n_theta, n_phase >= 1".into()));
    }
    let pinched = b == -s;
    let reduced = if pinched {
        reduction::pinched_set(s, n_theta)?
    } else {
        reduction::curve(s, b, n_theta)?
    };
    let mut points = Vec::with_capacity(n_theta * n_phase + 2);
    for q in &reduced.points {
        for k in 0..n_phase {
            let phase = std::f64::consts::TAU * k as f64 / n_phase as f64;
            points.push(reduction::lift(q, phase));
        }
    }
    if pinched {
        points.push(ProductPoint::new(SpherePoint::NORTH, SpherePoint::SOUTH));
        points.push(ProductPoint::new(SpherePoint::SOUTH, SpherePoint::NORTH));
    }
    let target = MomentValue::new(0.0, b);
    let residual = points
        .iter()
        .map(|p| {
            let j = p.p1.z() + p.p2.z();
            j.abs().max((eval_h_s(s, p) - b).abs())
        })
        .fold(0.0, f64::max);
    if residual > FIBER_RESIDUAL_TOL {
        return Err(Error::NonConvergence {
            what: format!("fiber lift for (s, b) = ({s}, {b})"),
            evaluations: points.len(),
            estimate: residual,
        });
    }
    Ok(FiberSample {
        s,
        target,
        points,
        residual,
    })
}

/// Topology of the fiber `(Φ₁^s)⁻¹(0, b)`, decided by the defining case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiberTopology {
    /// `(s, b) = (1, −1)`: the antidiagonal Lagrangian sphere.
    Sphere,
    /// `b = −s`, `0 ≤ s < 1`: a torus with two meridians pinched to points.
    DoublyPinchedTorus,
    /// `−s < b ≤ 0`, `s > 0`: a Lagrangian torus over the closed curve `α(s, b)`.
    Torus,
    /// Parameters outside the analyzed part of the slice.
    OutOfRange,
}

impl FiberTopology {
    pub fn case(&self) -> &'static str {
        match self {
            FiberTopology::Sphere => "(s, b) = (1, -1)",
            FiberTopology::DoublyPinchedTorus => "b = -s with 0 <= s < 1",
            FiberTopology::Torus => "-s < b <= 0 with s > 0",
            FiberTopology::OutOfRange => "outside 0 <= s <= 1, -s <= b <= 0",
        }
    }
}

/// Classifies the fiber of `Φ₁^s` over `(0, b)`.
pub fn classify_fiber(s: f64, b: f64) -> FiberTopology {
    const EPS: f64 = 1e-12;
    if !(0.0..=1.0).contains(&s) || !b.is_finite() {
        return FiberTopology::OutOfRange;
    }
    if (s - 1.0).abs() <= EPS && (b + 1.0).abs() <= EPS {
        FiberTopology::Sphere
    } else if (b + s).abs() <= EPS && s < 1.0 {
        FiberTopology::DoublyPinchedTorus
    } else if b > -s && b <= 0.0 && s > 0.0 {
        FiberTopology::Torus
    } else {
        FiberTopology::OutOfRange
    }
}

/// Sampled image of a moment map with its bounding box.
#[derive(Debug, Clone, Serialize)]
pub struct MomentImage {
    pub values: Vec<MomentValue>,
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
}

/// Radical inverse of `i` in base `base`.
fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// The `i`-th point of a Halton sequence on `S² × S²` (uniform heights and
/// azimuths, hence uniform on each sphere).
pub fn halton_point(i: u64) -> ProductPoint {
    let tau = std::f64::consts::TAU;
    let z1 = 2.0 * halton(i, 2) - 1.0;
    let phi1 = tau * halton(i, 3);
    let z2 = 2.0 * halton(i, 5) - 1.0;
    let phi2 = tau * halton(i, 7);
    ProductPoint::new(
        SpherePoint::from_height_azimuth(z1, phi1).expect("height in range"),
        SpherePoint::from_height_azimuth(z2, phi2).expect("height in range"),
    )
}

/// `Φ` at `n` Halton points plus the coordinate ranges.
pub fn moment_image(sys: &MomentSystem, n: usize) -> Result<MomentImage> {
    if n == 0 {
        return Err(Error::Parameter("moment image needs n >= 1".into()));
    }
    let values: Vec<MomentValue> = (1..=n as u64).map(|i| sys.phi(&halton_point(i))).collect();
    let range = |get: fn(&MomentValue) -> f64| {
        values.iter().map(get).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
    };
    Ok(MomentImage {
        a_range: range(|v| v.a),
        b_range: range(|v| v.b),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{poisson_bracket, seeded_rng};

    fn pt(a: [f64; 3], b: [f64; 3]) -> ProductPoint {
        ProductPoint::new(SpherePoint::new(a[0], a[1], a[2]).unwrap(), SpherePoint::new(b[0], b[1], b[2]).unwrap())
    }

    #[test]
    fn j_examples() {
        let n = [0.0, 0.0, 1.0];
        let s = [0.0, 0.0, -1.0];
        let one = SymplecticWeight::UNIT;
        let two = SymplecticWeight::new(2.0).unwrap();
        assert_eq!(eval_j(one, &pt(n, s)), 0.0);
        assert_eq!(eval_j(one, &pt(n, n)), 2.0);
        assert_eq!(eval_j(two, &pt(s, n)), 1.0);
    }

    #[test]
    fn h_examples() {
        let sys = MomentSystem::new(SymplecticWeight::UNIT, CouplingFunction::zero());
        assert_eq!(eval_h(&sys, &pt([0.0, 0.0, 1.0], [0.0, 0.0, -1.0])), -1.0);
        let mut rng = seeded_rng(3);
        for _ in 0..100 {
            let q = SpherePoint::random(&mut rng);
            assert!((eval_h(&sys, &ProductPoint::new(q, q)) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn coupled_system_matches_direct_h_s() {
        let mut rng = seeded_rng(11);
        for k in 0..=20 {
            let s = k as f64 / 20.0;
            let sys = MomentSystem::coupled(SymplecticWeight::UNIT, s);
            for _ in 0..500 {
                let p = ProductPoint::random(&mut rng);
                assert!((eval_h(&sys, &p) - eval_h_s(s, &p)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn analytic_gradient_agrees_with_differences() {
        let f = CouplingFunction::parse("0.2*z1^2*z2 - z1*z2").unwrap();
        let sys = MomentSystem::new(SymplecticWeight::UNIT, f);
        let h = sys.h_field();
        let p = ProductPoint::random(&mut seeded_rng(5)).to_ambient();
        let exact = h.gradient(&p);
        let fd = crate::sphere::central_gradient(|x: &Ambient| h.value(x), &p);
        for i in 0..6 {
            assert!((exact[i] - fd[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn noether_commutation() {
        let mut rng = seeded_rng(17);
        for r in [0.5, 1.0, 2.0] {
            let sys = MomentSystem::new(
                SymplecticWeight::new(r).unwrap(),
                CouplingFunction::parse("0.2*z1^2*z2").unwrap(),
            );
            for _ in 0..200 {
                let p = ProductPoint::random(&mut rng);
                let v = poisson_bracket(&sys.j_field(), &sys.h_field(), &p, sys.r).unwrap();
                assert!(v.abs() < 1e-12, "{v}");
            }
        }
    }

    #[test]
    fn linf_bound_is_certified() {
        let f = CouplingFunction::scaled_product(0.2);
        let bound = f.linf_bound();
        assert!((0.2..0.2 + 5e-4).contains(&bound));
        assert_eq!(CouplingFunction::zero().linf_bound(), 0.0);
        let bb = CouplingFunction::black_box("sin", 1.0, |a, b| 0.1 * (a + b).sin()).unwrap();
        assert!(bb.linf_bound() >= 0.1 * 2.0f64.sin());
        assert!(bb.eval_checked(1.5, 0.0).is_err());
        assert!(CouplingFunction::scaled_product(1.0).eval_checked(1.5, 0.0).is_ok());
    }

    #[test]
    fn fiber_sample_rejects_outside_window() {
        let err = fiber_sample(0.5, -0.75, 8, 4).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("[-0.5, 0]")));
        assert!(fiber_sample(0.5, 0.1, 8, 4).is_err());
        assert!(fiber_sample(1.5, -0.1, 8, 4).is_err());
    }

    #[test]
    fn sphere_fiber_is_antidiagonal() {
        let fs = fiber_sample(1.0, -1.0, 40, 7).unwrap();
        assert!(fs.residual < 1e-12);
        for p in &fs.points {
            let anti = p.p1.antipode();
            assert!(p.p2.coords().iter().zip(anti.coords()).all(|(u, v)| (u - v).abs() < 1e-12));
        }
    }

    #[test]
    fn pinched_fiber_contains_poles() {
        let fs = fiber_sample(0.5, -0.5, 30, 5).unwrap();
        assert_eq!(fs.points.len(), 30 * 5 + 2);
        for p in &fs.points {
            assert!((eval_h_s(0.5, p) + 0.5).abs() < 1e-10);
        }
        let max_z = fs.points.iter().map(|p| p.p1.z().abs()).fold(0.0, f64::max);
        assert_eq!(max_z, 1.0);
    }

    #[test]
    fn torus_fiber_stays_off_the_poles() {
        let fs = fiber_sample(0.7, -0.3, 200, 3).unwrap();
        let max_z = fs.points.iter().map(|p| p.p1.z().abs()).fold(0.0, f64::max);
        // z² ≤ (1 − b)/(1 + s) on the curve.
        assert!(max_z <= ((1.0 + 0.3) / 1.7f64).sqrt() + 1e-12);
        assert!(max_z < 0.9);
    }

    #[test]
    fn zero_level_curve() {
        let s = 0.3;
        let fs = fiber_sample(s, 0.0, 64, 2).unwrap();
        for p in &fs.points {
            let q = reduction::reduce(p).unwrap();
            let c = q.theta.cos();
            assert!((q.z * q.z - c / (c + s)).abs() < 1e-10);
        }
    }

    #[test]
    fn classification_cases() {
        assert_eq!(classify_fiber(1.0, -1.0), FiberTopology::Sphere);
        assert_eq!(classify_fiber(0.5, -0.5), FiberTopology::DoublyPinchedTorus);
        assert_eq!(classify_fiber(1.0, -0.5), FiberTopology::Torus);
        assert_eq!(classify_fiber(0.0, 0.0), FiberTopology::DoublyPinchedTorus);
        assert_eq!(classify_fiber(0.5, 0.1), FiberTopology::OutOfRange);
        assert_eq!(classify_fiber(0.5, -0.6), FiberTopology::OutOfRange);
        assert_eq!(classify_fiber(1.2, -0.5), FiberTopology::OutOfRange);
    }

    #[test]
    fn moment_image_bounds() {
        let sys = MomentSystem::new(SymplecticWeight::UNIT, CouplingFunction::scaled_product(1.0));
        let img = moment_image(&sys, 2000).unwrap();
        assert!(img.a_range.0 >= -2.0 && img.a_range.1 <= 2.0);
        let sys0 = MomentSystem::new(SymplecticWeight::UNIT, CouplingFunction::zero());
        let small = moment_image(&sys0, 100).unwrap();
        let large = moment_image(&sys0, 20000).unwrap();
        assert!(large.b_range.0 >= -1.0 - 1e-12 && large.b_range.1 <= 1.0 + 1e-12);
        assert!(large.b_range.1 - large.b_range.0 >= small.b_range.1 - small.b_range.0);
        assert!(large.b_range.0 < -0.95 && large.b_range.1 > 0.95);
        assert!(moment_image(&sys0, 0).is_err());
    }
}
