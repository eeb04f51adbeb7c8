//! The reduced space of `J₁ = z₁ + z₂` at level 0: the open annulus
//! `(−1, 1) × ℝ/2πℤ` with area form `σ = (4π)⁻¹ dz ∧ dθ` (total area 1).
//!
//! A point `(x₁, y₁, z, x₂, y₂, −z)` off the poles reduces to `(z, θ)` where
//! `θ` is the signed angle from `(x₁, y₁)` to `(x₂, y₂)`. The fiber
//! `(Φ₁^s)⁻¹(0, b)` reduces to the curve
//!
//! ```text
//! α(s, b) = { z² = (cos θ − b) / (cos θ + s) },   −s < b ≤ 0,
//! ```
//!
//! or, at `b = −s`, to the two lines `θ = ±Arccos(−s)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad;
use crate::sphere::{ProductPoint, SpherePoint};

/// Absolute tolerance requested from the area quadrature.
pub const AREA_QUAD_TOL: f64 = 1e-12;

/// Largest error estimate accepted for an [`AreaResult`].
pub const AREA_MAX_ERROR: f64 = 1e-9;

const MAX_PANELS: usize = 4000;

/// Tolerance on `|J₁|` accepted by [`reduce`].
pub const LEVEL_TOL: f64 = 1e-10;

/// Bisection width at which [`b_of_d`] stops.
pub const BISECTION_WIDTH: f64 = 1e-12;

/// Maps an angle to its representative in `(−π, π]`.
pub fn canonical_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

/// A point `(z, θ)` of the open annulus, `θ` canonical in `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusPoint {
    pub z: f64,
    pub theta: f64,
}

impl AnnulusPoint {
    pub fn new(z: f64, theta: f64) -> Result<Self> {
        if !(z.abs() < 1.0) || !theta.is_finite() {
            return Err(Error::Domain(format!("({z}, {theta}) is not in the open annulus")));
        }
        Ok(AnnulusPoint {
            z,
            theta: canonical_angle(theta),
        })
    }
}

/// Sampled points of `α(s, b)` or of the pinched set `𝒜_s`.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedCurve {
    pub s: f64,
    pub b: f64,
    pub pinched: bool,
    pub points: Vec<AnnulusPoint>,
}

impl ReducedCurve {
    /// Worst violation of the defining equation over the samples.
    pub fn max_residual(&self) -> f64 {
        if self.pinched {
            let line = (-self.s).acos();
            self.points
                .iter()
                .map(|q| (q.theta.abs() - line).abs())
                .fold(0.0, f64::max)
        } else {
            self.points
                .iter()
                .map(|q| {
                    let c = q.theta.cos();
                    (q.z * q.z * (c + self.s) - (c - self.b)).abs()
                })
                .fold(0.0, f64::max)
        }
    }
}

/// `τ`: the reduction of a point on `J₁⁻¹(0)` away from the poles.
pub fn reduce(p: &ProductPoint) -> Result<AnnulusPoint> {
    let (z1, z2) = (p.p1.z(), p.p2.z());
    if (z1 + z2).abs() > LEVEL_TOL {
        return Err(Error::Domain(format!("J1 = {} is not 0", z1 + z2)));
    }
    const POLE: f64 = 1.0 - 1e-12;
    if z1.abs() >= POLE || z2.abs() >= POLE {
        return Err(Error::Domain(format!(
            "point with heights ({z1}, {z2}) is at a pole, where the reduction is undefined"
        )));
    }
    let (x1, y1, x2, y2) = (p.p1.x(), p.p1.y(), p.p2.x(), p.p2.y());
    let theta = (x1 * y2 - y1 * x2).atan2(x1 * x2 + y1 * y2);
    AnnulusPoint::new(z1, theta)
}

/// A point of `τ⁻¹(q)` at circle phase `phase`:
/// `(x₁, y₁) = r(cos φ, sin φ)`, `(x₂, y₂) = r(cos(φ+θ), sin(φ+θ))`,
/// `z₁ = z`, `z₂ = −z`, with `r = √(1 − z²)`.
pub fn lift(q: &AnnulusPoint, phase: f64) -> ProductPoint {
    let r = ((1.0 - q.z) * (1.0 + q.z)).sqrt();
    let (s1, c1) = phase.sin_cos();
    let (s2, c2) = (phase + q.theta).sin_cos();
    let p1 = SpherePoint::project([r * c1, r * s1, q.z]).expect("nonzero lift");
    let p2 = SpherePoint::project([r * c2, r * s2, -q.z]).expect("nonzero lift");
    ProductPoint::new(p1, p2)
}

fn check_triangle(s: f64, b: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) || !(b >= -s && b <= 0.0) {
        return Err(Error::Domain(format!(
            "(s, b) = ({s}, {b}) outside 0 <= s <= 1, -s <= b <= 0"
        )));
    }
    Ok(())
}

/// `n` points tracing `α(s, b)` for `−s < b ≤ 0`.
///
/// The curve is parametrized by `t ∈ [0, 2π)` through `θ = Arccos(b)·cos t`
/// with `z` taking the sign of `sin t`, so samples cluster near the turning
/// points `θ = ±Arccos b` where `z` varies fastest.
pub fn curve(s: f64, b: f64, n: usize) -> Result<ReducedCurve> {
    check_triangle(s, b)?;
    if b == -s {
        return Err(Error::Domain(format!(
            "b = -s = {b} is the pinched case; use pinched_set"
        )));
    }
    if n == 0 {
        return Err(Error::Parameter("curve needs n >= 1".into()));
    }
    let half_width = b.acos();
    let points = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            let theta = half_width * t.cos();
            let c = theta.cos();
            // cos θ − cos A without cancellation near the turning points.
            let gap = 2.0 * (0.5 * (half_width + theta)).sin() * (0.5 * (half_width - theta)).sin();
            let z2 = (gap.max(0.0) / (c + s)).min(1.0);
            let z = z2.sqrt().copysign(t.sin());
            AnnulusPoint::new(z, theta)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReducedCurve {
        s,
        b,
        pinched: false,
        points,
    })
}

/// `n` points of `𝒜_s = (−1, 1) × {±Arccos(−s)}`; the two lines merge into
/// `θ = π` at `s = 1`. Heights are Chebyshev nodes of `(−1, 1)`.
pub fn pinched_set(s: f64, n: usize) -> Result<ReducedCurve> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    let line = (-s).acos();
    let thetas: Vec<f64> = if canonical_angle(line) == canonical_angle(-line) {
        vec![canonical_angle(line)]
    } else {
        vec![line, -line]
    };
    let mut points = Vec::with_capacity(n);
    let lines = thetas.len();
    for (li, &theta) in thetas.iter().enumerate() {
        let m = n / lines + usize::from(li < n % lines);
        for j in 0..m {
            let z = (PI * (j as f64 + 0.5) / m as f64).cos();
            points.push(AnnulusPoint::new(z, theta)?);
        }
    }
    Ok(ReducedCurve {
        s,
        b: -s,
        pinched: true,
        points,
    })
}

/// `Area_σ(D(s, b))` with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaResult {
    pub value: f64,
    pub estimated_error: f64,
    pub evaluations: usize,
}

/// `Area_σ(D(s, b)) = (1/π) ∫₀^{Arccos b} √((cos θ − b)/(cos θ + s)) dθ`.
///
/// The pinched case `b = −s` uses the closed form `Arccos(−s)/π`. Otherwise
/// the integral is split at `θ_m = Arccos(b)/2`: the left part is smooth, and
/// on the right part the substitution `cos θ − b = u²` removes the
/// square-root singularity at `θ = Arccos b`, giving the integrand
/// `2u² / (√(b + s + u²) · √((1 − b − u²)(1 + b + u²)))`.
/// The corner `(s, b) = (0, 0)` is excluded (the integrand is `0/0` there).
pub fn area(s: f64, b: f64) -> Result<AreaResult> {
    area_with_tol(s, b, AREA_QUAD_TOL)
}

/// [`area`] with an explicit quadrature tolerance (clamped to `1e-9`).
pub fn area_with_tol(s: f64, b: f64, tol: f64) -> Result<AreaResult> {
    check_triangle(s, b)?;
    if b == -s {
        if s == 0.0 {
            return Err(Error::Domain(
                "(s, b) = (0, 0) is excluded from the area domain".into(),
            ));
        }
        return Ok(AreaResult {
            value: (-s).acos() / PI,
            estimated_error: 0.0,
            evaluations: 0,
        });
    }
    let tol = tol.clamp(1e-15, AREA_MAX_ERROR);
    let top = b.acos();
    let split = 0.5 * top;
    let smooth = quad::integrate(
        |t: f64| {
            let c = t.cos();
            ((c - b) / (c + s)).sqrt()
        },
        0.0,
        split,
        0.5 * tol,
        MAX_PANELS,
    )?;
    let u_max = (split.cos() - b).max(0.0).sqrt();
    let singular = quad::integrate(
        |u: f64| {
            let u2 = u * u;
            let c = b + u2;
            2.0 * u2 / ((s + c).sqrt() * ((1.0 - c) * (1.0 + c)).sqrt())
        },
        0.0,
        u_max,
        0.5 * tol,
        MAX_PANELS,
    )?;
    let result = AreaResult {
        value: (smooth.value + singular.value) / PI,
        estimated_error: (smooth.error + singular.error) / PI,
        evaluations: smooth.evaluations + singular.evaluations,
    };
    if result.estimated_error > AREA_MAX_ERROR || !(result.value <= 1.0 + AREA_MAX_ERROR) {
        return Err(Error::NonConvergence {
            what: format!("area({s}, {b})"),
            evaluations: result.evaluations,
            estimate: result.estimated_error,
        });
    }
    Ok(result)
}

/// `s_c = −cos(π · Area_σ(D(1, c)))` for `c ∈ [−1, −1/2]`.
pub fn s_of_c(c: f64) -> Result<f64> {
    if !(-1.0..=-0.5).contains(&c) {
        return Err(Error::Domain(format!("c = {c} outside [-1, -1/2]")));
    }
    let a = area(1.0, c)?;
    let s = -(PI * a.value).cos();
    if !(-1e-9..=1.0 + 1e-9).contains(&s) {
        return Err(Error::NonConvergence {
            what: format!("s_c for c = {c} left [0, 1]"),
            evaluations: a.evaluations,
            estimate: s,
        });
    }
    Ok(s.clamp(0.0, 1.0))
}

/// Root of `area(s, ·) = target` returned by [`b_of_d`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParameterRoot {
    pub value: f64,
    /// `|area(s, value) − target|`.
    pub residual: f64,
    pub iterations: usize,
}

/// The unique `b_d ∈ (−s_c, 0)` with `Area(D(s_c, b_d)) = Area(D(1, d))`,
/// by bisection on the strictly decreasing map `b ↦ area(s_c, b)`.
pub fn b_of_d(s_c: f64, d: f64) -> Result<ParameterRoot> {
    if !(s_c > 0.0 && s_c <= 1.0) {
        return Err(Error::Domain(format!("s_c = {s_c} outside (0, 1]")));
    }
    if !(-1.0..=-0.5).contains(&d) {
        return Err(Error::Domain(format!("d = {d} outside [-1, -1/2]")));
    }
    let target = area(1.0, d)?.value;
    let top = area(s_c, -s_c)?.value;
    if !(target < top) {
        return Err(Error::Domain(format!(
            "Area(D(1, {d})) = {target} is not below Area(D({s_c}, {})) = {top}",
            -s_c
        )));
    }
    let bottom = area(s_c, 0.0)?.value;
    if !(target > bottom) {
        return Err(Error::Domain(format!(
            "Area(D(1, {d})) = {target} is not above Area(D({s_c}, 0)) = {bottom}"
        )));
    }
    let (mut lo, mut hi) = (-s_c, 0.0);
    let mut iterations = 0;
    while hi - lo > BISECTION_WIDTH && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if area(s_c, mid)?.value > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value = 0.5 * (lo + hi);
    let residual = (area(s_c, value)?.value - target).abs();
    Ok(ParameterRoot {
        value,
        residual,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment::eval_h_s;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reduce_examples() {
        let p = |a: [f64; 3], b: [f64; 3]| {
            ProductPoint::new(SpherePoint::new(a[0], a[1], a[2]).unwrap(), SpherePoint::new(b[0], b[1], b[2]).unwrap())
        };
        let q = reduce(&p([1.0, 0.0, 0.0], [1.0, 0.0, 0.0])).unwrap();
        assert_eq!((q.z, q.theta), (0.0, 0.0));
        let q = reduce(&p([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0])).unwrap();
        assert_eq!(q.theta, PI);
        let z: f64 = 0.4;
        let r = (1.0 - z * z).sqrt();
        let q = reduce(&p([r, 0.0, z], [0.0, r, -z])).unwrap();
        assert_abs_diff_eq!(q.theta, PI / 2.0, epsilon = 1e-15);
        assert_eq!(q.z, z);
    }

    #[test]
    fn reduce_rejects_poles_and_other_levels() {
        let ns = ProductPoint::new(SpherePoint::NORTH, SpherePoint::SOUTH);
        assert!(matches!(reduce(&ns), Err(Error::Domain(_))));
        let off = ProductPoint::new(SpherePoint::new(1.0, 0.0, 0.0).unwrap(), SpherePoint::NORTH);
        assert!(reduce(&off).is_err());
    }

    #[test]
    fn canonical_angle_range() {
        assert_eq!(canonical_angle(-PI), PI);
        assert_eq!(canonical_angle(PI), PI);
        assert_abs_diff_eq!(canonical_angle(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn curve_examples() {
        let c = curve(1.0, 0.0, 400).unwrap();
        assert!(c.max_residual() < 1e-12);
        // t = 0 sample sits at θ = Arccos b, z = 0; t = π/2 at θ = 0, z² = 1/2.
        assert_abs_diff_eq!(c.points[0].theta, PI / 2.0, epsilon = 1e-15);
        assert_eq!(c.points[0].z, 0.0);
        assert_abs_diff_eq!(c.points[100].theta, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.points[100].z, 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(curve(0.5, -0.5, 10).is_err());
        assert!(curve(0.5, -0.7, 10).is_err());
    }

    #[test]
    fn pinched_lines() {
        let one = pinched_set(1.0, 11).unwrap();
        assert!(one.points.iter().all(|q| q.theta == PI));
        let zero = pinched_set(0.0, 10).unwrap();
        assert!(zero.points.iter().all(|q| (q.theta.abs() - PI / 2.0).abs() < 1e-15));
        let half = pinched_set(0.5, 9).unwrap();
        assert_eq!(half.points.len(), 9);
        assert!(half.points.iter().all(|q| (q.theta.abs() - 2.0 * PI / 3.0).abs() < 1e-15));
        assert!(half.points.iter().any(|q| q.theta < 0.0));
        assert!(half.max_residual() < 1e-15);
    }

    #[test]
    fn lift_satisfies_h_s() {
        for (s, b) in [(0.5, -0.25), (1.0, -0.9), (0.1, 0.0)] {
            let c = curve(s, b, 50).unwrap();
            for q in &c.points {
                for k in 0..5 {
                    let p = lift(q, 0.7 * k as f64);
                    assert_eq!(p.p1.z() + p.p2.z(), 0.0);
                    assert!((eval_h_s(s, &p) - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn area_closed_forms() {
        assert_abs_diff_eq!(area(1.0, -1.0).unwrap().value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(area(0.5, -0.5).unwrap().value, 2.0 / 3.0, epsilon = 1e-15);
        assert!(area(0.0, 0.0).is_err());
        assert!(area(0.5, 0.1).is_err());
        assert!(area(0.5, -0.6).is_err());
    }

    #[test]
    fn s_of_c_endpoints_and_domain() {
        assert_abs_diff_eq!(s_of_c(-1.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s_of_c(-0.5).unwrap(), 0.0, epsilon = 1e-9);
        assert!(s_of_c(-0.4).is_err());
    }

    #[test]
    fn b_of_d_domain_errors() {
        assert!(b_of_d(0.0, -0.5).is_err());
        // Target above the pinched area: d = c itself.
        let s = s_of_c(-0.75).unwrap();
        assert!(b_of_d(s, -0.8).is_err());
    }
}
