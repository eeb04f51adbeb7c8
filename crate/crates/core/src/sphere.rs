//! Points, Poisson brackets and Hamiltonian flows on the weighted product
//! `(S² × S², ω₁ + R·ω₂)`.
//!
//! Sign convention: on a single unit sphere the Hamiltonian vector field of a
//! function `H` is `∇H × p`, so the flow of the height function `z` is the
//! positive rotation about the z-axis at unit angular speed. On the product the
//! second factor's field is scaled by `1/R`. The bracket is
//! `{F, G} = dG(X_F)`, i.e. the derivative of `G` along the flow of `F`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ambient coordinates `(x₁, y₁, z₁, x₂, y₂, z₂)` in ℝ³ × ℝ³.
pub type Ambient = [f64; 6];

/// Step of the central differences used for ambient gradients.
pub const FD_STEP: f64 = 1e-6;

/// Tolerance accepted by [`SpherePoint::new`] before renormalising.
const UNIT_TOLERANCE: f64 = 1e-9;

/// A point of the unit sphere in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct SpherePoint {
    x: f64,
    y: f64,
    z: f64,
}

impl SpherePoint {
    pub const NORTH: SpherePoint = SpherePoint { x: 0.0, y: 0.0, z: 1.0 };
    pub const SOUTH: SpherePoint = SpherePoint { x: 0.0, y: 0.0, z: -1.0 };

    /// Builds a point from coordinates that already lie on the sphere (up to
    /// `1e-9` in squared norm), renormalising the result.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2 - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::Domain(format!(
                "({x}, {y}, {z}) is not on the unit sphere (|p|² = {n2})"
            )));
        }
        Ok(Self::normalized_unchecked([x, y, z], n2))
    }

    /// Radial projection of a non-zero vector onto the sphere.
    pub fn project(v: [f64; 3]) -> Result<Self> {
        let n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if !n2.is_finite() || n2 < 1e-300 {
            return Err(Error::Domain(format!(
                "cannot project {v:?} onto the unit sphere"
            )));
        }
        Ok(Self::normalized_unchecked(v, n2))
    }

    fn normalized_unchecked(v: [f64; 3], n2: f64) -> Self {
        // Already unit to within a few ulps: keep the coordinates untouched.
        if (n2 - 1.0).abs() <= 1e-14 {
            return SpherePoint { x: v[0], y: v[1], z: v[2] };
        }
        let n = n2.sqrt();
        SpherePoint {
            x: v[0] / n,
            y: v[1] / n,
            z: v[2] / n,
        }
    }

    /// Uniform random point (normalised Gaussian triple).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = [
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ];
            if let Ok(p) = Self::project(v) {
                return p;
            }
        }
    }

    /// Point with height `z` and azimuth `phi`.
    pub fn from_height_azimuth(z: f64, phi: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&z) {
            return Err(Error::Domain(format!("height {z} outside [-1, 1]")));
        }
        let r = (1.0 - z * z).sqrt();
        Self::project([r * phi.cos(), r * phi.sin(), z])
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// `| |p|² − 1 |`.
    pub fn norm_defect(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z - 1.0).abs()
    }

    /// Exact coordinate negation; stays on the sphere bit-for-bit.
    pub fn antipode(&self) -> Self {
        SpherePoint {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Rotation about the z-axis by `angle`.
    pub fn rotate_z(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        SpherePoint {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
            z: self.z,
        }
    }
}

impl From<SpherePoint> for [f64; 3] {
    fn from(p: SpherePoint) -> Self {
        p.coords()
    }
}

impl TryFrom<[f64; 3]> for SpherePoint {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        SpherePoint::new(v[0], v[1], v[2])
    }
}

/// A point of `S² × S²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 6]", try_from = "[f64; 6]")]
pub struct ProductPoint {
    pub p1: SpherePoint,
    pub p2: SpherePoint,
}

impl ProductPoint {
    pub fn new(p1: SpherePoint, p2: SpherePoint) -> Self {
        ProductPoint { p1, p2 }
    }

    /// Projects each factor of an ambient point onto its sphere.
    pub fn from_ambient(x: &Ambient) -> Result<Self> {
        Ok(ProductPoint {
            p1: SpherePoint::project([x[0], x[1], x[2]])?,
            p2: SpherePoint::project([x[3], x[4], x[5]])?,
        })
    }

    pub fn to_ambient(&self) -> Ambient {
        [
            self.p1.x, self.p1.y, self.p1.z, self.p2.x, self.p2.y, self.p2.z,
        ]
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        ProductPoint {
            p1: SpherePoint::random(rng),
            p2: SpherePoint::random(rng),
        }
    }

    pub fn norm_defect(&self) -> f64 {
        self.p1.norm_defect().max(self.p2.norm_defect())
    }

    /// Euclidean distance in ℝ⁶.
    pub fn distance(&self, other: &ProductPoint) -> f64 {
        let a = self.to_ambient();
        let b = other.to_ambient();
        a.iter()
            .zip(b.iter())
            .map(|(u, v)| (u - v) * (u - v))
            .sum::<f64>()
            .sqrt()
    }

    /// Simultaneous rotation of both factors about their z-axes: the exact
    /// time-`angle` map of the flow of `z₁ + R·z₂` for every `R`.
    pub fn rotate_z(&self, angle: f64) -> Self {
        ProductPoint {
            p1: self.p1.rotate_z(angle),
            p2: self.p2.rotate_z(angle),
        }
    }
}

impl From<ProductPoint> for [f64; 6] {
    fn from(p: ProductPoint) -> Self {
        p.to_ambient()
    }
}

impl TryFrom<[f64; 6]> for ProductPoint {
    type Error = Error;

    fn try_from(v: [f64; 6]) -> Result<Self> {
        Ok(ProductPoint {
            p1: SpherePoint::new(v[0], v[1], v[2])?,
            p2: SpherePoint::new(v[3], v[4], v[5])?,
        })
    }
}

/// The weight `R > 0` of the second factor in `ω_R`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SymplecticWeight(f64);

impl SymplecticWeight {
    pub const UNIT: SymplecticWeight = SymplecticWeight(1.0);

    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(SymplecticWeight(r))
        } else {
            Err(Error::Parameter(format!("symplectic weight must be > 0, got {r}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for SymplecticWeight {
    type Error = Error;

    fn try_from(r: f64) -> Result<Self> {
        SymplecticWeight::new(r)
    }
}

impl From<SymplecticWeight> for f64 {
    fn from(w: SymplecticWeight) -> f64 {
        w.0
    }
}

/// A smooth function on a neighbourhood of `S² × S²` in ℝ⁶.
///
/// Implementors only need [`ScalarField::value`]; the default gradient uses
/// central differences on the ambient extension.
pub trait ScalarField {
    fn value(&self, x: &Ambient) -> f64;

    fn gradient(&self, x: &Ambient) -> Ambient {
        central_gradient(|y: &Ambient| self.value(y), x)
    }
}

impl<F> ScalarField for F
where
    F: Fn(&Ambient) -> f64,
{
    fn value(&self, x: &Ambient) -> f64 {
        self(x)
    }
}

/// Ambient gradient by central differences with step [`FD_STEP`].
pub fn central_gradient<F: Fn(&Ambient) -> f64>(f: F, x: &Ambient) -> Ambient {
    let mut g = [0.0; 6];
    let mut y = *x;
    for i in 0..6 {
        let xi = x[i];
        y[i] = xi + FD_STEP;
        let fp = f(&y);
        y[i] = xi - FD_STEP;
        let fm = f(&y);
        y[i] = xi;
        g[i] = (fp - fm) / (2.0 * FD_STEP);
    }
    g
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn checked_gradient<H: ScalarField + ?Sized>(h: &H, x: &Ambient) -> Result<Ambient> {
    let g = h.gradient(x);
    if g.iter().all(|v| v.is_finite()) {
        Ok(g)
    } else {
        Err(Error::Evaluation(format!("non-finite gradient at {x:?}")))
    }
}

/// Hamiltonian vector field of `h` at the ambient point `x`.
///
/// Crossing with the base point discards the normal component of the
/// gradient, so no separate tangent projection is needed.
pub fn hamiltonian_vector<H: ScalarField + ?Sized>(
    h: &H,
    x: &Ambient,
    r: SymplecticWeight,
) -> Result<Ambient> {
    let g = checked_gradient(h, x)?;
    let v1 = cross([g[0], g[1], g[2]], [x[0], x[1], x[2]]);
    let v2 = cross([g[3], g[4], g[5]], [x[3], x[4], x[5]]);
    let inv = 1.0 / r.value();
    Ok([v1[0], v1[1], v1[2], v2[0] * inv, v2[1] * inv, v2[2] * inv])
}

/// Poisson bracket `{F, G}(p) = dG(X_F)(p)` on `(S² × S², ω_R)`.
pub fn poisson_bracket<F, G>(f: &F, g: &G, p: &ProductPoint, r: SymplecticWeight) -> Result<f64>
where
    F: ScalarField + ?Sized,
    G: ScalarField + ?Sized,
{
    let x = p.to_ambient();
    let xf = hamiltonian_vector(f, &x, r)?;
    let gg = checked_gradient(g, &x)?;
    let value: f64 = xf.iter().zip(gg.iter()).map(|(a, b)| a * b).sum();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation(format!("non-finite bracket at {x:?}")))
    }
}

/// Integrates the Hamiltonian flow of `h` from `p0` for time `t` with
/// classical RK4 and fixed step at most `dt`, projecting both factors back to
/// the sphere after every step. Negative `t` integrates backwards.
pub fn hamiltonian_flow<H: ScalarField + ?Sized>(
    h: &H,
    p0: &ProductPoint,
    r: SymplecticWeight,
    t: f64,
    dt: f64,
) -> Result<ProductPoint> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Parameter(format!("step size must be > 0, got {dt}")));
    }
    if !t.is_finite() {
        return Err(Error::Parameter(format!("flow time must be finite, got {t}")));
    }
    if t == 0.0 {
        return Ok(*p0);
    }
    let steps = (t.abs() / dt).ceil().max(1.0) as usize;
    let step = t / steps as f64;
    let mut y = p0.to_ambient();
    let axpy = |base: &Ambient, k: &Ambient, a: f64| -> Ambient {
        let mut out = *base;
        for i in 0..6 {
            out[i] += a * k[i];
        }
        out
    };
    for _ in 0..steps {
        let k1 = hamiltonian_vector(h, &y, r)?;
        let k2 = hamiltonian_vector(h, &axpy(&y, &k1, 0.5 * step), r)?;
        let k3 = hamiltonian_vector(h, &axpy(&y, &k2, 0.5 * step), r)?;
        let k4 = hamiltonian_vector(h, &axpy(&y, &k3, step), r)?;
        for i in 0..6 {
            y[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        y = ProductPoint::from_ambient(&y)?.to_ambient();
    }
    ProductPoint::from_ambient(&y)
}

/// The involution `(x₁,y₁,z₁,x₂,y₂,z₂) ↦ (−x₁,y₁,−z₁,x₂,−y₂,−z₂)`.
///
/// Pure sign flips, so `psi(psi(p)) == p` bit-for-bit.
pub fn psi(p: &ProductPoint) -> ProductPoint {
    ProductPoint {
        p1: SpherePoint {
            x: -p.p1.x,
            y: p.p1.y,
            z: -p.p1.z,
        },
        p2: SpherePoint {
            x: p.p2.x,
            y: -p.p2.y,
            z: -p.p2.z,
        },
    }
}

/// Deterministic generator used by every sampling routine.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn z1(x: &Ambient) -> f64 {
        x[2]
    }

    fn x1(x: &Ambient) -> f64 {
        x[0]
    }

    #[test]
    fn rejects_nonpositive_weight() {
        assert!(SymplecticWeight::new(0.0).is_err());
        assert!(SymplecticWeight::new(-1.0).is_err());
        assert!(SymplecticWeight::new(f64::NAN).is_err());
        assert!(SymplecticWeight::new(0.5).is_ok());
    }

    #[test]
    fn sphere_constructor_checks_norm() {
        assert!(SpherePoint::new(1.0, 1.0, 0.0).is_err());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = SpherePoint::new(h, h, 0.0).unwrap();
        assert!(p.norm_defect() <= 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric_and_vanishes_on_diagonal() {
        let mut rng = seeded_rng(7);
        let f = |x: &Ambient| x[0] * x[4] + x[2] * x[2] * x[5];
        let g = |x: &Ambient| x[1] - 0.3 * x[3] * x[2];
        let r = SymplecticWeight::new(2.0).unwrap();
        for _ in 0..200 {
            let p = ProductPoint::random(&mut rng);
            let fg = poisson_bracket(&f, &g, &p, r).unwrap();
            let gf = poisson_bracket(&g, &f, &p, r).unwrap();
            assert!((fg + gf).abs() < 1e-8);
            assert!(poisson_bracket(&f, &f, &p, r).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn height_bracket_matches_rotation_convention() {
        let r = SymplecticWeight::UNIT;
        let at = |p1: [f64; 3]| {
            let p = ProductPoint::new(SpherePoint::project(p1).unwrap(), SpherePoint::NORTH);
            poisson_bracket(&z1, &x1, &p, r).unwrap()
        };
        // d/dt x₁ along positive rotation is −y₁.
        assert!(at([1.0, 0.0, 0.0]).abs() < 1e-9);
        assert_abs_diff_eq!(at([0.0, 1.0, 0.0]), -1.0, epsilon = 1e-8);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = at([h, h, 0.0]);
        assert_abs_diff_eq!(v, -h, epsilon = 1e-8);

        // Same number from the integrator: finite difference of x₁ along the flow.
        let p = ProductPoint::new(SpherePoint::new(h, h, 0.0).unwrap(), SpherePoint::NORTH);
        let tau = 1e-4;
        let fwd = hamiltonian_flow(&z1, &p, r, tau, 1e-5).unwrap();
        let bwd = hamiltonian_flow(&z1, &p, r, -tau, 1e-5).unwrap();
        let rate = (fwd.p1.x() - bwd.p1.x()) / (2.0 * tau);
        assert_abs_diff_eq!(rate, v, epsilon = 1e-7);
    }

    #[test]
    fn non_finite_field_is_an_evaluation_error() {
        let bad = |_: &Ambient| f64::NAN;
        let p = ProductPoint::new(SpherePoint::NORTH, SpherePoint::SOUTH);
        let err = poisson_bracket(&bad, &z1, &p, SymplecticWeight::UNIT).unwrap_err();
        assert!(matches!(err, Error::Evaluation(_)));
    }

    #[test]
    fn flow_rejects_bad_step_and_is_identity_at_zero() {
        let p = ProductPoint::random(&mut seeded_rng(1));
        let r = SymplecticWeight::UNIT;
        assert!(matches!(
            hamiltonian_flow(&z1, &p, r, 1.0, 0.0),
            Err(Error::Parameter(_))
        ));
        assert!(hamiltonian_flow(&z1, &p, r, 1.0, -1e-3).is_err());
        assert_eq!(hamiltonian_flow(&z1, &p, r, 0.0, 1e-3).unwrap(), p);
    }

    #[test]
    fn psi_swaps_the_pole_pairs() {
        let ns = ProductPoint::new(SpherePoint::NORTH, SpherePoint::SOUTH);
        let sn = ProductPoint::new(SpherePoint::SOUTH, SpherePoint::NORTH);
        assert_eq!(psi(&ns).to_ambient(), sn.to_ambient());
        assert_eq!(psi(&psi(&ns)), ns);
    }
}
