//! Numerical laboratory for the coupled angular momenta `Φ_{R,f} = (J_R, H_f)`
//! on `S² × S²` and for partial symplectic quasi-states evaluated on functions
//! pulled back by moment maps.
//!
//! Modules:
//! - [`sphere`]: points, Poisson brackets, Hamiltonian flows, the involution `ψ`;
//! - [`moment`]: the moment maps, fiber sampling and fiber topology;
//! - [`reduction`]: the reduced annulus, σ-areas and the parameters `s_c`, `b_d`;
//! - [`displace`]: displaceability windows, stems and verdicts;
//! - [`quasi_state`]: averaged quasi-states, quasi-measures and heaviness reports.

pub mod displace;
pub mod error;
pub mod moment;
pub mod poly;
pub mod quad;
pub mod quasi_state;
pub mod reduction;
pub mod sphere;

pub use displace::{
    aleph_bracket, annulus_displaceable, displaceable, f_rf, stem_check, two_fiber_separation,
    window, Certificate, Citation, DisplacementWindow, Verdict, VerdictTag,
};
pub use error::{Error, ErrorKind, Result};
pub use moment::{
    classify_fiber, eval_h, eval_h_s, eval_j, fiber_sample, moment_image, CouplingFunction,
    FiberSample, FiberTopology, MomentImage, MomentSystem, MomentValue,
};
pub use poly::Polynomial;
pub use quasi_state::{
    average, axiom_suite, genus2_instance, heaviness_report, nph_stem_certificate, simplicity_scan,
    tau, zeta_eval, AveragedQuasiState, PointState, Profile, PullbackFunction, QuasiState, Region,
};
pub use reduction::{
    area, b_of_d, curve, lift, pinched_set, reduce, s_of_c, AnnulusPoint, AreaResult,
    ParameterRoot, ReducedCurve,
};
pub use sphere::{
    hamiltonian_flow, poisson_bracket, psi, Ambient, ProductPoint, ScalarField, SpherePoint,
    SymplecticWeight,
};
