//! The ten acceptance criteria at their stated tolerances. Run with
//! `cargo test -p camlab-cli --test acceptance -- --nocapture` to see one
//! PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::process::Command;

use camlab::displace::{displaceable_in_window, point_with_heights};
use camlab::quasi_state::{plane_grid, profile_family, punctured_cover, partition_of_unity, Axiom, BaseMap, NphRefusal};
use camlab::reduction::curve;
use camlab::sphere::seeded_rng;
use camlab::{
    area, b_of_d, classify_fiber, eval_h, eval_h_s, eval_j, genus2_instance, hamiltonian_flow, heaviness_report,
    lift, nph_stem_certificate, poisson_bracket, psi, reduce, s_of_c, simplicity_scan, stem_check, tau,
    two_fiber_separation, window, AnnulusPoint, AveragedQuasiState, CouplingFunction, Error, FiberTopology,
    MomentSystem, MomentValue, PointState, ProductPoint, Profile, PullbackFunction, QuasiState, Region,
    SymplecticWeight, VerdictTag,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn weights() -> [SymplecticWeight; 3] {
    [0.5, 1.0, 2.0].map(|r| SymplecticWeight::new(r).unwrap())
}

/// `s = k/21`, `k = 1..=21`: 21 values avoiding the excluded corner `(0, 0)`.
fn s_grid() -> Vec<f64> {
    (1..=21).map(|k| k as f64 / 21.0).collect()
}

fn area_identities() -> Outcome {
    let whole = area(1.0, -1.0).map_err(|e| e.to_string())?.value;
    ensure!((whole - 1.0).abs() <= 1e-12, "area(1, -1) = {whole}");
    let half = area(1.0, -0.5).map_err(|e| e.to_string())?.value;
    ensure!((half - 0.5).abs() <= 1e-6, "area(1, -1/2) = {half}");
    let mut worst = 0.0f64;
    for s in s_grid() {
        let v = area(s, -s).map_err(|e| e.to_string())?.value;
        worst = worst.max((v - (-s).acos() / PI).abs());
    }
    ensure!(worst <= 1e-12, "pinched closed form off by {worst:e}");
    Ok(format!("|area(1,-1)-1| = {:.1e}, |area(1,-1/2)-1/2| = {:.1e}, pinched max dev {worst:.1e}", (whole - 1.0).abs(), (half - 0.5).abs()))
}

fn monotonicity() -> Outcome {
    let mut min_gap = f64::INFINITY;
    for s in s_grid() {
        let bs: Vec<f64> = (0..50).map(|k| if k == 49 { 0.0 } else { -s + s * k as f64 / 49.0 }).collect();
        let values: Vec<f64> = bs.iter().map(|&b| area(s, b).map(|r| r.value)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for k in 1..values.len() {
            let gap = values[k - 1] - values[k];
            ensure!(gap > 0.0, "area not decreasing at s = {s}, b = {}", bs[k]);
            if k > 1 {
                ensure!(gap > 1e-8, "gap {gap:e} at s = {s}, b = {}", bs[k]);
                min_gap = min_gap.min(gap);
            }
        }
    }
    Ok(format!("21 x 50 grid strictly decreasing, min gap away from pinched end {min_gap:.2e}"))
}

fn parameter_endpoints() -> Outcome {
    let top = s_of_c(-1.0).map_err(|e| e.to_string())?;
    ensure!((top - 1.0).abs() <= 1e-9, "s_-1 = {top}");
    let bottom = s_of_c(-0.5).map_err(|e| e.to_string())?;
    ensure!(bottom.abs() <= 1e-6, "s_-1/2 = {bottom}");
    let cs: Vec<f64> = (0..21).map(|k| if k == 20 { -0.5 } else { -1.0 + 0.5 * k as f64 / 20.0 }).collect();
    let ss: Vec<f64> = cs.iter().map(|&c| s_of_c(c)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure!(ss.windows(2).all(|w| w[1] < w[0]), "s_c not monotone: {ss:?}");
    let grid: Vec<f64> = (0..10).map(|k| if k == 9 { -0.5 } else { -1.0 + 0.5 * k as f64 / 9.0 }).collect();
    let mut defined = 0;
    let mut worst = 0.0f64;
    for &c in &grid {
        let s = s_of_c(c).map_err(|e| e.to_string())?;
        for &d in &grid {
            match b_of_d(s, d) {
                Ok(r) => {
                    defined += 1;
                    worst = worst.max(r.residual);
                }
                Err(Error::Domain(_)) => {}
                Err(e) => return Err(format!("b_of_d(c = {c}, d = {d}): {e}")),
            }
        }
    }
    ensure!(worst < 1e-8, "b_of_d residual {worst:e}");
    ensure!(defined > 0, "no defined (c, d) pair");
    Ok(format!("s_-1 = {top}, s_-1/2 = {bottom:.1e}, {defined}/100 roots with residual <= {worst:.1e}"))
}

fn listed_couplings() -> Vec<CouplingFunction> {
    [
        "0.5*z1*z2",
        "z1*z2",
        "0",
        "z1*z2 + 0.3*z1^3 - 0.1*z2 + 0.05*z1^2*z2",
        "0.2*z1^2 - 0.1*z2^3 + 0.05*z1*z2^2",
    ]
    .iter()
    .map(|s| CouplingFunction::parse(s).unwrap())
    .collect()
}

fn noether() -> Outcome {
    let mut rng = seeded_rng(4);
    let mut worst_bracket = 0.0f64;
    let mut worst_drift = 0.0f64;
    for r in weights() {
        for f in listed_couplings() {
            let sys = MomentSystem::new(r, f);
            for _ in 0..1000 {
                let p = ProductPoint::random(&mut rng);
                let b = poisson_bracket(&sys.j_field(), &sys.h_field(), &p, r).map_err(|e| e.to_string())?;
                worst_bracket = worst_bracket.max(b.abs());
            }
            for _ in 0..4 {
                let mut p = ProductPoint::random(&mut rng);
                let h0 = eval_h(&sys, &p);
                for _ in 0..10 {
                    p = hamiltonian_flow(&sys.j_field(), &p, r, 1.0, 1e-2).map_err(|e| e.to_string())?;
                    worst_drift = worst_drift.max((eval_h(&sys, &p) - h0).abs());
                }
            }
        }
    }
    ensure!(worst_bracket < 1e-8, "|{{J, H}}| reaches {worst_bracket:e}");
    ensure!(worst_drift < 1e-6, "H drifts by {worst_drift:e} along the J flow");
    Ok(format!("max |{{J,H}}| = {worst_bracket:.1e} over 15000 points, max H drift on [0,10] = {worst_drift:.1e}"))
}

fn windows_and_stems() -> Outcome {
    let mut worst = 0.0f64;
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for r in weights() {
            let w = window(r, &CouplingFunction::for_s(s)).map_err(|e| e.to_string())?;
            worst = worst.max((w.m + s * r.value()).abs()).max(w.big_m.abs());
        }
    }
    ensure!(worst <= 1e-9, "window off (-sR, 0) by {worst:e}");
    let mut checked = 0;
    let specs = [
        "z1*z2",
        "z1*z2 + 0.3*z1^3 - 0.1*z2 + 0.05*z1^2*z2",
        "z1*z2 + 1e-12*z1^2",
        "z1*z2 + 1e-9*z1^2",
        "0.5*z1*z2",
        "0",
        "0.2*z1^2 - 0.1*z2^3 + 0.05*z1*z2^2",
    ];
    for spec in specs {
        let f = CouplingFunction::parse(spec).unwrap();
        for r in weights() {
            let w = window(r, &f).map_err(|e| e.to_string())?;
            let v = stem_check(r, &f).map_err(|e| e.to_string())?;
            let fired = v.tag == VerdictTag::SuperheavyCited;
            ensure!(fired == (w.grid_sup < 1e-10), "stem check on {spec}, R = {}: fired {fired}, grid sup {:e}", r.value(), w.grid_sup);
            checked += 1;
        }
    }
    Ok(format!("15 windows within {worst:.1e}; stem detection consistent on {checked} (f, R) cases"))
}

fn psi_certificates() -> Outcome {
    let mut rng = seeded_rng(6);
    for _ in 0..1000 {
        let p = ProductPoint::random(&mut rng);
        ensure!(psi(&psi(&p)) == p, "psi is not an involution at {p:?}");
        for r in weights() {
            ensure!(eval_j(r, &psi(&p)) == -eval_j(r, &p), "J o psi != -J at {p:?}");
        }
    }
    let systems: Vec<MomentSystem> = weights()
        .into_iter()
        .map(|r| MomentSystem::new(r, CouplingFunction::for_s(0.5)))
        .collect();
    let wins: Vec<_> = systems.iter().map(|s| window(s.r, &s.f).unwrap()).collect();
    let mut on_slice = 0;
    let mut worst_excess = f64::INFINITY;
    let mut k = 0;
    while k < 1000 {
        let i = k % 3;
        let sys = &systems[i];
        let w = &wins[i];
        let target = if k % 4 == 0 {
            // A value on the a = 0 slice below the window.
            let z2: f64 = rng.random_range(-1.0..1.0) * (1.0 / sys.r.value()).min(1.0);
            let p = point_with_heights(-sys.r.value() * z2, z2, rng.random_range(-PI..PI), rng.random_range(-PI..PI)).unwrap();
            let v = sys.phi(&p);
            if w.contains(v.b) {
                continue;
            }
            MomentValue::new(0.0, v.b)
        } else {
            sys.phi(&ProductPoint::random(&mut rng))
        };
        if target.a == 0.0 {
            on_slice += 1;
        }
        let v = displaceable_in_window(sys, w, target, 1000, k as u64);
        ensure!(v.tag == VerdictTag::DisplaceableByPsi, "{target:?}: {:?}", v.tag);
        let e = v.empirical.ok_or("no empirical check")?;
        ensure!(e.samples == 1000, "{target:?}: only {} fiber samples", e.samples);
        ensure!(e.fiber_residual <= 1e-8, "{target:?}: fiber residual {:e}", e.fiber_residual);
        ensure!(e.agrees && e.min_distance >= v.margin - 1e-6, "{target:?}: min distance {} vs margin {}", e.min_distance, v.margin);
        worst_excess = worst_excess.min(e.min_distance - v.margin);
        k += 1;
    }
    Ok(format!("1000 targets ({on_slice} on a = 0) x 1000 samples; min(distance - margin) = {worst_excess:.1e}; psi checks exact"))
}

fn separation() -> Outcome {
    let mut lines = Vec::new();
    for l in [0.0, 0.1, 0.2] {
        let rep = two_fiber_separation(&CouplingFunction::scaled_product(l)).map_err(|e| e.to_string())?;
        for c in &rep.checks {
            ensure!(c.holds, "lambda = {l}, c = {}: {c:?}", c.c);
            ensure!(c.margin >= 0.25 - l - 1e-8, "lambda = {l}, c = {}: margin {}", c.c, c.margin);
        }
        ensure!(rep.verdicts.len() == 2 && rep.verdicts.iter().all(|v| v.tag == VerdictTag::NonDisplaceableCited), "lambda = {l}: verdicts");
        lines.push(format!("{l}: {:.3}/{:.3}", rep.checks[0].margin, rep.checks[1].margin));
    }
    let out = Command::new(env!("CARGO_BIN_EXE_camlab"))
        .args(["separate", "--lambda", "0.3"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.code() == Some(4), "lambda = 0.3 exits with {:?}", out.status.code());
    Ok(format!("margins {}; lambda = 0.3 exits 4", lines.join(", ")))
}

fn quasi_states() -> Outcome {
    let y1 = vec![0.0, -0.5];
    let y2 = vec![0.0, -1.0];
    let zs = AveragedQuasiState::new(y1.clone(), y2.clone()).map_err(|e| e.to_string())?;
    let base = BaseMap::System { system: MomentSystem::coupled(SymplecticWeight::UNIT, 1.0) };
    let family: Vec<PullbackFunction> = profile_family(2, 200, 8, &[-2.0, -1.5], &[2.0, 1.5])
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|p| PullbackFunction::new(base.clone(), p))
        .collect();
    let pairs: Vec<(usize, usize)> = (1..200).map(|i| (i - 1, i)).collect();
    let rep = camlab::axiom_suite(|f| zs.eval(f), &family, &pairs, &[y1.clone(), y2.clone()]).map_err(|e| e.to_string())?;
    ensure!(rep.all_passed, "failed axioms {:?}", rep.failed());
    for c in &rep.checks {
        ensure!(c.worst_residual < 1e-9, "{:?} residual {:e}", c.axiom, c.worst_residual);
    }
    ensure!(rep.check(Axiom::Vanishing).tested > 0, "vanishing never exercised");

    let t = |s: &str| tau(&zs, &Region::parse(s).unwrap()).map(|q| q.value);
    let single = t("point(0, -0.5)").map_err(|e| e.to_string())?;
    let pair = t("point(0, -0.5); point(0, -1)").map_err(|e| e.to_string())?;
    let disjoint = t("box(0.25..1, -2..2)").map_err(|e| e.to_string())?;
    ensure!((single - 0.5).abs() <= 1e-6 && (pair - 1.0).abs() <= 1e-6 && disjoint.abs() <= 1e-6, "tau = {single}, {pair}, {disjoint}");

    let union = heaviness_report(&zs, &[y1.clone(), y2.clone()]).map_err(|e| e.to_string())?;
    ensure!(union.superheavy.holds_on_class, "union not superheavy on the class");
    for y in [&y1, &y2] {
        let r = heaviness_report(&zs, std::slice::from_ref(y)).map_err(|e| e.to_string())?;
        ensure!(r.pseudoheavy.holds, "fiber over {y:?} not pseudoheavy");
        let ce = r.heavy.counterexample.ok_or(format!("no heavy counterexample for {y:?}"))?;
        ensure!(ce.zeta == 0.5 && ce.bound == 1.0 && !r.heavy.holds_on_class, "counterexample {} < {}", ce.zeta, ce.bound);
    }
    let scan = simplicity_scan(&zs, &[vec![y1.clone()], vec![y2.clone()], vec![y1.clone(), y2.clone()]]).map_err(|e| e.to_string())?;
    ensure!(scan.violators == vec![0, 1] && !scan.simple, "violators {:?}", scan.violators);

    let g = genus2_instance(-1.0, 1.0).map_err(|e| e.to_string())?;
    let both = heaviness_report(&g, &[vec![-1.0], vec![1.0]]).map_err(|e| e.to_string())?;
    ensure!(both.superheavy.holds_on_class, "genus-2 union not superheavy");
    for c in [-1.0, 1.0] {
        let r = heaviness_report(&g, &[vec![c]]).map_err(|e| e.to_string())?;
        ensure!(r.pseudoheavy.holds && !r.heavy.holds_on_class, "genus-2 fiber over {c}: pseudoheavy {} heavy {}", r.pseudoheavy.holds, r.heavy.holds_on_class);
    }
    let tg = tau(&g, &Region::parse("point(-1)").unwrap()).map_err(|e| e.to_string())?.value;
    ensure!((tg - 0.5).abs() <= 1e-6, "genus-2 tau = {tg}");
    Ok(format!("axioms pass on 200 profiles; tau = {single}/{pair}/{disjoint}; tags reproduced for both presets"))
}

fn nph_certificate() -> Outcome {
    let p = [0.0, -0.5];
    let zs = PointState::new(p.to_vec()).map_err(|e| e.to_string())?;
    let grid = plane_grid([-2.2, -2.2], [2.2, 2.2], 100);
    ensure!(grid.len() == 10_000, "grid has {} points", grid.len());
    let cover = punctured_cover([-2.2, -2.2], [2.2, 2.2], p, 0.3).map_err(|e| e.to_string())?;
    let mut defect = 0.0f64;
    let mut covered = 0;
    for y in &grid {
        if let Some(rho) = partition_of_unity(&cover, y) {
            covered += 1;
            defect = defect.max((rho.iter().sum::<f64>() - 1.0).abs());
        }
    }
    ensure!(defect <= 1e-12, "partition defect {defect:e}");
    let v = Region::parse("ball(0.3; 0, -0.5)").unwrap();
    let h = Profile::constant(1.0).plus(Profile::bump(v, 0.2).scaled(-1.0));
    let cert = nph_stem_certificate(&zs, &grid, &p, 0.3, &h, &cover).map_err(|e| e.to_string())?;
    ensure!(cert.terms.iter().all(|t| *t <= 0.0), "terms {:?}", cert.terms);
    ensure!(cert.zeta_h <= 0.0 && cert.partition_max_defect <= 1e-12, "zeta(H) = {}", cert.zeta_h);
    ensure!(cert.conclusion == "ζ(Φ*H) ≤ 0", "conclusion: {}", cert.conclusion);
    let gap = nph_stem_certificate(&zs, &grid, &p, 0.3, &h, &cover[..3]);
    ensure!(matches!(gap, Err(NphRefusal::CoverGap { .. })), "cover gap not refused: {gap:?}");
    let two = AveragedQuasiState::new(p.to_vec(), vec![1.0, 1.0]).unwrap();
    let pos = nph_stem_certificate(&two, &grid, &p, 0.3, &h, &cover);
    ensure!(matches!(pos, Err(NphRefusal::PositiveTerm { .. })), "positive term not refused: {pos:?}");
    Ok(format!("partition defect {defect:.1e} on {covered} covered grid points; {} terms <= 0; both refusals fire", cert.terms.len()))
}

fn reduction_fidelity() -> Outcome {
    let mut rng = seeded_rng(10);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let q = AnnulusPoint::new(rng.random_range(-0.999..0.999), rng.random_range(-PI..PI)).unwrap();
        let back = reduce(&lift(&q, rng.random_range(-PI..PI))).map_err(|e| e.to_string())?;
        let dt = (back.theta - q.theta).rem_euclid(2.0 * PI);
        worst = worst.max((back.z - q.z).abs()).max(dt.min(2.0 * PI - dt));
    }
    ensure!(worst <= 1e-12, "reduce o lift off by {worst:e}");
    let mut worst_h = 0.0f64;
    for s in [0.1, 0.5, 0.9, 1.0] {
        for t in [0.05, 0.3, 0.7, 1.0] {
            let b = -s + t * s;
            let c = curve(s, b, 200).map_err(|e| e.to_string())?;
            for q in &c.points {
                let p = lift(q, rng.random_range(-PI..PI));
                worst_h = worst_h.max((eval_h_s(s, &p) - b).abs());
            }
        }
    }
    ensure!(worst_h <= 1e-10, "H^s on lifts off by {worst_h:e}");
    let cases = [
        ((1.0, -1.0), FiberTopology::Sphere),
        ((0.5, -0.5), FiberTopology::DoublyPinchedTorus),
        ((1.0, -0.5), FiberTopology::Torus),
    ];
    for ((s, b), want) in cases {
        ensure!(classify_fiber(s, b) == want, "classify({s}, {b}) = {:?}", classify_fiber(s, b));
    }
    Ok(format!("roundtrip {worst:.1e}, H^s residual {worst_h:.1e}, three cases classified"))
}

#[test]
fn primary_criteria() {
    let criteria: [Criterion; 10] = [
        ("area identities", area_identities),
        ("area monotonicity", monotonicity),
        ("parameter endpoints", parameter_endpoints),
        ("Noether commutation", noether),
        ("windows and stem detection", windows_and_stems),
        ("involution certificates", psi_certificates),
        ("two-fiber separation", separation),
        ("quasi-state suite", quasi_states),
        ("NPH-stem certificate", nph_certificate),
        ("reduction fidelity", reduction_fidelity),
    ];
    let results: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria.iter().map(|(_, f)| scope.spawn(*f)).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("panicked".into())))
            .collect()
    });
    let mut failed = Vec::new();
    for (i, ((name, _), r)) in criteria.iter().zip(&results).enumerate() {
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
