//! One runner per subcommand. Each returns a [`ReportBundle`] whose JSON
//! carries every number shown in its tables and figures.

use camlab::displace::{self, sweep, VerdictTag};
use camlab::quasi_state::{
    genus2_base, plane_grid, profile_family, punctured_cover, Axiom, BaseMap, HeavinessReport, LINE_VARS,
};
use camlab::reduction::{area_with_tol, AREA_QUAD_TOL};
use camlab::{
    annulus_displaceable, area, b_of_d, classify_fiber, curve, displaceable, fiber_sample, genus2_instance,
    heaviness_report, nph_stem_certificate, pinched_set, s_of_c, simplicity_scan, stem_check, tau,
    two_fiber_separation, window, AveragedQuasiState, Citation, CouplingFunction, Error, MomentSystem, MomentValue,
    PointState, Profile, PullbackFunction, QuasiState, Region, SymplecticWeight,
};
use serde::Serialize;
use serde_json::json;

use crate::config::{linspace, parse_grid_pair, RunConfig, DEFAULT_F_SPEC};
use crate::report::{num, ReportBundle, Table};
use crate::svg;
use crate::{Cli, Command, Preset};

pub const DEFAULT_AREA_S_GRID: &str = "0:1:21";
pub const DEFAULT_SC_GRID: &str = "-1:-0.5:21";
pub const DEFAULT_BD_GRID: &str = "-1:-0.5:10;-1:-0.5:10";
pub const DEFAULT_SWEEP_GRID: &str = "-0.5:0.5:11;-1.5:0.5:21";

/// Minimum drop in area between neighbouring grid points counted as strict.
pub const MONOTONE_GAP: f64 = 1e-8;

type Output = Vec<(String, ReportBundle)>;

struct Globals<'a> {
    cli: &'a Cli,
}

impl Globals<'_> {
    fn config(&self, name: &str) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::new(name, self.cli.seed, None, self.cli.out.clone());
        if let Some(t) = &self.cli.tol {
            let v = cfg.param("tol", t)?;
            if !(v > 0.0) {
                return Err(Error::Parameter(format!("--tol must be positive, got {t}")));
            }
            cfg.tol = Some(v);
        }
        Ok(cfg)
    }

    fn grid<'s>(&'s self, default: &'s str) -> &'s str {
        self.cli.grid.as_deref().unwrap_or(default)
    }

    fn coupling(&self, cfg: &mut RunConfig) -> Result<CouplingFunction, Error> {
        let spec = self.cli.f_spec.as_deref().unwrap_or(DEFAULT_F_SPEC);
        cfg.option("f_spec", spec);
        CouplingFunction::parse(spec)
    }
}

pub fn dispatch(cli: &Cli) -> Result<Output, Error> {
    let g = Globals { cli };
    let one = |name: &str, b: ReportBundle| Ok(vec![(name.to_string(), b)]);
    match &cli.command {
        Command::Area { b_grid, b_points } => {
            let mut cfg = g.config("area")?;
            let s = cfg.grid("s", g.grid(DEFAULT_AREA_S_GRID))?;
            let b = match b_grid {
                Some(spec) => Some(cfg.grid("b", spec)?),
                None => {
                    cfg.option("b_points", b_points);
                    None
                }
            };
            one("area", cmd_area(cfg, &s, b.as_deref(), *b_points)?)
        }
        Command::Sc => {
            let mut cfg = g.config("sc")?;
            let c = cfg.grid("c", g.grid(DEFAULT_SC_GRID))?;
            one("sc", cmd_sc(cfg, &c)?)
        }
        Command::Bd => {
            let mut cfg = g.config("bd")?;
            let spec = g.grid(DEFAULT_BD_GRID);
            let (c, d) = parse_grid_pair(spec)?;
            cfg.grids.insert("c".into(), c.clone());
            cfg.grids.insert("d".into(), d.clone());
            one("bd", cmd_bd(cfg, &c.values, &d.values)?)
        }
        Command::Window { r } => {
            let mut cfg = g.config("window")?;
            let r = weight(&mut cfg, r)?;
            let f = g.coupling(&mut cfg)?;
            one("window", cmd_window(cfg, r, &f)?)
        }
        Command::Displace { r, a, b, samples } => {
            let mut cfg = g.config("displace")?;
            let r = weight(&mut cfg, r)?;
            let a = cfg.param("a", a)?;
            let b = cfg.param("b", b)?;
            cfg.option("samples", samples);
            let f = g.coupling(&mut cfg)?;
            one("displace", cmd_displace(cfg, r, f, MomentValue::new(a, b), *samples)?)
        }
        Command::Sweep { r, samples } => {
            let mut cfg = g.config("sweep")?;
            let r = weight(&mut cfg, r)?;
            let (a, b) = parse_grid_pair(g.grid(DEFAULT_SWEEP_GRID))?;
            cfg.grids.insert("a".into(), a.clone());
            cfg.grids.insert("b".into(), b.clone());
            cfg.option("samples", samples);
            let f = g.coupling(&mut cfg)?;
            one("sweep", cmd_sweep(cfg, r, f, &a.values, &b.values, *samples)?)
        }
        Command::Fiber { s, b, n_theta, n_phase } => {
            let mut cfg = g.config("fiber")?;
            let s = cfg.param("s", s)?;
            let b = cfg.param("b", b)?;
            cfg.option("n_theta", n_theta);
            cfg.option("n_phase", n_phase);
            one("fiber", cmd_fiber(cfg, s, b, *n_theta, *n_phase)?)
        }
        Command::Classify { s, b } => {
            let mut cfg = g.config("classify")?;
            let cases = match (s, b) {
                (Some(s), Some(b)) => vec![(cfg.param("s", s)?, cfg.param("b", b)?)],
                _ => STANDARD_CASES.to_vec(),
            };
            one("classify", cmd_classify(cfg, &cases))
        }
        Command::PlotAnnulus { s, b_list, points } => {
            let mut cfg = g.config("plot-annulus")?;
            let s = cfg.param("s", s)?;
            let bs = cfg.grid("b", b_list)?;
            cfg.option("points", points);
            one("plot-annulus", cmd_plot_annulus(cfg, s, &bs, *points)?)
        }
        Command::Qs { preset, c3, c4, profiles } => {
            let mut cfg = g.config("qs")?;
            cfg.option("profiles", profiles);
            match preset {
                Preset::Pair => {
                    cfg.option("preset", "pair");
                    one("qs", cmd_qs_pair(cfg, *profiles)?)
                }
                Preset::Genus2 => {
                    cfg.option("preset", "genus2");
                    let c3 = cfg.param("c3", c3)?;
                    let c4 = cfg.param("c4", c4)?;
                    one("qs", cmd_qs_genus2(cfg, c3, c4, *profiles)?)
                }
            }
        }
        Command::Separate { lambda } => {
            let mut cfg = g.config("separate")?;
            let f = match lambda {
                Some(l) => {
                    let l = cfg.param("lambda", l)?;
                    CouplingFunction::scaled_product(l)
                }
                None => g.coupling(&mut cfg)?,
            };
            one("separate", cmd_separate(cfg, &f)?)
        }
        Command::ReportAll => report_all(&g),
    }
}

fn weight(cfg: &mut RunConfig, text: &str) -> Result<SymplecticWeight, Error> {
    SymplecticWeight::new(cfg.param("r", text)?)
}

#[derive(Debug, Serialize)]
struct AreaRow {
    s: f64,
    b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    area: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<f64>,
    evaluations: usize,
    status: String,
    monotone: &'static str,
}

fn dedup(mut v: Vec<f64>) -> Vec<f64> {
    v.dedup();
    v
}

pub fn cmd_area(cfg: RunConfig, s_grid: &[f64], b_grid: Option<&[f64]>, b_points: usize) -> Result<ReportBundle, Error> {
    let tol = cfg.tol.unwrap_or(AREA_QUAD_TOL);
    let mut rows = Vec::new();
    let mut violations = 0;
    for &s in s_grid {
        let bs = match b_grid {
            Some(g) => g.to_vec(),
            None => dedup(linspace(-s, 0.0, b_points)),
        };
        let mut prev: Option<(f64, f64)> = None;
        for b in bs {
            let (area, error, evaluations, status) = match area_with_tol(s, b, tol) {
                Ok(r) => (Some(r.value), Some(r.estimated_error), r.evaluations, "ok".to_string()),
                Err(e) => (None, None, 0, e.to_string()),
            };
            let monotone = match (prev, area) {
                (_, None) => "n/a",
                (None, Some(_)) => "first",
                (Some((pb, pa)), Some(a)) => {
                    let gap = pa - a;
                    if b <= pb {
                        "unordered"
                    } else if gap > MONOTONE_GAP {
                        "strict"
                    } else if gap > 0.0 && pb == -s {
                        "pinched-edge"
                    } else {
                        violations += 1;
                        "violation"
                    }
                }
            };
            if let Some(a) = area {
                prev = Some((b, a));
            }
            rows.push(AreaRow { s, b, area, error, evaluations, status, monotone });
        }
    }
    let mut t = Table::new("area", &["s", "b", "area", "error", "evaluations", "status", "monotone"]);
    for r in &rows {
        t.push(vec![
            num(r.s),
            num(r.b),
            r.area.map(num).unwrap_or_default(),
            r.error.map(num).unwrap_or_default(),
            r.evaluations.to_string(),
            r.status.clone(),
            r.monotone.to_string(),
        ]);
    }
    let data = json!({
        "quadrature_tol": tol,
        "monotone": violations == 0,
        "violations": violations,
        "rows": rows,
    });
    Ok(ReportBundle::new(&cfg, data, &[]).with_table(t))
}

pub fn cmd_sc(cfg: RunConfig, c_grid: &[f64]) -> Result<ReportBundle, Error> {
    let mut t = Table::new("sc", &["c", "s_c", "status", "monotone"]);
    let mut rows = Vec::new();
    let mut prev: Option<f64> = None;
    let mut decreasing = true;
    for &c in c_grid {
        match s_of_c(c) {
            Ok(s) => {
                let m = match prev {
                    None => "first",
                    Some(p) if s < p => "decreasing",
                    Some(_) => {
                        decreasing = false;
                        "violation"
                    }
                };
                prev = Some(s);
                t.push(vec![num(c), num(s), "ok".into(), m.into()]);
                rows.push(json!({"c": c, "s_c": s, "status": "ok", "monotone": m}));
            }
            Err(e) => {
                t.push(vec![num(c), String::new(), e.to_string(), "n/a".into()]);
                rows.push(json!({"c": c, "status": e.to_string(), "monotone": "n/a"}));
            }
        }
    }
    let s_top = s_of_c(-1.0)?;
    let s_bottom = s_of_c(-0.5)?;
    let data = json!({
        "rows": rows,
        "decreasing": decreasing,
        "endpoints": {
            "s_at_minus_one": s_top,
            "s_at_minus_one_ok": (s_top - 1.0).abs() <= 1e-9,
            "s_at_minus_half": s_bottom,
            "s_at_minus_half_ok": s_bottom.abs() <= 1e-6,
        },
    });
    Ok(ReportBundle::new(&cfg, data, &[]).with_table(t))
}

pub fn cmd_bd(cfg: RunConfig, c_grid: &[f64], d_grid: &[f64]) -> Result<ReportBundle, Error> {
    let mut t = Table::new("bd", &["c", "d", "s_c", "b_d", "residual", "iterations", "status"]);
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for &c in c_grid {
        let s = s_of_c(c);
        for &d in d_grid {
            match s.clone().and_then(|sv| b_of_d(sv, d).map(|r| (sv, r))) {
                Ok((sv, r)) => {
                    worst = worst.max(r.residual);
                    t.push(vec![num(c), num(d), num(sv), num(r.value), num(r.residual), r.iterations.to_string(), "ok".into()]);
                    rows.push(json!({"c": c, "d": d, "s_c": sv, "b_d": r.value, "residual": r.residual, "iterations": r.iterations, "status": "ok"}));
                }
                Err(e) => {
                    t.push(vec![num(c), num(d), s.as_ref().map(|v| num(*v)).unwrap_or_default(), String::new(), String::new(), String::new(), e.to_string()]);
                    rows.push(json!({"c": c, "d": d, "status": e.to_string()}));
                }
            }
        }
    }
    let data = json!({"rows": rows, "max_residual": worst, "residual_ok": worst < 1e-8});
    Ok(ReportBundle::new(&cfg, data, &[]).with_table(t))
}

pub fn cmd_window(cfg: RunConfig, r: SymplecticWeight, f: &CouplingFunction) -> Result<ReportBundle, Error> {
    let w = window(r, f)?;
    let stem = stem_check(r, f)?;
    let mut t = Table::new("window", &["z", "F"]);
    let mut profile = Vec::new();
    for z in linspace(-w.z_limit, w.z_limit, 201) {
        let v = displace::f_rf(r, f, z)?;
        t.push(vec![num(z), num(v)]);
        profile.push([z, v]);
    }
    let data = json!({
        "r": r.value(),
        "coupling": f.to_string(),
        "window": w,
        "stem": stem,
        "profile": profile,
    });
    Ok(ReportBundle::new(&cfg, data, &stem.citations).with_table(t))
}

pub fn cmd_displace(
    cfg: RunConfig,
    r: SymplecticWeight,
    f: CouplingFunction,
    target: MomentValue,
    samples: usize,
) -> Result<ReportBundle, Error> {
    let sys = MomentSystem::new(r, f);
    let v = displaceable(&sys, target, samples, cfg.seed)?;
    let data = json!({"r": r.value(), "coupling": sys.f.to_string(), "tag": v.tag.label(), "verdict": v});
    Ok(ReportBundle::new(&cfg, data, &v.citations))
}

pub fn cmd_sweep(
    cfg: RunConfig,
    r: SymplecticWeight,
    f: CouplingFunction,
    a_values: &[f64],
    b_values: &[f64],
    samples: usize,
) -> Result<ReportBundle, Error> {
    let sys = MomentSystem::new(r, f);
    let rows = sweep(&sys, a_values, b_values, samples, cfg.seed)?;
    let w = window(r, &sys.f)?;
    let stem = stem_check(r, &sys.f)?;
    let mut t = Table::new("sweep", &["a", "b", "tag", "margin"]);
    let mut citations = vec![];
    for row in &rows {
        t.push(vec![num(row.a), num(row.b), row.tag.label().into(), num(row.margin)]);
        match row.tag {
            VerdictTag::DisplaceableByPsi => citations.push(Citation::InvolutionDisplacesOutsideWindow),
            VerdictTag::SuperheavyCited => citations.extend(stem.citations.iter().copied()),
            _ => {}
        }
    }
    let unknown: Vec<[f64; 2]> = rows
        .iter()
        .filter(|r| r.tag == VerdictTag::InsideWindowUnknown)
        .map(|r| [r.a, r.b])
        .collect();
    let cells: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| json!({"a": r.a, "b": r.b, "tag": r.tag.label(), "margin": r.margin}))
        .collect();
    let data = json!({
        "r": r.value(),
        "coupling": sys.f.to_string(),
        "window": w,
        "stem": stem.tag.label(),
        "a_values": a_values,
        "b_values": b_values,
        "unknown": unknown,
        "rows": cells,
    });
    let fig = svg::heat_map(&rows, a_values, b_values);
    Ok(ReportBundle::new(&cfg, data, &citations)
        .with_table(t)
        .with_figure("sweep.svg", fig))
}

pub fn cmd_fiber(cfg: RunConfig, s: f64, b: f64, n_theta: usize, n_phase: usize) -> Result<ReportBundle, Error> {
    let sample = fiber_sample(s, b, n_theta, n_phase)?;
    let topology = classify_fiber(s, b);
    let mut t = Table::new("fiber", &["x1", "y1", "z1", "x2", "y2", "z2"]);
    for p in &sample.points {
        t.push(p.to_ambient().iter().map(|v| num(*v)).collect());
    }
    let points: Vec<[f64; 6]> = sample.points.iter().map(|p| p.to_ambient()).collect();
    let data = json!({
        "s": s,
        "target": sample.target,
        "topology": topology,
        "case": topology.case(),
        "residual": sample.residual,
        "count": points.len(),
        "points": points,
    });
    Ok(ReportBundle::new(&cfg, data, &[]).with_table(t))
}

/// `(s, b)` for the sphere, the doubly pinched torus and a regular torus.
pub const STANDARD_CASES: [(f64, f64); 3] = [(1.0, -1.0), (0.5, -0.5), (0.5, -0.25)];

pub fn cmd_classify(cfg: RunConfig, cases: &[(f64, f64)]) -> ReportBundle {
    let mut t = Table::new("classify", &["s", "b", "topology", "case"]);
    let mut rows = Vec::new();
    for &(s, b) in cases {
        let topo = classify_fiber(s, b);
        t.push(vec![num(s), num(b), format!("{topo:?}"), topo.case().into()]);
        rows.push(json!({"s": s, "b": b, "topology": topo, "case": topo.case()}));
    }
    ReportBundle::new(&cfg, json!({ "rows": rows }), &[]).with_table(t)
}

pub fn cmd_plot_annulus(cfg: RunConfig, s: f64, bs: &[f64], points: usize) -> Result<ReportBundle, Error> {
    let pinched = pinched_set(s, 2)?;
    let mut curves = Vec::new();
    let mut areas = Vec::new();
    for &b in bs {
        let c = curve(s, b, points)?;
        areas.push(json!({"b": b, "area": area(s, b)?.value, "max_residual": c.max_residual()}));
        curves.push(c);
    }
    let fig = svg::annulus_figure(s, &curves);
    let line = (-s).acos();
    let data = json!({
        "s": s,
        "pinched_lines": [-line, line],
        "pinched_area": area(s, -s)?.value,
        "pinched_samples": pinched.points.len(),
        "curves": curves,
        "areas": areas,
        "markers": bs.iter().map(|b| ((1.0 - b) / (1.0 + s)).sqrt()).collect::<Vec<_>>(),
    });
    Ok(ReportBundle::new(&cfg, data, &[]).with_figure("annulus.svg", fig))
}

#[derive(Serialize)]
struct TagRow {
    subset: Vec<Vec<f64>>,
    tags: Vec<&'static str>,
}

/// Plain tags read off a heaviness report.
pub fn heaviness_tags(rep: &HeavinessReport) -> Vec<&'static str> {
    let mut tags = Vec::new();
    if rep.superheavy.holds_on_class {
        tags.push("superheavy");
    }
    if rep.heavy.holds_on_class {
        tags.push("heavy");
    } else {
        tags.push("not-heavy");
    }
    if rep.pseudoheavy.holds {
        tags.push("pseudoheavy");
    } else {
        tags.push("not-pseudoheavy");
    }
    tags
}

fn tag_table(name: &str, reports: &[HeavinessReport]) -> (Table, Vec<TagRow>) {
    let mut t = Table::new(name, &["subset", "tags", "heavy_counterexample_zeta", "heavy_counterexample_bound"]);
    let mut rows = Vec::new();
    for r in reports {
        let tags = heaviness_tags(r);
        let (z, b) = r
            .heavy
            .counterexample
            .as_ref()
            .map(|c| (num(c.zeta), num(c.bound)))
            .unwrap_or_default();
        t.push(vec![format!("{:?}", r.subset), tags.join(" "), z, b]);
        rows.push(TagRow { subset: r.subset.clone(), tags });
    }
    (t, rows)
}

fn tau_table(zs: &dyn QuasiState, regions: &[&str]) -> Result<(Table, Vec<serde_json::Value>), Error> {
    let mut t = Table::new("tau", &["region", "tau", "brute_force"]);
    let mut rows = Vec::new();
    for spec in regions {
        let region = Region::parse(spec)?;
        let q = tau(zs, &region)?;
        t.push(vec![spec.to_string(), num(q.value), num(q.brute_force)]);
        rows.push(json!({"region": spec, "tau": q.value, "brute_force": q.brute_force}));
    }
    Ok((t, rows))
}

/// Supports of the pair preset.
pub const PAIR_SUPPORTS: [[f64; 2]; 2] = [[0.0, -0.5], [0.0, -1.0]];

pub fn cmd_qs_pair(cfg: RunConfig, n_profiles: usize) -> Result<ReportBundle, Error> {
    let [y1, y2] = PAIR_SUPPORTS.map(|y| y.to_vec());
    let zs = AveragedQuasiState::new(y1.clone(), y2.clone())?;
    let base = BaseMap::System {
        system: MomentSystem::coupled(SymplecticWeight::UNIT, 1.0),
    };
    let family: Vec<PullbackFunction> = profile_family(2, n_profiles, cfg.seed, &[-2.0, -1.5], &[2.0, 1.5])?
        .into_iter()
        .map(|p| PullbackFunction::new(base.clone(), p))
        .collect();
    let pairs: Vec<(usize, usize)> = (1..family.len()).map(|i| (i - 1, i)).collect();
    let samples = vec![y1.clone(), y2.clone()];
    let axioms = camlab::axiom_suite(|f| zs.eval(f), &family, &pairs, &samples)?;

    let (tau_t, tau_rows) = tau_table(
        &zs,
        &["point(0, -0.5)", "point(0, -1)", "point(0, -0.5); point(0, -1)", "box(0.25..1, -2..2)"],
    )?;
    let reports = vec![
        heaviness_report(&zs, &[y1.clone(), y2.clone()])?,
        heaviness_report(&zs, std::slice::from_ref(&y1))?,
        heaviness_report(&zs, std::slice::from_ref(&y2))?,
    ];
    let (tag_t, tags) = tag_table("heaviness", &reports);
    let simplicity = simplicity_scan(&zs, &[vec![y1.clone()], vec![y2.clone()], vec![y1.clone(), y2.clone()]])?;

    let dirac = PointState::new(y1.clone())?;
    let p = [y1[0], y1[1]];
    let grid = plane_grid([-2.2, -2.2], [2.2, 2.2], 100);
    let cover = punctured_cover([-2.2, -2.2], [2.2, 2.2], p, 0.3)?;
    let v = Region::parse("ball(0.3; 0, -0.5)")?;
    let h = Profile::constant(1.0).plus(Profile::bump(v, 0.2).scaled(-1.0));
    let nph = match nph_stem_certificate(&dirac, &grid, &p, 0.3, &h, &cover) {
        Ok(c) => json!({"issued": true, "certificate": c}),
        Err(r) => json!({"issued": false, "refusal": r, "reason": r.to_string()}),
    };

    let data = json!({
        "preset": "pair",
        "supports": [y1, y2],
        "profiles": family.len(),
        "axioms": axioms,
        "failed_axioms": axioms.failed(),
        "tau": tau_rows,
        "heaviness_tags": tags,
        "heaviness": reports,
        "simplicity": simplicity,
        "nph_single_support": nph,
    });
    Ok(ReportBundle::new(&cfg, data, &[])
        .with_table(tau_t)
        .with_table(tag_t))
}

pub fn cmd_qs_genus2(cfg: RunConfig, c3: f64, c4: f64, n_profiles: usize) -> Result<ReportBundle, Error> {
    let zs = genus2_instance(c3, c4)?;
    let base = genus2_base();
    let lo = c3.min(c4) - 1.0;
    let hi = c3.max(c4) + 1.0;
    let family: Vec<PullbackFunction> = profile_family(1, n_profiles, cfg.seed, &[lo], &[hi])?
        .into_iter()
        .map(|p| PullbackFunction::new(base.clone(), p))
        .collect();
    let pairs: Vec<(usize, usize)> = (1..family.len()).map(|i| (i - 1, i)).collect();
    let axioms = camlab::axiom_suite(|f| zs.eval(f), &family, &pairs, &[vec![c3], vec![c4]])?;
    let regions = [format!("point({c3})"), format!("point({c4})"), format!("point({c3}); point({c4})")];
    let refs: Vec<&str> = regions.iter().map(|s| s.as_str()).collect();
    let (tau_t, tau_rows) = tau_table(&zs, &refs)?;
    let reports = vec![
        heaviness_report(&zs, &[vec![c3], vec![c4]])?,
        heaviness_report(&zs, &[vec![c3]])?,
        heaviness_report(&zs, &[vec![c4]])?,
    ];
    let (tag_t, tags) = tag_table("heaviness", &reports);
    let data = json!({
        "preset": "genus2",
        "vars": LINE_VARS,
        "supports": [c3, c4],
        "profiles": family.len(),
        "axioms": axioms,
        "failed_axioms": axioms.failed(),
        "vanishing_tested": axioms.check(Axiom::Vanishing).tested,
        "tau": tau_rows,
        "heaviness_tags": tags,
        "heaviness": reports,
    });
    Ok(ReportBundle::new(&cfg, data, &[])
        .with_table(tau_t)
        .with_table(tag_t))
}

pub fn cmd_separate(cfg: RunConfig, f: &CouplingFunction) -> Result<ReportBundle, Error> {
    let rep = two_fiber_separation(f)?;
    let bracket = displace::aleph_bracket();
    let citations: Vec<Citation> = rep.verdicts.iter().flat_map(|v| v.citations.clone()).collect();
    let mut t = Table::new("separate", &["c", "window_lo", "window_hi", "observed_lo", "observed_hi", "max_abs_a", "margin", "holds"]);
    for c in &rep.checks {
        t.push(vec![
            num(c.c),
            num(c.open_window[0]),
            num(c.open_window[1]),
            num(c.observed_b[0]),
            num(c.observed_b[1]),
            num(c.max_abs_a),
            num(c.margin),
            c.holds.to_string(),
        ]);
    }
    let data = json!({"separation": rep, "aleph": bracket});
    Ok(ReportBundle::new(&cfg, data, &citations).with_table(t))
}

/// Annulus comparison used by `report-all`: `s = s_c` for `c = −3/4` against
/// `D(1, d)` over a d-grid, for the pinched set and for `b = b_d − 10⁻³`.
fn annulus_table(cfg: RunConfig) -> Result<ReportBundle, Error> {
    let c = -0.75;
    let s = s_of_c(c)?;
    let mut t = Table::new("annulus", &["d", "b", "pinched", "tag", "margin"]);
    let mut rows = Vec::new();
    let mut citations = Vec::new();
    for d in linspace(-1.0, -0.5, 11) {
        let mut bs = vec![-s];
        if let Ok(root) = b_of_d(s, d) {
            bs.push(root.value - 1e-3);
        }
        for b in bs {
            let v = annulus_displaceable(s, b, d)?;
            citations.extend(v.citations.iter().copied());
            t.push(vec![num(d), num(b), (b == -s).to_string(), v.tag.label().into(), num(v.margin)]);
            rows.push(json!({"d": d, "b": b, "verdict": v}));
        }
    }
    let data = json!({"c": c, "s_c": s, "rows": rows});
    Ok(ReportBundle::new(&cfg, data, &citations).with_table(t))
}

fn report_all(g: &Globals) -> Result<Output, Error> {
    let cfg = |name: &str| g.config(name);
    let mut out = Vec::new();
    let mut c = cfg("area")?;
    let s = c.grid("s", DEFAULT_AREA_S_GRID)?;
    c.option("b_points", 50);
    out.push(("area".into(), cmd_area(c, &s, None, 50)?));
    let mut c = cfg("sc")?;
    let grid = c.grid("c", DEFAULT_SC_GRID)?;
    out.push(("sc".into(), cmd_sc(c, &grid)?));
    let mut c = cfg("bd")?;
    let (cg, dg) = parse_grid_pair(DEFAULT_BD_GRID)?;
    c.grids.insert("c".into(), cg.clone());
    c.grids.insert("d".into(), dg.clone());
    out.push(("bd".into(), cmd_bd(c, &cg.values, &dg.values)?));
    for (name, spec) in [("window-s-half", "0.5*z1*z2"), ("window-stem", "z1*z2")] {
        let mut c = cfg("window")?;
        c.option("f_spec", spec);
        out.push((name.into(), cmd_window(c, SymplecticWeight::UNIT, &CouplingFunction::parse(spec)?)?));
    }
    for (name, spec) in [("sweep-s-half", "0.5*z1*z2"), ("sweep-stem", "z1*z2")] {
        let mut c = cfg("sweep")?;
        let (a, b) = parse_grid_pair(DEFAULT_SWEEP_GRID)?;
        c.grids.insert("a".into(), a.clone());
        c.grids.insert("b".into(), b.clone());
        c.option("f_spec", spec);
        c.option("samples", 0);
        out.push((
            name.into(),
            cmd_sweep(c, SymplecticWeight::UNIT, CouplingFunction::parse(spec)?, &a.values, &b.values, 0)?,
        ));
    }
    let mut c = cfg("displace")?;
    c.param("a", "0.3")?;
    c.param("b", "0")?;
    c.option("f_spec", DEFAULT_F_SPEC);
    c.option("samples", 200);
    out.push((
        "displace".into(),
        cmd_displace(c, SymplecticWeight::UNIT, CouplingFunction::for_s(0.5), MomentValue::new(0.3, 0.0), 200)?,
    ));
    out.push(("classify".into(), cmd_classify(cfg("classify")?, &STANDARD_CASES)));
    let mut c = cfg("fiber")?;
    c.param("s", "0.5")?;
    c.param("b", "-0.25")?;
    out.push(("fiber".into(), cmd_fiber(c, 0.5, -0.25, 100, 4)?));
    let mut c = cfg("plot-annulus")?;
    c.param("s", "0.5")?;
    let bs = c.grid("b", "-0.4,-0.25,0")?;
    c.option("points", 400);
    out.push(("plot-annulus".into(), cmd_plot_annulus(c, 0.5, &bs, 400)?));
    let mut c = cfg("qs")?;
    c.option("preset", "pair");
    out.push(("qs-pair".into(), cmd_qs_pair(c, 200)?));
    let mut c = cfg("qs")?;
    c.option("preset", "genus2");
    c.param("c3", "-1")?;
    c.param("c4", "1")?;
    out.push(("qs-genus2".into(), cmd_qs_genus2(c, -1.0, 1.0, 200)?));
    let mut c = cfg("separate")?;
    c.param("lambda", "0.1")?;
    out.push(("separate".into(), cmd_separate(c, &CouplingFunction::scaled_product(0.1))?));
    out.push(("annulus".into(), annulus_table(cfg("annulus")?)?));
    Ok(out)
}
