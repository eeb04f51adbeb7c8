//! Deterministic SVG output. Coordinates are printed with three decimals so
//! identical inputs give identical bytes.

use std::f64::consts::PI;
use std::fmt::Write;

use camlab::displace::SweepRow;
use camlab::displace::VerdictTag;
use camlab::ReducedCurve;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 40.0;

fn f3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn header(out: &mut String, w: f64, h: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w, h, w, h
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Maps `(θ, z) ∈ [−π, π] × [−1, 1]` into the plot rectangle.
fn annulus_xy(theta: f64, z: f64) -> (f64, f64) {
    let x = PAD + (theta + PI) / (2.0 * PI) * (W - 2.0 * PAD);
    let y = PAD + (1.0 - z) / 2.0 * (H - 2.0 * PAD);
    (x, y)
}

/// Splits a sampled closed curve where it wraps around `θ = ±π`.
fn segments(c: &ReducedCurve) -> Vec<Vec<(f64, f64)>> {
    let mut segs: Vec<Vec<(f64, f64)>> = vec![vec![]];
    let n = c.points.len();
    for k in 0..=n {
        let q = c.points[k % n];
        if let Some(last) = segs.last().and_then(|s| s.last()) {
            let (lx, _) = *last;
            let (x, _) = annulus_xy(q.theta, q.z);
            if (x - lx).abs() > 0.5 * (W - 2.0 * PAD) {
                segs.push(vec![]);
            }
        }
        segs.last_mut().expect("non-empty").push(annulus_xy(q.theta, q.z));
    }
    segs.into_iter().filter(|s| s.len() > 1).collect()
}

/// The reduced annulus with the pinched lines `θ = ±Arccos(−s)`, the shaded
/// region `D(s, −s)` between them, the curves `α(s, b)` and their crossings
/// of `θ = 0`.
pub fn annulus_figure(s: f64, curves: &[ReducedCurve]) -> String {
    let mut out = String::new();
    header(&mut out, W, H, &format!("reduced annulus, s = {s}"));
    let (x0, y0) = annulus_xy(-PI, 1.0);
    let (x1, y1) = annulus_xy(PI, -1.0);
    let line = (-s).acos();
    let (la, _) = annulus_xy(-line, 0.0);
    let (lb, _) = annulus_xy(line, 0.0);
    let _ = writeln!(
        out,
        r##"<rect class="pinched-region" x="{}" y="{}" width="{}" height="{}" fill="#9ec5ff" fill-opacity="0.6"/>"##,
        f3(la),
        f3(y0),
        f3(lb - la),
        f3(y1 - y0)
    );
    let _ = writeln!(
        out,
        r##"<rect class="annulus" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000000"/>"##,
        f3(x0),
        f3(y0),
        f3(x1 - x0),
        f3(y1 - y0)
    );
    for x in [la, lb] {
        let _ = writeln!(
            out,
            r##"<line class="pinched-line" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#1f4fbf" stroke-width="2"/>"##,
            f3(x),
            f3(y0),
            f3(x),
            f3(y1)
        );
    }
    for c in curves {
        for seg in segments(c) {
            let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{},{}", f3(*x), f3(*y))).collect();
            let _ = writeln!(
                out,
                r##"<polyline class="curve" data-b="{}" points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
                c.b,
                pts.join(" ")
            );
        }
        let z = ((1.0 - c.b) / (1.0 + c.s)).sqrt();
        for zz in [z, -z] {
            let (x, y) = annulus_xy(0.0, zz);
            let _ = writeln!(
                out,
                r##"<circle class="marker" data-b="{}" cx="{}" cy="{}" r="3" fill="#000000"/>"##,
                c.b,
                f3(x),
                f3(y)
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">θ</text>"#,
        f3(W / 2.0),
        f3(H - 10.0)
    );
    let _ = writeln!(out, r#"<text x="12" y="{}" font-size="12">z</text>"#, f3(H / 2.0));
    out.push_str("</svg>\n");
    out
}

fn tag_color(tag: VerdictTag) -> &'static str {
    match tag {
        VerdictTag::DisplaceableByPsi => "#7fbf7f",
        VerdictTag::DisplaceableInReduction => "#4f9f4f",
        VerdictTag::InsideWindowUnknown => "#f0c040",
        VerdictTag::NonDisplaceableCited => "#d9534f",
        VerdictTag::SuperheavyCited => "#8e44ad",
        VerdictTag::NotApplicable => "#cccccc",
    }
}

/// Heat map of sweep verdicts: one cell per `(a, b)`, `a` across, `b` up.
pub fn heat_map(rows: &[SweepRow], a_values: &[f64], b_values: &[f64]) -> String {
    let mut out = String::new();
    let legend = 160.0;
    header(&mut out, W + legend, H, "displaceability verdicts");
    let na = a_values.len().max(1) as f64;
    let nb = b_values.len().max(1) as f64;
    let cw = (W - 2.0 * PAD) / na;
    let ch = (H - 2.0 * PAD) / nb;
    for r in rows {
        let i = a_values.iter().position(|a| *a == r.a).unwrap_or(0) as f64;
        let j = b_values.iter().position(|b| *b == r.b).unwrap_or(0) as f64;
        let _ = writeln!(
            out,
            r#"<rect class="cell" data-a="{}" data-b="{}" data-tag="{}" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            r.a,
            r.b,
            r.tag.label(),
            f3(PAD + i * cw),
            f3(H - PAD - (j + 1.0) * ch),
            f3(cw),
            f3(ch),
            tag_color(r.tag)
        );
    }
    let tags = [
        VerdictTag::DisplaceableByPsi,
        VerdictTag::InsideWindowUnknown,
        VerdictTag::SuperheavyCited,
    ];
    for (k, t) in tags.iter().enumerate() {
        let y = PAD + 20.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="12" height="12" fill="{}"/><text x="{}" y="{}" font-size="11">{}</text>"#,
            f3(W),
            f3(y),
            tag_color(*t),
            f3(W + 16.0),
            f3(y + 10.0),
            t.label()
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">a</text>"#,
        f3(W / 2.0),
        f3(H - 10.0)
    );
    let _ = writeln!(out, r#"<text x="12" y="{}" font-size="12">b</text>"#, f3(H / 2.0));
    out.push_str("</svg>\n");
    out
}
