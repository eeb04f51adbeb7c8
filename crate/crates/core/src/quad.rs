//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// 7-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum over subintervals of `|K15 − G7|`.
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    if value.is_finite() && error.is_finite() {
        Ok((value, error))
    } else {
        Err(Error::Evaluation(format!("integrand not finite on [{a}, {b}]")))
    }
}

/// Integrates `f` over `[a, b]` until the summed error estimate drops below
/// `abs_tol`, bisecting the panel with the largest estimate.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (value, error) = gk15(&f, a, b)?;
    let mut evaluations = 15;
    let mut panels = vec![Panel { a, b, value, error }];
    loop {
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        if total_error <= abs_tol {
            return Ok(QuadResult {
                value: panels.iter().map(|p| p.value).sum(),
                error: total_error,
                evaluations,
            });
        }
        if panels.len() >= max_panels {
            return Err(Error::NonConvergence {
                what: format!("adaptive quadrature on [{a}, {b}]"),
                evaluations,
                estimate: total_error,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::NonConvergence {
                what: format!("adaptive quadrature on [{a}, {b}] (panel underflow)"),
                evaluations,
                estimate: total_error,
            });
        }
        let (lv, le) = gk15(&f, p.a, mid)?;
        let (rv, re) = gk15(&f, mid, p.b)?;
        evaluations += 30;
        panels.push(Panel { a: p.a, b: mid, value: lv, error: le });
        panels.push(Panel { a: mid, b: p.b, value: rv, error: re });
    }
}
