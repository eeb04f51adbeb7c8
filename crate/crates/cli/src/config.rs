//! Run configuration: decimal parameters, grids and the seed.

use std::collections::BTreeMap;
use std::path::PathBuf;

use camlab::Error;
use serde::Serialize;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1729;

/// Coupling used when `--f-spec` is not given: `(1 − s) z₁z₂` at `s = 1/2`.
pub const DEFAULT_F_SPEC: &str = "0.5*z1*z2";

pub const ROUNDING_NOTE: &str =
    "decimal parameters are parsed to the nearest binary64 value, ties to even";

/// A decimal parameter as typed and as parsed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decimal {
    pub text: String,
    pub value: f64,
    /// Whether the binary value equals the decimal exactly; `None` when the
    /// literal is too long to decide cheaply.
    pub exact: Option<bool>,
}

impl Decimal {
    pub fn parse(text: &str) -> Result<Decimal, Error> {
        let t = text.trim();
        let value: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("'{text}' is not a decimal number")))?;
        if !value.is_finite() {
            return Err(Error::Parse(format!("'{text}' is not finite")));
        }
        Ok(Decimal {
            text: t.to_string(),
            value,
            exact: decimal_is_exact(t, value),
        })
    }
}

/// Splits a decimal literal into `(negative, digits, exponent)` with
/// `|x| = digits · 10^exponent`.
fn split_decimal(text: &str) -> Option<(bool, u128, i32)> {
    let (neg, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: String = int.chars().chain(frac.chars()).collect();
    if digits.is_empty() || digits.len() > 36 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((neg, digits.parse().ok()?, exp - frac.len() as i32))
}

fn decimal_is_exact(text: &str, value: f64) -> Option<bool> {
    let (_, mut digits, exp) = split_decimal(text)?;
    if digits == 0 {
        return Some(value == 0.0);
    }
    if exp >= 0 {
        if exp > 20 {
            return None;
        }
        let full = digits.checked_mul(10u128.checked_pow(exp as u32)?)?;
        return Some(full as f64 == value.abs() && (full as f64) as u128 == full);
    }
    // digits / 10^k is dyadic iff 5^k divides digits; then it is digits' / 2^k.
    let k = -exp;
    for _ in 0..k {
        if digits % 5 != 0 {
            return Some(false);
        }
        digits /= 5;
    }
    if k > 1000 {
        return None;
    }
    let scaled = value.abs() * 2f64.powi(k);
    if !scaled.is_finite() || scaled.fract() != 0.0 || scaled >= 2f64.powi(128) {
        return None;
    }
    Some(scaled as u128 == digits)
}

/// A one-dimensional grid: `lo:hi:n` (`n` points, endpoints included) or a
/// comma-separated list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub spec: String,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn parse(spec: &str) -> Result<Grid, Error> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(Grid { spec: String::new(), values: vec![] });
        }
        let values = if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            let [lo, hi, n] = parts[..] else {
                return Err(Error::Parse(format!("grid '{spec}' must be lo:hi:n")));
            };
            let lo = Decimal::parse(lo)?.value;
            let hi = Decimal::parse(hi)?.value;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("grid '{spec}': bad point count '{n}'")))?;
            linspace(lo, hi, n)
        } else {
            spec.split(',').map(|t| Decimal::parse(t).map(|d| d.value)).collect::<Result<_, _>>()?
        };
        Ok(Grid { spec: spec.to_string(), values })
    }
}

/// `n` points from `lo` to `hi` with both endpoints hit exactly.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Two grids separated by `;`.
pub fn parse_grid_pair(spec: &str) -> Result<(Grid, Grid), Error> {
    let (a, b) = spec
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("grid '{spec}' must be two grids separated by ';'")))?;
    Ok((Grid::parse(a)?, Grid::parse(b)?))
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub params: BTreeMap<String, Decimal>,
    pub grids: BTreeMap<String, Grid>,
    pub options: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn new(subcommand: &str, seed: Option<u64>, tol: Option<f64>, out: Option<PathBuf>) -> Self {
        RunConfig {
            subcommand: subcommand.to_string(),
            params: BTreeMap::new(),
            grids: BTreeMap::new(),
            options: BTreeMap::new(),
            out,
            seed: seed.unwrap_or(DEFAULT_SEED),
            tol,
        }
    }

    pub fn param(&mut self, key: &str, text: &str) -> Result<f64, Error> {
        let d = Decimal::parse(text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("--{key}: {m}")),
            other => other,
        })?;
        let v = d.value;
        self.params.insert(key.to_string(), d);
        Ok(v)
    }

    pub fn grid(&mut self, key: &str, spec: &str) -> Result<Vec<f64>, Error> {
        let g = Grid::parse(spec)?;
        let v = g.values.clone();
        self.grids.insert(key.to_string(), g);
        Ok(v)
    }

    pub fn option(&mut self, key: &str, value: impl ToString) {
        self.options.insert(key.to_string(), value.to_string());
    }
}
