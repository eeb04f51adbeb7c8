//! Sparse multivariate polynomials with a small text syntax, e.g.
//! `0.2*z1*z2 - 0.5*z1^2 + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One monomial `coef · Π xᵢ^{powers[i]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    pub powers: Vec<u32>,
}

/// A polynomial in a fixed number of named variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: Vec<Term>,
}

impl Polynomial {
    /// Builds a polynomial, merging equal monomials and dropping zeros.
    pub fn new(vars: &[&str], terms: Vec<Term>) -> Result<Self> {
        let n = vars.len();
        let mut merged: Vec<Term> = Vec::new();
        for t in terms {
            if t.powers.len() != n {
                return Err(Error::Parameter(format!(
                    "monomial has {} exponents, expected {n}",
                    t.powers.len()
                )));
            }
            if !t.coef.is_finite() {
                return Err(Error::Parameter(format!("non-finite coefficient {}", t.coef)));
            }
            match merged.iter_mut().find(|m| m.powers == t.powers) {
                Some(m) => m.coef += t.coef,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coef != 0.0);
        merged.sort_by(|a, b| {
            let da: u32 = a.powers.iter().sum();
            let db: u32 = b.powers.iter().sum();
            da.cmp(&db).then_with(|| b.powers.cmp(&a.powers))
        });
        Ok(Polynomial {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            terms: merged,
        })
    }

    pub fn zero(vars: &[&str]) -> Self {
        Polynomial {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &[&str], c: f64) -> Self {
        Polynomial::new(
            vars,
            vec![Term {
                coef: c,
                powers: vec![0; vars.len()],
            }],
        )
        .expect("well-formed constant")
    }

    /// Parses `expr := term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
    /// `factor := number | var | var '^' integer`.
    pub fn parse(vars: &[&str], text: &str) -> Result<Self> {
        Parser::new(vars, text).parse()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.powers.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.vars.len());
        self.terms
            .iter()
            .map(|t| {
                t.powers
                    .iter()
                    .zip(x)
                    .fold(t.coef, |acc, (&k, &v)| acc * v.powi(k as i32))
            })
            .sum()
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.powers[i] > 0)
            .map(|t| {
                let mut powers = t.powers.clone();
                powers[i] -= 1;
                Term {
                    coef: t.coef * t.powers[i] as f64,
                    powers,
                }
            })
            .collect();
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        Polynomial::new(&vars, terms).expect("derivative of a valid polynomial")
    }

    /// Upper bound for `|∂p/∂xᵢ|` on the cube `[-1, 1]ⁿ`.
    pub fn derivative_bound(&self, i: usize) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coef.abs() * t.powers[i] as f64)
            .sum()
    }

    /// Sum of absolute coefficients; bounds `|p|` on `[-1, 1]ⁿ`.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coef.abs()).sum()
    }

    pub fn scaled(&self, s: f64) -> Polynomial {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coef *= s;
        }
        out.terms.retain(|t| t.coef != 0.0);
        out
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.vars != other.vars {
            return Err(Error::Parameter(format!(
                "cannot add polynomials in {:?} and {:?}",
                self.vars, other.vars
            )));
        }
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        Polynomial::new(
            &vars,
            self.terms.iter().chain(other.terms.iter()).cloned().collect(),
        )
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let c = t.coef;
            if k == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            let is_const = t.powers.iter().all(|&p| p == 0);
            if mag != 1.0 || is_const {
                factors.push(format!("{mag}"));
            }
            for (v, &p) in self.vars.iter().zip(&t.powers) {
                match p {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{p}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    vars: &'a [&'a str],
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(vars: &'a [&'a str], src: &'a str) -> Self {
        Parser { vars, src, pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn parse(mut self) -> Result<Polynomial> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut sign = 1.0;
        match self.peek() {
            Some('-') => {
                sign = -1.0;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let mut t = self.term()?;
            t.coef *= sign;
            terms.push(t);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => sign = 1.0,
                Some('-') => sign = -1.0,
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.pos += 1;
        }
        Polynomial::new(self.vars, terms)
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = Term {
            coef: 1.0,
            powers: vec![0; self.vars.len()],
        };
        loop {
            self.skip_ws();
            self.factor(&mut t)?;
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok(t);
            }
        }
    }

    fn factor(&mut self, t: &mut Term) -> Result<()> {
        let rest = &self.src[self.pos..];
        let start = rest.chars().next().ok_or_else(|| self.err("unexpected end"))?;
        if start.is_ascii_digit() || start == '.' {
            let len = rest
                .char_indices()
                .find(|&(i, c)| {
                    !(c.is_ascii_digit()
                        || c == '.'
                        || c == 'e'
                        || c == 'E'
                        || ((c == '-' || c == '+')
                            && i > 0
                            && matches!(rest.as_bytes()[i - 1], b'e' | b'E')))
                })
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let v: f64 = rest[..len]
                .parse()
                .map_err(|_| self.err(&format!("bad number {:?}", &rest[..len])))?;
            self.pos += len;
            t.coef *= v;
            return Ok(());
        }
        let len = rest
            .char_indices()
            .find(|&(_, c)| !c.is_ascii_alphanumeric() && c != '_')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err(&format!("unexpected character {start:?}")));
        }
        let name = &rest[..len];
        let idx = self
            .vars
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| self.err(&format!("unknown variable {name:?}")))?;
        self.pos += len;
        self.skip_ws();
        let mut power = 1;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let rest = &self.src[self.pos..];
            let len = rest
                .char_indices()
                .find(|&(_, c)| !c.is_ascii_digit())
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            power = rest[..len]
                .parse()
                .map_err(|_| self.err("expected integer exponent"))?;
            self.pos += len;
        }
        t.powers[idx] += power;
        Ok(())
    }
}
