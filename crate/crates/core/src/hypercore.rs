//! Pochhammer symbols and truncated-series evaluation of
//! ₂F₁(μ, ν; c; x^α).

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Number of consecutive negligible terms that ends a series.
const SMALL_RUN: usize = 3;

/// Parameter set (μ, ν, c) with fractional order α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    mu: f64,
    nu: f64,
    c: f64,
    alpha: f64,
}

impl Params {
    pub fn new(mu: f64, nu: f64, c: f64, alpha: f64) -> Result<Self> {
        for (name, v) in [("mu", mu), ("nu", nu), ("c", c), ("alpha", alpha)] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")));
            }
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0,1], got {alpha}")));
        }
        if let Some(k) = nonpositive_integer(c) {
            // (c)_n first vanishes at n = k+1; fine only if the series stops first.
            let stops_before = termination_degree(mu, nu).is_some_and(|m| m <= k);
            if !stops_before {
                return Err(Error::Pole(format!(
                    "c = {c} is a nonpositive integer and the series does not terminate before it"
                )));
            }
        }
        Ok(Params { mu, nu, c, alpha })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same α, new (μ, ν, c).
    pub fn with(&self, mu: f64, nu: f64, c: f64) -> Result<Self> {
        Params::new(mu, nu, c, self.alpha)
    }

    pub fn swapped(&self) -> Self {
        Params { mu: self.nu, nu: self.mu, ..*self }
    }

    /// Degree of the polynomial when μ or ν is a nonpositive integer.
    pub fn termination_degree(&self) -> Option<u64> {
        termination_degree(self.mu, self.nu)
    }
}

/// Returns `Some(k)` when `v == -k` for a nonnegative integer `k`.
pub fn nonpositive_integer(v: f64) -> Option<u64> {
    if v <= 0.0 && v.fract() == 0.0 && v > -1e15 {
        Some((-v) as u64)
    } else {
        None
    }
}

fn termination_degree(a: f64, b: f64) -> Option<u64> {
    match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// Rising factorial (b)_n = b(b+1)…(b+n−1).
pub fn pochhammer(b: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 0..n {
        let f = b + k as f64;
        if f == 0.0 {
            return 0.0;
        }
        acc *= f;
    }
    acc
}

/// Series truncation policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesConfig {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { tol: DEFAULT_TOL, max_terms: DEFAULT_MAX_TERMS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err_est: f64,
    pub terms_used: usize,
    pub terminated: bool,
}

/// Neumaier compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sums a series from a term generator using the three-small-terms rule.
///
/// `next(n, prev)` returns term n given term n−1.
pub(crate) fn sum_series<F>(first: f64, mut next: F, cfg: &SeriesConfig) -> Result<EvalResult>
where
    F: FnMut(usize, f64) -> f64,
{
    let mut acc = KahanSum::default();
    acc.add(first);
    let mut term = first;
    let mut max_abs = first.abs();
    let mut run = 0;
    let mut n = 1;
    loop {
        if n >= cfg.max_terms {
            return Err(Error::NoConvergence { terms: n });
        }
        let t = next(n, term);
        if !t.is_finite() {
            return Err(Error::NonFinite(format!("series term {n} is {t}")));
        }
        acc.add(t);
        max_abs = max_abs.max(t.abs());
        let s = acc.value();
        let threshold = (cfg.tol * s.abs()).max(f64::EPSILON * max_abs);
        if t.abs() <= threshold {
            run += 1;
        } else {
            run = 0;
        }
        let ratio = if term == 0.0 { 0.0 } else { (t / term).abs() };
        term = t;
        n += 1;
        if run >= SMALL_RUN {
            let tail = if ratio < 1.0 { t.abs() * ratio / (1.0 - ratio) } else { t.abs() };
            return Ok(EvalResult {
                value: s,
                abs_err_est: tail + f64::EPSILON * max_abs,
                terms_used: n,
                terminated: false,
            });
        }
    }
}

/// Classical Gauss series ₂F₁(a, b; c; u) for real u.
///
/// Accepts |u| < 1, or any u when the series terminates.
pub fn gauss_2f1(a: f64, b: f64, c: f64, u: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    if !u.is_finite() {
        return Err(Error::NonFinite(format!("argument {u}")));
    }
    if let Some(m) = termination_degree(a, b) {
        let m = m as usize;
        if m + 1 > cfg.max_terms {
            return Err(Error::NoConvergence { terms: cfg.max_terms });
        }
        let mut acc = KahanSum::default();
        let mut term = 1.0;
        acc.add(term);
        for k in 0..m {
            let kf = k as f64;
            let den = (c + kf) * (kf + 1.0);
            if c + kf == 0.0 {
                return Err(Error::Pole(format!("(c)_n vanishes at n = {}", k + 1)));
            }
            term *= (a + kf) * (b + kf) / den * u;
            acc.add(term);
        }
        let value = acc.value();
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("polynomial value {value}")));
        }
        return Ok(EvalResult { value, abs_err_est: 0.0, terms_used: m + 1, terminated: true });
    }
    if u.abs() >= 1.0 {
        return Err(Error::Domain(format!("|u| = {} must be < 1 for a non-terminating series", u.abs())));
    }
    if nonpositive_integer(c).is_some() {
        return Err(Error::Pole(format!("c = {c} is a nonpositive integer")));
    }
    sum_series(
        1.0,
        |n, prev| {
            let k = (n - 1) as f64;
            prev * (a + k) * (b + k) / ((c + k) * (k + 1.0)) * u
        },
        cfg,
    )
}

/// Positive real power base^exp for base > 0 (or base = 0 with exp > 0).
pub fn pos_pow(base: f64, exp: f64) -> Result<f64> {
    if base > 0.0 {
        Ok(base.powf(exp))
    } else if base == 0.0 && exp > 0.0 {
        Ok(0.0)
    } else if base == 0.0 && exp == 0.0 {
        Ok(1.0)
    } else {
        Err(Error::Domain(format!("power of nonpositive base {base} to exponent {exp}")))
    }
}

/// ₂F₁(μ, ν; c; x^α) for x > 0.
pub fn eval_2f1(p: &Params, x: f64, tol: f64, max_terms: usize) -> Result<EvalResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
    }
    if !(tol > 0.0) || max_terms == 0 {
        return Err(Error::InvalidArgument("tol must be positive and max_terms at least 1".into()));
    }
    let u = x.powf(p.alpha);
    gauss_2f1(p.mu, p.nu, p.c, u, &SeriesConfig { tol, max_terms })
}

/// Convergence region of a solution branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Origin,
    Unit,
    Infinity,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Origin => "origin",
            Region::Unit => "unit",
            Region::Infinity => "infinity",
        }
    }
}

/// True iff x lies strictly inside the convergence region.
pub fn domain_check(p: &Params, x: f64, region: Region) -> bool {
    if !(x > 0.0) || !x.is_finite() {
        return false;
    }
    let u = x.powf(p.alpha);
    match region {
        Region::Origin => u < 1.0,
        Region::Unit => (1.0 - u).abs() < 1.0 && u < 1.0,
        Region::Infinity => u > 1.0,
    }
}
