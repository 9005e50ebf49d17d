//! Catalog of identities satisfied by ₂F₁(μ, ν; c; x^α), each with a
//! two-sided evaluator and a randomized verification harness.
//!
//! Notation below: u = x^α, w = t^α, F = ₂F₁(μ, ν; c; u), and F(c+1) etc.
//! name only the shifted parameters.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{conf_integral_2f1_closed, frac_laplace_auto, laplace_shifted_2f1};
use crate::dd::{gauss_2f1_dd, Dd};
use crate::confcalc::{conf_integral_numeric_tol, series_diff, theta_apply, FracSeries};
use crate::error::{Error, Result};
use crate::hypercore::{gauss_2f1, pochhammer, EvalResult, KahanSum, Params, SeriesConfig};

macro_rules! relation_ids {
    ($($id:ident),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub enum RelationId { $($id),* }

        impl RelationId {
            pub const ALL: &'static [RelationId] = &[$(RelationId::$id),*];

            pub fn as_str(&self) -> &'static str {
                match self { $(RelationId::$id => stringify!($id)),* }
            }
        }

        impl FromStr for RelationId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $(stringify!($id) => Ok(RelationId::$id),)*
                    _ => Err(Error::InvalidArgument(format!("unknown relation id '{s}'"))),
                }
            }
        }
    };
}

relation_ids!(
    G1, G2, G3, T1, T2, D1, D2, D3, D4, D5, D6, D7, D8, D9, C1, C2, C3, C4, C5, C6, C7, C8, E1, E2, E3, E4, E5, E6,
    R1, R2, R3, R4, R5, I1, I2, L1,
);

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which point coordinates an identity uses besides x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arity {
    pub t: bool,
    /// Inclusive range of the integer n, when used.
    pub n: Option<(u32, u32)>,
    pub s: bool,
}

/// Evaluation point. `t` is the auxiliary variable of the generating
/// functions, `n` the integer shift or derivative order, `s` the Laplace
/// variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct Point {
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

impl Point {
    pub fn at(x: f64) -> Self {
        Point { x, ..Default::default() }
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = Some(s);
        self
    }
}

/// Truncation policy for inner series and outer generating-function sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub series: SeriesConfig,
    pub outer_max: usize,
    pub integral_abs_tol: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            series: SeriesConfig { tol: 1e-15, max_terms: 20_000 },
            outer_max: 2_000,
            integral_abs_tol: 1e-12,
        }
    }
}

/// Catalog entry as exported to JSON.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub id: RelationId,
    pub equation_label: &'static str,
    pub arity: Vec<&'static str>,
    pub predicate_description: &'static str,
}

impl RelationId {
    pub fn arity(&self) -> Arity {
        use RelationId::*;
        let plain = Arity { t: false, n: None, s: false };
        match self {
            G1 | G2 | G3 => Arity { t: true, ..plain },
            D2 | D3 | D4 | D5 | D6 | D7 | D8 | D9 => Arity { n: Some((1, 5)), ..plain },
            R1 | R2 | R3 | R4 | R5 => Arity { n: Some((0, 5)), ..plain },
            L1 => Arity { s: true, ..plain },
            _ => plain,
        }
    }

    /// The identity written out, left side = right side.
    pub fn equation_label(&self) -> &'static str {
        use RelationId::*;
        match self {
            G1 => "sum_m (mu)_m/m! F(mu+m,nu;c;u) w^m = (1-w)^(-mu) F(mu,nu;c;u/(1-w))",
            G2 => "sum_m (mu)_m/m! F(-m,nu;c;u) w^m = (1-w)^(-mu) F(mu,nu;c;-u w/(1-w))",
            G3 => "sum_m (mu)_m (nu)_m/((c)_m m!) F(mu+m,nu+m;c+m;u) w^m = F(mu,nu;c;u+w)",
            T1 => "F(mu,nu;c;u) = (1-u)^(-mu) F(mu,c-nu;c;-u/(1-u))",
            T2 => "F(mu,nu;c;u) = (1-u)^(c-mu-nu) F(c-mu,c-nu;c;u)",
            D1 => "D^a F(mu,nu;c;u) = (a mu nu/c) F(mu+1,nu+1;c+1;u)",
            D2 => "D^(na) F(mu,nu;c;u) = a^n (mu)_n (nu)_n/(c)_n F(mu+n,nu+n;c+n;u)",
            D3 => "D^(na) [u^(mu+n-1) F(mu,nu;c;u)] = a^n (mu)_n u^(mu-1) F(mu+n,nu;c;u)",
            D4 => "D^(na) [u^(c-1) F(mu,nu;c;u)] = a^n (c-n)_n u^(c-n-1) F(mu,nu;c-n;u)",
            D5 => "D^(na) [u^(c-mu+n-1) (1-u)^(mu+nu-c) F(mu,nu;c;u)] = a^n (c-mu)_n u^(c-mu-1) (1-u)^(mu+nu-c-n) F(mu-n,nu;c;u)",
            D6 => "D^(na) [(1-u)^(mu+nu-c) F(mu,nu;c;u)] = a^n (c-mu)_n (c-nu)_n/(c)_n (1-u)^(mu+nu-c-n) F(mu,nu;c+n;u)",
            D7 => "D^(na) [u^(c-1) (1-u)^(mu+nu-c) F(mu,nu;c;u)] = a^n (c-n)_n u^(c-n-1) (1-u)^(mu+nu-c-n) F(mu-n,nu-n;c-n;u)",
            D8 => "D^(na) [u^(n+c-1) (1-u)^(n+mu+nu-c) F(mu+n,nu+n;c+n;u)] = a^n (c)_n u^(c-1) (1-u)^(mu+nu-c) F(mu,nu;c;u)",
            D9 => "D^(na) [u^(n+c-1) (1-u)^(nu-c)] = a^n (c)_n u^(c-1) (1-u)^(nu-c-n) F(-n,nu;c;u)",
            C1 => "(theta + mu) F = mu F(mu+1)",
            C2 => "(theta + nu) F = nu F(nu+1)",
            C3 => "(theta + c - 1) F = (c-1) F(c-1)",
            C4 => "(mu - nu) F = mu F(mu+1) - nu F(nu+1)",
            C5 => "(mu - c + 1) F = mu F(mu+1) - (c-1) F(c-1)",
            C6 => "(mu + (nu-c) u) F = mu (1-u) F(mu+1) - (c-mu)(c-nu)/c u F(c+1)",
            C7 => "(1-u) F = F(mu-1) - (c-nu)/c u F(c+1)",
            C8 => "(1-u) F = F(nu-1) - (c-mu)/c u F(c+1)",
            E1 => "(2mu - c + (nu-mu) u) F = mu (1-u) F(mu+1) - (c-mu) F(mu-1)",
            E2 => "(mu + nu - c) F = mu (1-u) F(mu+1) - (c-nu) F(nu-1)",
            E3 => "(c - mu - nu) F = (c-mu) F(mu-1) - nu (1-u) F(nu+1)",
            E4 => "(nu - mu)(1-u) F = (c-mu) F(mu-1) - (c-nu) F(nu-1)",
            E5 => "(1 - mu + (c-nu-1) u) F = (c-mu) F(mu-1) - (c-1)(1-u) F(c-1)",
            E6 => "(2nu - c + (mu-nu) u) F = nu (1-u) F(nu+1) - (c-nu) F(nu-1)",
            R1 => "F(mu+n) = F + (nu u/c) sum_{k=1..n} F(mu+n-k+1,nu+1;c+1)",
            R2 => "F(mu-n) = F - (nu u/c) sum_{k=1..n} F(mu-k+1,nu+1;c+1)",
            R3 => "F(mu+n) = sum_{k=0..n} C(n,k) (nu)_k/(c)_k u^k F(mu+k,nu+k;c+k)",
            R4 => "F(mu-n) = sum_{k=0..n} (-1)^k C(n,k) (nu)_k/(c)_k u^k F(mu,nu+k;c+k)",
            R5 => "F(c+n) = (c)_n/(c-nu)_n sum_{k=0..n} (-1)^k C(n,k) (nu)_k/(c)_k F(mu,nu+k;c+k)",
            I1 => "int_0^x F(mu,nu;c;t^a) t^(a-1) dt = (c-1)/(a (mu-1)(nu-1)) [F(mu-1,nu-1;c-1;u) - 1]",
            I2 => "F(mu,nu;c;u) = 1 + (a mu nu/c) int_0^x F(mu+1,nu+1;c+1;t^a) t^(a-1) dt",
            L1 => "L_a[F(mu,nu;1;u(1-exp(-t^a/a)))](s) = (1/s) F(mu,nu;s+1;u)",
        }
    }

    pub fn predicate_description(&self) -> &'static str {
        use RelationId::*;
        match self {
            G1 => "0 < u < 1, 0 < w < 1, u/(1-w) < 1",
            G2 => "0 < u < 1, 0 < w < 1, u w/(1-w) < 1",
            G3 => "0 < u, 0 < w, u + w < 1",
            T1 => "0 < u < 1/2 so that u/(1-u) < 1",
            D1 | T2 | C1 | C2 | C4 | C6 | C7 | C8 | E1 | E2 | E3 | E4 | E6 | I2 => "0 < u < 1",
            C3 | C5 | E5 => "0 < u < 1, c - 1 not a nonpositive integer",
            D2 | D3 | D5 | D6 | D8 => "0 < u < 1, integer n >= 1",
            D4 | D7 => "0 < u < 1, integer n >= 1, c - n not a nonpositive integer",
            D9 => "0 < u < 1, integer n >= 1, mu = -n",
            R1 | R2 | R3 | R4 => "0 < u < 1, integer n >= 0",
            R5 => "0 < u < 1, integer n >= 0, (c - nu)_n nonzero",
            I1 => "0 < u < 1, mu, nu, c all different from 1",
            L1 => "0 < u < 1, c = 1, s > 0",
        }
    }

    pub fn catalog_entry(&self) -> CatalogEntry {
        let a = self.arity();
        let mut arity = vec!["x"];
        if a.t {
            arity.push("t");
        }
        if a.n.is_some() {
            arity.push("n");
        }
        if a.s {
            arity.push("s");
        }
        CatalogEntry {
            id: *self,
            equation_label: self.equation_label(),
            arity,
            predicate_description: self.predicate_description(),
        }
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    RelationId::ALL.iter().map(|id| id.catalog_entry()).collect()
}

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn need_n(id: RelationId, point: &Point) -> Result<u32> {
    let (lo, hi) = id.arity().n.expect("id uses n");
    match point.n {
        Some(n) if n >= lo && n <= hi.max(64) => Ok(n),
        Some(n) => Err(domain(format!("{id} needs n in [{lo}, ..], got {n}"))),
        None => Err(domain(format!("{id} needs an integer n"))),
    }
}

/// Checks the identity's validity predicate and returns (u, w).
fn check_point(id: RelationId, p: &Params, point: &Point) -> Result<(f64, f64)> {
    use RelationId::*;
    let x = point.x;
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("x must be positive, got {x}")));
    }
    let u = x.powf(p.alpha());
    if u >= 1.0 {
        return Err(domain(format!("x^alpha = {u} must be < 1")));
    }
    let mut w = 0.0;
    if id.arity().t {
        let t = point.t.ok_or_else(|| domain(format!("{id} needs t")))?;
        if !(t > 0.0) {
            return Err(domain(format!("t must be positive, got {t}")));
        }
        w = t.powf(p.alpha());
        let ok = match id {
            G1 => w < 1.0 && u / (1.0 - w) < 1.0,
            G2 => w < 1.0 && u * w / (1.0 - w) < 1.0,
            _ => u + w < 1.0,
        };
        if !ok {
            return Err(domain(format!("{id}: (u, w) = ({u}, {w}) outside the convergence region")));
        }
    }
    if id.arity().n.is_some() {
        let n = need_n(id, point)?;
        if id == D9 && p.mu() != -(n as f64) {
            return Err(domain(format!("D9 needs mu = -n, got mu = {}, n = {n}", p.mu())));
        }
    }
    match id {
        T1 if u / (1.0 - u) >= 1.0 => Err(domain("T1 needs x^alpha < 1/2")),
        I1 if p.mu() == 1.0 || p.nu() == 1.0 || p.c() == 1.0 => Err(domain("I1 needs mu, nu, c != 1")),
        L1 if p.c() != 1.0 => Err(domain("L1 needs c = 1")),
        L1 if !point.s.is_some_and(|s| s > 0.0) => Err(domain("L1 needs s > 0")),
        _ => Ok((u, w)),
    }
}

struct Ctx<'a> {
    alpha: f64,
    u: f64,
    x: f64,
    trunc: &'a Truncation,
}

impl Ctx<'_> {
    fn f_at(&self, a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
        Ok(gauss_2f1(a, b, c, z, &self.trunc.series)?.value)
    }

    fn f(&self, a: f64, b: f64, c: f64) -> Result<f64> {
        self.f_at(a, b, c, self.u)
    }

    /// Series x^{α·offset} ₂F₁(a, b; c; x^α), long enough that `order`
    /// term-wise derivatives are converged at u.
    fn f_series(&self, a: f64, b: f64, c: f64, offset: f64, order: u32) -> Result<FracSeries> {
        let mut coeffs = Vec::new();
        let mut coef: f64 = 1.0;
        let mut max_mag: f64 = 0.0;
        let mut run = 0;
        let mut upow: f64 = 1.0;
        for k in 0..self.trunc.series.max_terms {
            coeffs.push(coef);
            let weight = (offset.abs() + k as f64 + 1.0).powi(order as i32);
            let mag = (coef * upow).abs() * weight;
            max_mag = max_mag.max(mag);
            if mag <= 1e-2 * f64::EPSILON * max_mag {
                run += 1;
                if run >= 3 {
                    return Ok(FracSeries::new(self.alpha, offset, coeffs));
                }
            } else {
                run = 0;
            }
            let kf = k as f64;
            coef *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
            upow *= self.u;
            if coef == 0.0 {
                return Ok(FracSeries::new(self.alpha, offset, coeffs));
            }
            if !coef.is_finite() {
                return Err(Error::NonFinite(format!("series coefficient {k}")));
            }
        }
        Err(Error::NoConvergence { terms: self.trunc.series.max_terms })
    }

    /// Series x^{α·offset} (1−x^α)^β ₂F₁(a, b; c; x^α), long enough for
    /// `order` term-wise derivatives.
    ///
    /// The Cauchy product of the two expansions is formed in double-double:
    /// for β > 0 its coefficients are far smaller than the partial products.
    fn product_series(&self, a: Dd, b: Dd, c: Dd, beta: Dd, offset: f64, order: u32) -> Result<FracSeries> {
        const MIN_TERMS: usize = 20;
        let mut f = vec![Dd::ONE];
        let mut h = vec![Dd::ONE];
        let mut coeffs = Vec::new();
        let mut max_mag: f64 = 0.0;
        let mut run = 0;
        let mut upow: f64 = 1.0;
        for k in 0..self.trunc.series.max_terms {
            let mut pk = Dd::ZERO;
            for j in 0..=k {
                pk = pk + h[j] * f[k - j];
            }
            let p = pk.to_f64();
            if !p.is_finite() {
                return Err(Error::NonFinite(format!("product coefficient {k}")));
            }
            coeffs.push(p);
            let mag = (p * upow).abs() * (offset.abs() + k as f64 + 1.0).powi(order as i32);
            max_mag = max_mag.max(mag);
            if k >= MIN_TERMS && mag <= 1e-2 * f64::EPSILON * max_mag {
                run += 1;
                if run >= 3 {
                    return Ok(FracSeries::new(self.alpha, offset, coeffs));
                }
            } else {
                run = 0;
            }
            let kd = Dd::from_f64(k as f64);
            let k1 = Dd::from_f64(k as f64 + 1.0);
            f.push(f[k] * (a + kd) * (b + kd) / ((c + kd) * k1));
            h.push(h[k] * (kd - beta) / k1);
            upow *= self.u;
        }
        Err(Error::NoConvergence { terms: self.trunc.series.max_terms })
    }

    /// D^{nα} of x^{α·offset} (1−x^α)^β ₂F₁(a, b; c; x^α) at x.
    fn diff_product(&self, abc: (Dd, Dd, Dd), beta: Dd, offset: f64, n: u32) -> Result<f64> {
        let s = self.product_series(abc.0, abc.1, abc.2, beta, offset, n)?;
        series_diff(&s, n).eval(self.x)
    }

    /// Sums Σ term(m) with the three-small-terms rule.
    fn outer_sum<T: FnMut(usize) -> Result<f64>>(&self, mut term: T) -> Result<f64> {
        let mut acc = KahanSum::default();
        let mut max_mag: f64 = 0.0;
        let mut run = 0;
        for m in 0..self.trunc.outer_max {
            let t = term(m)?;
            acc.add(t);
            max_mag = max_mag.max(t.abs());
            let thr = (self.trunc.series.tol * acc.value().abs()).max(f64::EPSILON * max_mag);
            if t.abs() <= thr {
                run += 1;
                if run >= 3 {
                    return Ok(acc.value());
                }
            } else {
                run = 0;
            }
        }
        Err(Error::NoConvergence { terms: self.trunc.outer_max })
    }

    fn frac_integral<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        conf_integral_numeric_tol(g, 0.0, self.x, self.alpha, self.trunc.integral_abs_tol)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Evaluates (left side, right side) of an identity at a point.
pub fn eval_relation_sides(id: RelationId, p: &Params, point: &Point, trunc: &Truncation) -> Result<(f64, f64)> {
    use RelationId::*;
    let (u, w) = check_point(id, p, point)?;
    let cx = Ctx { alpha: p.alpha(), u, x: point.x, trunc };
    let (mu, nu, c, a) = (p.mu(), p.nu(), p.c(), p.alpha());
    let n = point.n.unwrap_or(0);
    let nf = n as f64;
    let an = a.powi(n as i32);
    let fcfg = &trunc.series;
    let out = match id {
        G1 => {
            let mut coef = 1.0;
            let lhs = cx.outer_sum(|m| {
                let t = coef * cx.f(mu + m as f64, nu, c)?;
                coef *= (mu + m as f64) / (m as f64 + 1.0) * w;
                Ok(t)
            })?;
            (lhs, (1.0 - w).powf(-mu) * cx.f_at(mu, nu, c, u / (1.0 - w))?)
        }
        G2 => {
            let mut coef = 1.0;
            let lhs = cx.outer_sum(|m| {
                let t = coef * cx.f(-(m as f64), nu, c)?;
                coef *= (mu + m as f64) / (m as f64 + 1.0) * w;
                Ok(t)
            })?;
            (lhs, (1.0 - w).powf(-mu) * cx.f_at(mu, nu, c, -u * w / (1.0 - w))?)
        }
        G3 => {
            let mut coef = 1.0;
            let lhs = cx.outer_sum(|m| {
                let mf = m as f64;
                let t = coef * cx.f(mu + mf, nu + mf, c + mf)?;
                coef *= (mu + mf) * (nu + mf) / ((c + mf) * (mf + 1.0)) * w;
                Ok(t)
            })?;
            (lhs, cx.f_at(mu, nu, c, u + w)?)
        }
        T1 => (cx.f(mu, nu, c)?, (1.0 - u).powf(-mu) * cx.f_at(mu, c - nu, c, -u / (1.0 - u))?),
        T2 => (cx.f(mu, nu, c)?, (1.0 - u).powf(c - mu - nu) * cx.f(c - mu, c - nu, c)?),
        D1 => {
            let s = cx.f_series(mu, nu, c, 0.0, 1)?;
            (series_diff(&s, 1).eval(point.x)?, a * mu * nu / c * cx.f(mu + 1.0, nu + 1.0, c + 1.0)?)
        }
        D2 => {
            let s = cx.f_series(mu, nu, c, 0.0, n)?;
            let k = an * pochhammer(mu, n) * pochhammer(nu, n) / pochhammer(c, n);
            (series_diff(&s, n).eval(point.x)?, k * cx.f(mu + nf, nu + nf, c + nf)?)
        }
        D3 => {
            let s = cx.f_series(mu, nu, c, mu + nf - 1.0, n)?;
            let rhs = an * pochhammer(mu, n) * u.powf(mu - 1.0) * cx.f(mu + nf, nu, c)?;
            (series_diff(&s, n).eval(point.x)?, rhs)
        }
        D4 => {
            let s = cx.f_series(mu, nu, c, c - 1.0, n)?;
            let rhs = an * pochhammer(c - nf, n) * u.powf(c - nf - 1.0) * cx.f(mu, nu, c - nf)?;
            (series_diff(&s, n).eval(point.x)?, rhs)
        }
        D5 | D6 | D7 | D8 | D9 => {
            let e = mu + nu - c;
            // exact μ+ν−c in double-double
            let e_dd = Dd::sum(mu, nu) - Dd::from_f64(c);
            let (dmu, dnu, dc) = (Dd::from_f64(mu), Dd::from_f64(nu), Dd::from_f64(c));
            match id {
                D5 => {
                    let lhs = cx.diff_product((dmu, dnu, dc), e_dd, c - mu + nf - 1.0, n)?;
                    let rhs = an
                        * pochhammer(c - mu, n)
                        * u.powf(c - mu - 1.0)
                        * (1.0 - u).powf(e - nf)
                        * cx.f(mu - nf, nu, c)?;
                    (lhs, rhs)
                }
                D6 => {
                    let lhs = cx.diff_product((dmu, dnu, dc), e_dd, 0.0, n)?;
                    let k = an * pochhammer(c - mu, n) * pochhammer(c - nu, n) / pochhammer(c, n);
                    (lhs, k * (1.0 - u).powf(e - nf) * cx.f(mu, nu, c + nf)?)
                }
                D7 => {
                    let lhs = cx.diff_product((dmu, dnu, dc), e_dd, c - 1.0, n)?;
                    let rhs = an
                        * pochhammer(c - nf, n)
                        * u.powf(c - nf - 1.0)
                        * (1.0 - u).powf(e - nf)
                        * cx.f(mu - nf, nu - nf, c - nf)?;
                    (lhs, rhs)
                }
                D8 => {
                    let shift = |v: f64| Dd::sum(v, nf);
                    let beta = e_dd + Dd::from_f64(nf);
                    let lhs = cx.diff_product((shift(mu), shift(nu), shift(c)), beta, nf + c - 1.0, n)?;
                    let rhs = an * pochhammer(c, n) * u.powf(c - 1.0) * (1.0 - u).powf(e) * cx.f(mu, nu, c)?;
                    (lhs, rhs)
                }
                _ => {
                    let beta = Dd::sum(nu, -c);
                    let lhs = cx.diff_product((Dd::ZERO, dnu, dc), beta, nf + c - 1.0, n)?;
                    let rhs =
                        an * pochhammer(c, n) * u.powf(c - 1.0) * (1.0 - u).powf(nu - c - nf) * cx.f(-nf, nu, c)?;
                    (lhs, rhs)
                }
            }
        }
        C1 | C2 | C3 => {
            let s = cx.f_series(mu, nu, c, 0.0, 1)?;
            let theta = theta_apply(&s).eval(point.x)?;
            let f = gauss_2f1(mu, nu, c, u, fcfg)?.value;
            match id {
                C1 => (theta + mu * f, mu * cx.f(mu + 1.0, nu, c)?),
                C2 => (theta + nu * f, nu * cx.f(mu, nu + 1.0, c)?),
                _ => (theta + (c - 1.0) * f, (c - 1.0) * cx.f(mu, nu, c - 1.0)?),
            }
        }
        C4 => ((mu - nu) * cx.f(mu, nu, c)?, mu * cx.f(mu + 1.0, nu, c)? - nu * cx.f(mu, nu + 1.0, c)?),
        C5 => (
            (mu - c + 1.0) * cx.f(mu, nu, c)?,
            mu * cx.f(mu + 1.0, nu, c)? - (c - 1.0) * cx.f(mu, nu, c - 1.0)?,
        ),
        C6 => (
            (mu + (nu - c) * u) * cx.f(mu, nu, c)?,
            mu * (1.0 - u) * cx.f(mu + 1.0, nu, c)? - (c - mu) * (c - nu) / c * u * cx.f(mu, nu, c + 1.0)?,
        ),
        C7 => ((1.0 - u) * cx.f(mu, nu, c)?, cx.f(mu - 1.0, nu, c)? - (c - nu) / c * u * cx.f(mu, nu, c + 1.0)?),
        C8 => ((1.0 - u) * cx.f(mu, nu, c)?, cx.f(mu, nu - 1.0, c)? - (c - mu) / c * u * cx.f(mu, nu, c + 1.0)?),
        E1 => (
            (2.0 * mu - c + (nu - mu) * u) * cx.f(mu, nu, c)?,
            mu * (1.0 - u) * cx.f(mu + 1.0, nu, c)? - (c - mu) * cx.f(mu - 1.0, nu, c)?,
        ),
        E2 => (
            (mu + nu - c) * cx.f(mu, nu, c)?,
            mu * (1.0 - u) * cx.f(mu + 1.0, nu, c)? - (c - nu) * cx.f(mu, nu - 1.0, c)?,
        ),
        E3 => (
            (c - mu - nu) * cx.f(mu, nu, c)?,
            (c - mu) * cx.f(mu - 1.0, nu, c)? - nu * (1.0 - u) * cx.f(mu, nu + 1.0, c)?,
        ),
        E4 => (
            (nu - mu) * (1.0 - u) * cx.f(mu, nu, c)?,
            (c - mu) * cx.f(mu - 1.0, nu, c)? - (c - nu) * cx.f(mu, nu - 1.0, c)?,
        ),
        E5 => (
            (1.0 - mu + (c - nu - 1.0) * u) * cx.f(mu, nu, c)?,
            (c - mu) * cx.f(mu - 1.0, nu, c)? - (c - 1.0) * (1.0 - u) * cx.f(mu, nu, c - 1.0)?,
        ),
        E6 => (
            (2.0 * nu - c + (mu - nu) * u) * cx.f(mu, nu, c)?,
            nu * (1.0 - u) * cx.f(mu, nu + 1.0, c)? - (c - nu) * cx.f(mu, nu - 1.0, c)?,
        ),
        R1 => {
            let mut acc = KahanSum::default();
            for k in 1..=n {
                acc.add(cx.f(mu + nf - k as f64 + 1.0, nu + 1.0, c + 1.0)?);
            }
            let base = cx.f(mu, nu, c)?;
            let rhs = if n == 0 { base } else { base + nu * u / c * acc.value() };
            (cx.f(mu + nf, nu, c)?, rhs)
        }
        R2 => {
            let mut acc = KahanSum::default();
            for k in 1..=n {
                acc.add(cx.f(mu - k as f64 + 1.0, nu + 1.0, c + 1.0)?);
            }
            let base = cx.f(mu, nu, c)?;
            let rhs = if n == 0 { base } else { base - nu * u / c * acc.value() };
            (cx.f(mu - nf, nu, c)?, rhs)
        }
        R3 => {
            let mut acc = KahanSum::default();
            for k in 0..=n {
                let kf = k as f64;
                let coef = binomial(n, k) * pochhammer(nu, k) / pochhammer(c, k) * u.powi(k as i32);
                acc.add(coef * cx.f(mu + kf, nu + kf, c + kf)?);
            }
            (cx.f(mu + nf, nu, c)?, acc.value())
        }
        R4 => {
            let mut acc = KahanSum::default();
            for k in 0..=n {
                let kf = k as f64;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let coef = sign * binomial(n, k) * pochhammer(nu, k) / pochhammer(c, k) * u.powi(k as i32);
                acc.add(coef * cx.f(mu, nu + kf, c + kf)?);
            }
            (cx.f(mu - nf, nu, c)?, acc.value())
        }
        R5 => {
            let den = pochhammer(c - nu, n);
            if den == 0.0 {
                return Err(domain("R5 needs (c - nu)_n nonzero"));
            }
            // alternating sum cancels heavily; carry it in double-double
            let max_terms = cx.trunc.series.max_terms;
            let (dmu, dnu, dc) = (Dd::from_f64(mu), Dd::from_f64(nu), Dd::from_f64(c));
            let mut acc = Dd::ZERO;
            let mut coef = Dd::ONE;
            for k in 0..=n {
                let kd = Dd::from_f64(k as f64);
                let f = gauss_2f1_dd(dmu, dnu + kd, dc + kd, u, max_terms)
                    .ok_or(Error::NoConvergence { terms: max_terms })?;
                acc = acc + coef * f;
                coef = -coef * Dd::from_f64((n - k) as f64) * (dnu + kd)
                    / ((dc + kd) * Dd::from_f64(k as f64 + 1.0));
            }
            (cx.f(mu, nu, c + nf)?, pochhammer(c, n) / den * acc.to_f64())
        }
        I1 => {
            let lhs = cx.frac_integral(|t| {
                gauss_2f1(mu, nu, c, t.powf(a), fcfg).map_or(f64::NAN, |r: EvalResult| r.value)
            })?;
            (lhs, conf_integral_2f1_closed(p, point.x)?)
        }
        I2 => {
            let integral = cx.frac_integral(|t| {
                gauss_2f1(mu + 1.0, nu + 1.0, c + 1.0, t.powf(a), fcfg).map_or(f64::NAN, |r: EvalResult| r.value)
            })?;
            (cx.f(mu, nu, c)?, 1.0 + a * mu * nu / c * integral)
        }
        L1 => {
            let s = point.s.expect("checked");
            let lhs = frac_laplace_auto(
                |t| {
                    let arg = u * -(-t.powf(a) / a).exp_m1();
                    gauss_2f1(mu, nu, 1.0, arg, fcfg).map_or(f64::NAN, |r| r.value)
                },
                a,
                s,
            )?;
            (lhs, laplace_shifted_2f1(p, point.x, s)?)
        }
    };
    if !out.0.is_finite() || !out.1.is_finite() {
        return Err(Error::NonFinite(format!("{id}: sides ({}, {})", out.0, out.1)));
    }
    Ok(out)
}

/// |lhs − rhs| / max(|lhs|, |rhs|, 1).
pub fn relative_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
}

// ---------------------------------------------------------------------------
// Sampling and verification

const ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
const POLE_MARGIN: f64 = 1e-2;

fn near_nonpositive_integer(v: f64) -> bool {
    v < POLE_MARGIN && (v - v.round()).abs() < POLE_MARGIN
}

/// Draws one (Params, Point) for an identity, or None when the draw falls
/// inside a rejection margin.
pub fn sample(id: RelationId, rng: &mut ChaCha20Rng) -> Option<(Params, Point)> {
    use RelationId::*;
    let mut mu: f64 = rng.random_range(-4.0..=4.0);
    let nu: f64 = rng.random_range(-4.0..=4.0);
    let mut c: f64 = rng.random_range(0.6..=6.0);
    let alpha = ALPHAS[rng.random_range(0..ALPHAS.len())];
    let mut u: f64 = rng.random_range(0.05..=0.85);
    let mut point = Point::default();

    if let Some((lo, hi)) = id.arity().n {
        point.n = Some(rng.random_range(lo..=hi));
    }
    let n = point.n.unwrap_or(0) as f64;
    match id {
        G1 | G2 | G3 => {
            let w: f64 = rng.random_range(0.05..=0.4);
            let u_hi = 0.85f64.min(1.0 - w / 0.6).min(0.9 - w);
            u = 0.05 + (u - 0.05) / 0.8 * (u_hi - 0.05);
            point.t = Some(w.powf(1.0 / alpha));
        }
        T1 => u = 0.05 + (u - 0.05) / 0.8 * 0.4,
        D9 => mu = -n,
        L1 => {
            c = 1.0;
            point.s = Some(rng.random_range(0.5..=4.0));
        }
        _ => {}
    }
    point.x = u.powf(1.0 / alpha);

    // pole and cancellation margins for every c-like parameter the id touches
    let mut poles = vec![c];
    match id {
        C3 | C5 | E5 => poles.push(c - 1.0),
        D4 | D7 => poles.push(c - n),
        I1 => {
            poles.push(c - 1.0);
            if [mu, nu, c].iter().any(|v| (v - 1.0).abs() < 0.05) {
                return None;
            }
        }
        R5 => {
            if (0..point.n.unwrap_or(0)).any(|k| (c - nu + k as f64).abs() < POLE_MARGIN) {
                return None;
            }
        }
        _ => {}
    }
    if id != L1 && poles.iter().any(|&v| near_nonpositive_integer(v)) {
        return None;
    }
    let p = Params::new(mu, nu, c, alpha).ok()?;
    Some((p, point))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstCase {
    pub params: Params,
    pub point: Point,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub id: RelationId,
    pub trials: usize,
    pub evaluated: usize,
    pub max_rel_residual: f64,
    pub worst_case: Option<WorstCase>,
    pub passed: bool,
    pub seed: u64,
    pub tol: f64,
    /// Valid draws whose evaluation raised an error (each counts as a failure).
    pub eval_errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_error: Option<String>,
}

fn id_stream(seed: u64, id: RelationId) -> ChaCha20Rng {
    let idx = RelationId::ALL.iter().position(|r| *r == id).expect("cataloged") as u64;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(idx + 1);
    rng
}

/// Randomized check of one identity; deterministic in `seed`.
pub fn verify_relation(id: RelationId, trials: usize, seed: u64, tol: f64) -> Result<RelationReport> {
    verify_relation_with(id, trials, seed, tol, &Truncation::default())
}

pub fn verify_relation_with(
    id: RelationId,
    trials: usize,
    seed: u64,
    tol: f64,
    trunc: &Truncation,
) -> Result<RelationReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let mut rng = id_stream(seed, id);
    let draws: Vec<(usize, Params, Point)> =
        (0..trials).filter_map(|i| sample(id, &mut rng).map(|(p, pt)| (i, p, pt))).collect();
    if draws.len() * 2 < trials {
        return Err(Error::InsufficientSamples { valid: draws.len(), trials });
    }
    let outcomes: Vec<(usize, Params, Point, Result<(f64, f64)>)> = draws
        .into_par_iter()
        .map(|(i, p, pt)| {
            let r = eval_relation_sides(id, &p, &pt, trunc);
            (i, p, pt, r)
        })
        .collect();

    let mut max_res = 0.0;
    let mut worst: Option<(usize, WorstCase)> = None;
    let mut eval_errors = 0;
    let mut first_error = None;
    for (i, p, pt, r) in &outcomes {
        match r {
            Ok((l, rr)) => {
                let res = relative_residual(*l, *rr);
                let better = match &worst {
                    None => true,
                    Some((j, _)) => res > max_res || (res == max_res && i < j),
                };
                if better {
                    max_res = res;
                    worst = Some((*i, WorstCase { params: *p, point: *pt, lhs: *l, rhs: *rr }));
                }
            }
            Err(e) => {
                eval_errors += 1;
                first_error.get_or_insert_with(|| format!("trial {i}: {e}"));
            }
        }
    }
    Ok(RelationReport {
        id,
        trials,
        evaluated: outcomes.len(),
        max_rel_residual: max_res,
        worst_case: worst.map(|w| w.1),
        passed: eval_errors == 0 && max_res <= tol,
        seed,
        tol,
        eval_errors,
        first_error,
    })
}
