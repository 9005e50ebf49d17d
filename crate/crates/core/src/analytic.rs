//! Euler integral representation, the closed-form fractional integral of
//! ₂F₁, and the conformable fractional Laplace transform
//!
//!   L_α[f](s) = ∫₀^∞ e^{−s t^α/α} f(t) t^{α−1} dt.

use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::hypercore::{gauss_2f1, nonpositive_integer, pos_pow, EvalResult, KahanSum, Params, SeriesConfig};
use crate::quad::{beta_integral_tanh_sinh, beta_mean_gauss_jacobi, gk_adaptive};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadMethod {
    GaussJacobi,
    TanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub method: QuadMethod,
    /// Initial node count for Gauss–Jacobi; sets the initial step 8/nodes
    /// for tanh-sinh.
    pub nodes: usize,
    pub abs_tol: f64,
}

impl QuadratureSpec {
    pub fn new(method: QuadMethod, nodes: usize, abs_tol: f64) -> Result<Self> {
        if nodes < 4 {
            return Err(Error::InvalidArgument(format!("quadrature needs at least 4 nodes, got {nodes}")));
        }
        if !(abs_tol > 0.0) {
            return Err(Error::InvalidArgument("abs_tol must be positive".into()));
        }
        Ok(QuadratureSpec { method, nodes, abs_tol })
    }

    pub fn gauss_jacobi() -> Self {
        QuadratureSpec { method: QuadMethod::GaussJacobi, nodes: 64, abs_tol: 1e-13 }
    }

    pub fn tanh_sinh() -> Self {
        QuadratureSpec { method: QuadMethod::TanhSinh, nodes: 64, abs_tol: 1e-13 }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec::gauss_jacobi()
    }
}

/// ₂F₁(μ, ν; c; x^α) from Γ(c)/(Γ(ν)Γ(c−ν)) ∫₀¹ τ^{ν−1}(1−τ)^{c−ν−1}(1−x^ατ)^{−μ} dτ.
pub fn euler_integral_eval(p: &Params, x: f64, q: &QuadratureSpec) -> Result<EvalResult> {
    let (mu, nu, c) = (p.mu(), p.nu(), p.c());
    if !(nu > 0.0 && c > nu) {
        return Err(Error::Domain(format!("integral representation needs c > nu > 0, got c = {c}, nu = {nu}")));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    let u = x.powf(p.alpha());
    if u >= 1.0 {
        return Err(Error::Domain(format!("x^alpha = {u} must be < 1")));
    }
    // 1 − uτ written through 1 − τ to keep accuracy near τ = 1
    let g = |_tau: f64, omt: f64| ((1.0 - u) + u * omt).powf(-mu);
    let (pa, qb) = (nu - 1.0, c - nu - 1.0);
    let r = match q.method {
        QuadMethod::GaussJacobi => beta_mean_gauss_jacobi(g, pa, qb, q.nodes, q.abs_tol)?,
        QuadMethod::TanhSinh => {
            let raw = beta_integral_tanh_sinh(g, pa, qb, 8.0 / q.nodes as f64, q.abs_tol)?;
            let beta = (ln_gamma(nu) + ln_gamma(c - nu) - ln_gamma(c)).exp();
            crate::quad::QuadResult { value: raw.value / beta, err_est: raw.err_est / beta, evals: raw.evals }
        }
    };
    Ok(EvalResult { value: r.value, abs_err_est: r.err_est, terms_used: r.evals, terminated: false })
}

/// (c−1)/(α(μ−1)(ν−1)) · [₂F₁(μ−1, ν−1; c−1; x^α) − 1].
pub fn conf_integral_2f1_closed(p: &Params, x: f64) -> Result<f64> {
    let (mu, nu, c, a) = (p.mu(), p.nu(), p.c(), p.alpha());
    if mu == 1.0 || nu == 1.0 || c == 1.0 {
        return Err(Error::Domain("closed form needs mu, nu, c all different from 1".into()));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    let u = x.powf(a);
    let f = gauss_2f1(mu - 1.0, nu - 1.0, c - 1.0, u, &SeriesConfig::default())?;
    Ok((c - 1.0) / (a * (mu - 1.0) * (nu - 1.0)) * (f.value - 1.0))
}

/// Relative threshold for the Laplace truncation tail.
pub const LAPLACE_TAIL_TOL: f64 = 1e-12;
const LAPLACE_ABS_TOL: f64 = 1e-13;
const LAPLACE_DOUBLINGS: u32 = 8;

fn check_order(alpha: f64, s: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0,1], got {alpha}")));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    Ok(())
}

/// Numeric L_α[f](s) as ∫₀^{u_max} e^{−sv} f((αv)^{1/α}) dv plus the
/// [u_max, 2u_max] tail, which also serves as the truncation bound.
pub fn frac_laplace_numeric<F: Fn(f64) -> f64>(f: F, alpha: f64, s: f64, u_max: f64) -> Result<f64> {
    check_order(alpha, s)?;
    if !(u_max > 0.0) {
        return Err(Error::InvalidArgument(format!("u_max must be positive, got {u_max}")));
    }
    let inv = 1.0 / alpha;
    let g = |v: f64| {
        let e = (-s * v).exp();
        if e == 0.0 {
            0.0
        } else {
            e * f((alpha * v).powf(inv))
        }
    };
    let body = gk_adaptive(g, 0.0, u_max, LAPLACE_ABS_TOL, 40)?;
    let tail = gk_adaptive(g, u_max, 2.0 * u_max, LAPLACE_ABS_TOL, 40)?;
    let abs_tail = gk_adaptive(|v| g(v).abs(), u_max, 2.0 * u_max, LAPLACE_ABS_TOL, 40)?;
    if abs_tail.value > LAPLACE_TAIL_TOL * body.value.abs().max(1.0) {
        return Err(Error::TailTooFat { tail: abs_tail.value, u_max });
    }
    Ok(body.value + tail.value)
}

/// [`frac_laplace_numeric`] starting at u_max = 40/s, doubling u_max while
/// the tail is too large.
pub fn frac_laplace_auto<F: Fn(f64) -> f64>(f: F, alpha: f64, s: f64) -> Result<f64> {
    check_order(alpha, s)?;
    let mut u_max = 40.0 / s;
    let mut last = None;
    for _ in 0..=LAPLACE_DOUBLINGS {
        match frac_laplace_numeric(&f, alpha, s, u_max) {
            Err(e @ Error::TailTooFat { .. }) => last = Some(e),
            other => return other,
        }
        u_max *= 2.0;
    }
    Err(last.expect("loop ran"))
}

/// Terms Γ-weighted as in L_γ[₂F₁(μ, ν; c; t^α)]:
/// (μ)ₙ(ν)ₙ/((c)ₙ n!) · γ^{nα/γ} Γ(1+nα/γ) / s^{1+nα/γ}, for n < n_terms.
pub fn frac_laplace_2f1_terms(p: &Params, gamma: f64, s: f64, n_terms: usize) -> Vec<f64> {
    let r = p.alpha() / gamma;
    let integral_r = r.fract() == 0.0;
    let mut out = Vec::with_capacity(n_terms);
    // coefficient part (μ)ₙ(ν)ₙ/((c)ₙ n!) and the Γ/power part, by recursion
    let mut coef = 1.0;
    let mut weight = 1.0 / s;
    for n in 0..n_terms {
        out.push(coef * weight);
        let nf = n as f64;
        coef *= (p.mu() + nf) * (p.nu() + nf) / ((p.c() + nf) * (nf + 1.0));
        let gamma_ratio = if integral_r {
            let base = nf * r;
            (1..=r as u32).map(|j| base + j as f64).product::<f64>()
        } else {
            (ln_gamma(1.0 + (nf + 1.0) * r) - ln_gamma(1.0 + nf * r)).exp()
        };
        weight *= gamma_ratio * (gamma / s).powf(r);
        if coef == 0.0 {
            break;
        }
    }
    out
}

/// L_γ[₂F₁(μ, ν; c; t^α)](s) by term-wise transformation of the series.
///
/// The series converges when it terminates or when α < γ; otherwise the
/// Γ growth makes it divergent and NoConvergence is returned.
pub fn frac_laplace_2f1_series(p: &Params, gamma: f64, s: f64, n_max: usize) -> Result<EvalResult> {
    check_order(gamma, s)?;
    if let Some(m) = p.termination_degree() {
        let m = m as usize;
        if m + 1 > n_max {
            return Err(Error::NoConvergence { terms: n_max });
        }
        let terms = frac_laplace_2f1_terms(p, gamma, s, m + 1);
        let mut acc = KahanSum::default();
        for t in &terms {
            acc.add(*t);
        }
        return Ok(EvalResult { value: acc.value(), abs_err_est: 0.0, terms_used: m + 1, terminated: true });
    }
    if nonpositive_integer(p.c()).is_some() || p.alpha() >= gamma {
        return Err(Error::NoConvergence { terms: n_max });
    }
    let terms = frac_laplace_2f1_terms(p, gamma, s, n_max);
    let cfg = SeriesConfig { tol: crate::hypercore::DEFAULT_TOL, max_terms: n_max };
    crate::hypercore::sum_series(terms[0], |n, _| terms[n], &cfg)
}

/// L_α[t^{nα} sin(a t^α)](s)
/// = a α^{n+1} Γ(n+2)/s^{n+2} · ₂F₁((n+2)/2, (n+3)/2; 3/2; −(αa/s)²).
pub fn laplace_t_sin(n: u32, a: f64, alpha: f64, s: f64) -> Result<f64> {
    check_order(alpha, s)?;
    let z = (alpha * a / s).powi(2);
    if z >= 1.0 {
        return Err(Error::Domain(format!("(alpha a / s)^2 = {z} must be < 1")));
    }
    let nf = n as f64;
    let (big_a, big_b, big_c) = ((nf + 2.0) / 2.0, (nf + 3.0) / 2.0, 1.5);
    // Pfaff: F(A,B;C;−z) = (1+z)^{−A} F(A, C−B; C; z/(1+z))
    let f = gauss_2f1(big_a, big_c - big_b, big_c, z / (1.0 + z), &SeriesConfig::default())?.value;
    let fact: f64 = (1..=n + 1).map(|k| k as f64).product();
    Ok(a * alpha.powi(n as i32 + 1) * fact / s.powi(n as i32 + 2) * (1.0 + z).powf(-big_a) * f)
}

/// (1/s) ₂F₁(μ, ν; s+1; x^α), the transform of t ↦ ₂F₁(μ, ν; 1; x^α(1 − e^{−t^α/α})).
pub fn laplace_shifted_2f1(p: &Params, x: f64, s: f64) -> Result<f64> {
    check_order(p.alpha(), s)?;
    if p.c() != 1.0 {
        return Err(Error::Domain(format!("shifted transform is stated for c = 1, got c = {}", p.c())));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    let u = x.powf(p.alpha());
    Ok(gauss_2f1(p.mu(), p.nu(), s + 1.0, u, &SeriesConfig::default())?.value / s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LaplaceTarget {
    One,
    PowerP { p: f64 },
    ExpK { k: f64 },
    Cfghf { params: Params },
    TPowNSinA { n: u32, a: f64 },
    ShiftedExpArg { params: Params, x: f64 },
}

/// A cataloged transform: L_γ of the target at s (γ = alpha except for cfghf).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplaceQuery {
    pub target: LaplaceTarget,
    pub alpha: f64,
    pub gamma: f64,
    pub s: f64,
}

impl LaplaceQuery {
    pub fn new(target: LaplaceTarget, alpha: f64, s: f64) -> Result<Self> {
        LaplaceQuery { target, alpha, gamma: alpha, s }.validated()
    }

    pub fn with_gamma(target: LaplaceTarget, alpha: f64, gamma: f64, s: f64) -> Result<Self> {
        LaplaceQuery { target, alpha, gamma, s }.validated()
    }

    fn validated(self) -> Result<Self> {
        check_order(self.alpha, self.s)?;
        check_order(self.gamma, self.s)?;
        match self.target {
            LaplaceTarget::ExpK { k } if self.s <= k => {
                Err(Error::Domain(format!("exp target needs s > k, got s = {}, k = {k}", self.s)))
            }
            LaplaceTarget::PowerP { p } if p / self.alpha <= -1.0 => {
                Err(Error::Domain(format!("power target needs p > -alpha, got p = {p}")))
            }
            LaplaceTarget::Cfghf { params } => {
                if params.alpha() != self.alpha {
                    return Err(Error::InvalidArgument("params alpha differs from the query alpha".into()));
                }
                let guard = self.alpha * (params.mu() * params.nu() / params.c()).abs().max(1.0);
                if self.gamma == self.alpha && self.s <= guard {
                    return Err(Error::Domain(format!("series transform needs s > {guard}")));
                }
                Ok(self)
            }
            LaplaceTarget::TPowNSinA { a, .. } if (self.alpha * a / self.s).powi(2) >= 1.0 => {
                Err(Error::Domain("tsin target needs (alpha a / s)^2 < 1".into()))
            }
            LaplaceTarget::ShiftedExpArg { params, x } => {
                if params.c() != 1.0 || params.alpha() != self.alpha {
                    return Err(Error::Domain("shifted target needs c = 1 and matching alpha".into()));
                }
                if !(x > 0.0 && x.powf(self.alpha) < 1.0) {
                    return Err(Error::Domain(format!("shifted target needs 0 < x^alpha < 1, got x = {x}")));
                }
                Ok(self)
            }
            _ => Ok(self),
        }
    }

    pub fn closed_form(&self) -> Result<f64> {
        let (a, s) = (self.alpha, self.s);
        match self.target {
            LaplaceTarget::One => Ok(1.0 / s),
            LaplaceTarget::PowerP { p } => {
                let q = p / a;
                Ok(pos_pow(a, q)? * gamma(1.0 + q) / s.powf(1.0 + q))
            }
            LaplaceTarget::ExpK { k } => Ok(1.0 / (s - k)),
            LaplaceTarget::Cfghf { params } => Ok(frac_laplace_2f1_series(&params, self.gamma, s, 10_000)?.value),
            LaplaceTarget::TPowNSinA { n, a: amp } => laplace_t_sin(n, amp, a, s),
            LaplaceTarget::ShiftedExpArg { params, x } => laplace_shifted_2f1(&params, x, s),
        }
    }

    pub fn numeric(&self) -> Result<f64> {
        let (a, s) = (self.alpha, self.s);
        let cfg = SeriesConfig::default();
        match self.target {
            LaplaceTarget::One => frac_laplace_auto(|_| 1.0, a, s),
            LaplaceTarget::PowerP { p } => frac_laplace_auto(|t: f64| t.powf(p), a, s),
            LaplaceTarget::ExpK { k } => frac_laplace_auto(|t: f64| (k * t.powf(a) / a).exp(), a, s),
            LaplaceTarget::Cfghf { params } => frac_laplace_auto(
                |t: f64| {
                    gauss_2f1(params.mu(), params.nu(), params.c(), t.powf(a), &cfg).map_or(f64::NAN, |r| r.value)
                },
                self.gamma,
                s,
            ),
            LaplaceTarget::TPowNSinA { n, a: amp } => {
                frac_laplace_auto(|t: f64| t.powf(a * n as f64) * (amp * t.powf(a)).sin(), a, s)
            }
            LaplaceTarget::ShiftedExpArg { params, x } => {
                let u = x.powf(a);
                frac_laplace_auto(
                    |t: f64| {
                        let w = u * -(-t.powf(a) / a).exp_m1();
                        gauss_2f1(params.mu(), params.nu(), 1.0, w, &cfg).map_or(f64::NAN, |r| r.value)
                    },
                    a,
                    s,
                )
            }
        }
    }
}
