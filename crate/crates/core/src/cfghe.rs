//! Frobenius machinery for the conformable hypergeometric equation
//!
//!   x^α(1−x^α) D^αD^α y + α[c − (μ+ν+1)x^α] D^α y − α²μν y = 0
//!
//! at its singular points x = 0, x = 1 and x = ∞.

use serde::Serialize;

use crate::confcalc::{series_diff, theta_apply, FracSeries};
use crate::error::{Error, Result};
use crate::hypercore::{domain_check, gauss_2f1, pochhammer, pos_pow, EvalResult, Params, Region, SeriesConfig};

/// How the local variable w relates to x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// w = x^α
    UEqXAlpha,
    /// w = 1 − x^α
    UEqOneMinusXAlpha,
    /// w = x^{−α}
    UEqXNegAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefactorBase {
    None,
    XAlpha,
    OneMinusXAlpha,
    XNegAlpha,
}

/// One Frobenius solution: w^{prefactor_exp} · ₂F₁(inner; w).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionBranch {
    pub transform: Transform,
    pub prefactor_base: PrefactorBase,
    pub prefactor_exp: f64,
    pub inner: Params,
    pub region: Region,
}

impl SolutionBranch {
    fn plain(transform: Transform, region: Region, inner: Params) -> Self {
        SolutionBranch { transform, prefactor_base: PrefactorBase::None, prefactor_exp: 0.0, inner, region }
    }

    fn with_prefactor(transform: Transform, region: Region, exp: f64, inner: Params) -> Self {
        let prefactor_base = match transform {
            Transform::UEqXAlpha => PrefactorBase::XAlpha,
            Transform::UEqOneMinusXAlpha => PrefactorBase::OneMinusXAlpha,
            Transform::UEqXNegAlpha => PrefactorBase::XNegAlpha,
        };
        SolutionBranch { transform, prefactor_base, prefactor_exp: exp, inner, region }
    }

    /// Local variable w at x.
    pub fn local_arg(&self, x: f64) -> f64 {
        let u = x.powf(self.inner.alpha());
        match self.transform {
            Transform::UEqXAlpha => u,
            Transform::UEqOneMinusXAlpha => 1.0 - u,
            Transform::UEqXNegAlpha => 1.0 / u,
        }
    }

    /// Exponent of x in the leading behaviour x^{α·(…)} near the singular point.
    pub fn x_exponent(&self) -> f64 {
        let a = self.inner.alpha();
        match self.prefactor_base {
            PrefactorBase::None | PrefactorBase::OneMinusXAlpha => 0.0,
            PrefactorBase::XAlpha => a * self.prefactor_exp,
            PrefactorBase::XNegAlpha => -a * self.prefactor_exp,
        }
    }

    /// Branch value at x inside its region.
    pub fn eval(&self, x: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
        check_region(self, x)?;
        let w = self.local_arg(x);
        let inner = gauss_2f1(self.inner.mu(), self.inner.nu(), self.inner.c(), w, cfg)?;
        let pre = if self.prefactor_base == PrefactorBase::None { 1.0 } else { pos_pow(w, self.prefactor_exp)? };
        Ok(EvalResult { value: pre * inner.value, abs_err_est: pre.abs() * inner.abs_err_est, ..inner })
    }

    /// Truncated local series in the variable w (w = ζ^α).
    pub fn local_series(&self, n_terms: usize) -> FracSeries {
        let p = &self.inner;
        FracSeries::new(p.alpha(), self.prefactor_exp, gauss_coeffs(p.mu(), p.nu(), p.c(), n_terms))
    }
}

fn check_region(b: &SolutionBranch, x: f64) -> Result<()> {
    if domain_check(&b.inner, x, b.region) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} is outside the {} region", b.region.as_str())))
    }
}

/// First `n_terms` Gauss coefficients (a)_k(b)_k/((c)_k k!), stopping early
/// after the last nonzero coefficient of a terminating series.
pub fn gauss_coeffs(a: f64, b: f64, c: f64, n_terms: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_terms);
    let mut t = 1.0;
    for k in 0..n_terms {
        out.push(t);
        let kf = k as f64;
        t *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        if t == 0.0 {
            break;
        }
    }
    out
}

/// Roots {μ, ν} of s² − s(μ+ν) + μν = 0, sorted.
pub fn indicial_roots(p: &Params) -> (f64, f64) {
    let (a, b) = (p.mu(), p.nu());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Frobenius coefficients a₀ = 1, …, a_{n_max} about x = ∞ for root s.
pub fn frobenius_coeffs(p: &Params, s: f64, n_max: usize) -> Result<FracSeries> {
    let (mu, nu, c) = (p.mu(), p.nu(), p.c());
    let near = |r: f64| (s - r).abs() <= 1e-12 * r.abs().max(1.0);
    if !near(mu) && !near(nu) {
        return Err(Error::InvalidArgument(format!("s = {s} is not an indicial root ({mu}, {nu})")));
    }
    let mut coeffs = Vec::with_capacity(n_max + 1);
    let mut a = 1.0;
    coeffs.push(a);
    for n in 0..n_max {
        let k = s + n as f64;
        let den = (k + 1.0) * ((k + 1.0) - mu - nu) + mu * nu;
        if den.abs() <= 1e-13 * ((k + 1.0).powi(2) + (mu * nu).abs()) {
            return Err(Error::DegenerateRoot(format!(
                "recurrence denominator vanishes at n = {} (mu - nu = {} is an integer)",
                n + 1,
                mu - nu
            )));
        }
        a *= k * (k + 1.0 - c) / den;
        coeffs.push(a);
    }
    Ok(FracSeries::new(p.alpha(), s, coeffs))
}

/// Closed-form Frobenius coefficient aₙ about x = ∞ for root s ∈ {μ, ν}.
pub fn frobenius_closed_form(p: &Params, s: f64, n: u32) -> f64 {
    let (own, other) = if s == p.mu() { (p.mu(), p.nu()) } else { (p.nu(), p.mu()) };
    pochhammer(own, n) * pochhammer(own - p.c() + 1.0, n) / (pochhammer(1.0, n) * pochhammer(own - other + 1.0, n))
}

fn is_integer(v: f64) -> bool {
    v.fract() == 0.0
}

/// Branches about x = 0.
pub fn solutions_at_zero(p: &Params) -> Result<[SolutionBranch; 2]> {
    let (mu, nu, c) = (p.mu(), p.nu(), p.c());
    if is_integer(c) {
        return Err(Error::DegenerateRoot(format!("c = {c} is an integer")));
    }
    let t = Transform::UEqXAlpha;
    let r = Region::Origin;
    Ok([
        SolutionBranch::plain(t, r, *p),
        SolutionBranch::with_prefactor(t, r, 1.0 - c, p.with(1.0 - c + mu, 1.0 - c + nu, 2.0 - c)?),
    ])
}

/// Branches about x = 1.
pub fn solutions_at_one(p: &Params) -> Result<[SolutionBranch; 2]> {
    let (mu, nu, c) = (p.mu(), p.nu(), p.c());
    let e = c - mu - nu;
    if is_integer(e) {
        return Err(Error::DegenerateRoot(format!("c - mu - nu = {e} is an integer")));
    }
    let t = Transform::UEqOneMinusXAlpha;
    let r = Region::Unit;
    Ok([
        SolutionBranch::plain(t, r, p.with(mu, nu, mu + nu + 1.0 - c)?),
        SolutionBranch::with_prefactor(t, r, e, p.with(c - nu, c - mu, e + 1.0)?),
    ])
}

/// Branches about x = ∞.
pub fn solutions_at_infinity(p: &Params) -> Result<[SolutionBranch; 2]> {
    let (mu, nu, c) = (p.mu(), p.nu(), p.c());
    if is_integer(mu - nu) {
        return Err(Error::DegenerateRoot(format!("mu - nu = {} is an integer", mu - nu)));
    }
    let t = Transform::UEqXNegAlpha;
    let r = Region::Infinity;
    Ok([
        SolutionBranch::with_prefactor(t, r, mu, p.with(mu, mu - c + 1.0, mu - nu + 1.0)?),
        SolutionBranch::with_prefactor(t, r, nu, p.with(nu, nu - c + 1.0, nu - mu + 1.0)?),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeResidual {
    pub x: f64,
    pub residual: f64,
    pub scale: f64,
}

impl OdeResidual {
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.scale
    }
}

/// Candidate solution for [`cfghe_residual`].
#[derive(Debug, Clone, Copy)]
pub enum Solution<'a> {
    Branch(&'a SolutionBranch),
    /// Series in x about the origin.
    Series(&'a FracSeries),
}

/// y, D^α y and D^αD^α y of a series at local variable w.
fn derivs(s: &FracSeries, w: f64) -> Result<[f64; 3]> {
    Ok([s.eval_u(w)?, series_diff(s, 1).eval_u(w)?, series_diff(s, 2).eval_u(w)?])
}

/// Combines y and its derivatives in x into the equation's residual.
pub fn ode_residual(p: &Params, x: f64, u: f64, one_minus_u: f64, d: [f64; 3]) -> OdeResidual {
    let a = p.alpha();
    let t2 = u * one_minus_u * d[2];
    let t1 = a * (p.c() - (p.mu() + p.nu() + 1.0) * u) * d[1];
    let t0 = -a * a * p.mu() * p.nu() * d[0];
    let scale = t2.abs().max(t1.abs()).max(t0.abs());
    OdeResidual { x, residual: t2 + t1 + t0, scale: if scale > 0.0 { scale } else { 1.0 } }
}

/// Residual of the equation for a branch (truncated to `n_terms`) or a series.
pub fn cfghe_residual(y: Solution<'_>, p: &Params, x: f64, n_terms: usize) -> Result<OdeResidual> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    let a = p.alpha();
    let u = x.powf(a);
    match y {
        Solution::Series(s) => Ok(ode_residual(p, x, u, 1.0 - u, derivs(s, u)?)),
        Solution::Branch(b) => {
            check_region(b, x)?;
            match b.transform {
                Transform::UEqXAlpha => Ok(ode_residual(p, x, u, 1.0 - u, derivs(&b.local_series(n_terms), u)?)),
                Transform::UEqOneMinusXAlpha => {
                    // D_x = −D_t for t^α = 1 − x^α
                    let w = 1.0 - u;
                    let [y0, y1, y2] = derivs(&b.local_series(n_terms), w)?;
                    Ok(ode_residual(p, x, u, w, [y0, -y1, y2]))
                }
                Transform::UEqXNegAlpha => {
                    // ζ^α = x^{−α}: D_x = −ζ^{2α} D_ζ,
                    // D_xD_x = 2α ζ^{3α} D_ζ + ζ^{4α} D_ζD_ζ
                    let w = 1.0 / u;
                    let series = frobenius_coeffs(p, b.prefactor_exp, n_terms.saturating_sub(1))?;
                    let [y0, y1, y2] = derivs(&series, w)?;
                    let w2 = w * w;
                    let d1 = -w2 * y1;
                    let d2 = 2.0 * a * w2 * w * y1 + w2 * w2 * y2;
                    Ok(ode_residual(p, x, u, 1.0 - u, [y0, d1, d2]))
                }
            }
        }
    }
}

/// θ-operator form [θ(θ+c−1) − x^α(θ+μ)(θ+ν)] y for a series in x.
///
/// Equals (x^α/α²) times the residual from [`cfghe_residual`].
pub fn theta_form_residual(s: &FracSeries, p: &Params, x: f64) -> Result<OdeResidual> {
    let t1 = theta_apply(s);
    let t2 = theta_apply(&t1);
    let u = x.powf(p.alpha());
    let (y, ty, tty) = (s.eval(x)?, t1.eval(x)?, t2.eval(x)?);
    let left = tty + (p.c() - 1.0) * ty;
    let right = u * (tty + (p.mu() + p.nu()) * ty + p.mu() * p.nu() * y);
    let scale = left.abs().max(right.abs());
    Ok(OdeResidual { x, residual: left - right, scale: if scale > 0.0 { scale } else { 1.0 } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(mu: f64, nu: f64, c: f64, a: f64) -> Params {
        Params::new(mu, nu, c, a).unwrap()
    }

    #[test]
    fn roots() {
        assert_eq!(indicial_roots(&p(2.0, 3.0, 1.5, 0.5)), (2.0, 3.0));
        assert_eq!(indicial_roots(&p(0.0, 0.0, 1.5, 0.5)), (0.0, 0.0));
        assert_eq!(indicial_roots(&p(4.0, -1.0, 1.5, 0.5)), (-1.0, 4.0));
    }

    #[test]
    fn frobenius_examples() {
        let q = p(1.0, 0.5, 1.0, 0.5);
        assert_eq!(frobenius_coeffs(&q, 1.0, 0).unwrap().coeffs, vec![1.0]);
        let s = frobenius_coeffs(&q, 1.0, 20).unwrap();
        assert_relative_eq!(s.coeffs[1], 2.0 / 3.0, max_relative = 1e-15);
        for n in 0..=20 {
            assert_relative_eq!(s.coeffs[n], frobenius_closed_form(&q, 1.0, n as u32), max_relative = 1e-13);
        }
        assert!(frobenius_coeffs(&q, 0.3, 3).is_err());
        assert!(matches!(frobenius_coeffs(&p(1.0, 3.0, 1.5, 0.5), 1.0, 5), Err(Error::DegenerateRoot(_))));
    }

    #[test]
    fn degenerate_pairs() {
        assert!(matches!(solutions_at_zero(&p(0.3, 0.7, 2.0, 0.5)), Err(Error::DegenerateRoot(_))));
        assert!(matches!(solutions_at_one(&p(0.3, 0.7, 2.0, 0.5)), Err(Error::DegenerateRoot(_))));
        assert!(matches!(solutions_at_infinity(&p(1.0, 2.0, 3.0, 1.0)), Err(Error::DegenerateRoot(_))));
    }

    #[test]
    fn branch_limits() {
        let q = p(0.3, 0.7, 1.2, 0.5);
        let cfg = SeriesConfig::default();
        let z = solutions_at_zero(&q).unwrap();
        assert_relative_eq!(z[0].eval(1e-20, &cfg).unwrap().value, 1.0, max_relative = 1e-9);
        let o = solutions_at_one(&q).unwrap();
        assert_relative_eq!(o[0].eval(1.0 - 1e-14, &cfg).unwrap().value, 1.0, max_relative = 1e-9);
        let inf = solutions_at_infinity(&q).unwrap();
        let x: f64 = 1e16;
        let lead = x.powf(-0.5 * 0.3);
        assert_relative_eq!(inf[0].eval(x, &cfg).unwrap().value / lead, 1.0, max_relative = 1e-6);
        assert!(matches!(inf[0].eval(0.5, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn mu_zero_branches_constant() {
        let q = p(0.0, 0.7, 1.2, 0.5);
        let cfg = SeriesConfig::default();
        for x in [0.1, 0.5, 0.9] {
            assert_eq!(solutions_at_zero(&q).unwrap()[0].eval(x, &cfg).unwrap().value, 1.0);
            assert_eq!(solutions_at_one(&q).unwrap()[0].eval(x, &cfg).unwrap().value, 1.0);
        }
        let r = cfghe_residual(Solution::Branch(&solutions_at_zero(&q).unwrap()[0]), &q, 0.3, 60).unwrap();
        assert!(r.residual.abs() <= 1e-14 * r.scale);
    }

    #[test]
    fn residual_examples() {
        let q = p(1.0, 0.5, 1.3, 0.5);
        let x = 0.4f64.powf(2.0);
        let b = solutions_at_zero(&q).unwrap();
        let r = cfghe_residual(Solution::Branch(&b[0]), &q, x, 60).unwrap();
        assert!(r.relative() <= 1e-9, "{r:?}");
        let mut s = b[0].local_series(60);
        s.coeffs[1] += 1e-3;
        let r = cfghe_residual(Solution::Series(&s), &q, x, 60).unwrap();
        assert!(r.relative() >= 1e-5, "{r:?}");
    }

    #[test]
    fn all_branches_solve() {
        let q = p(0.3, 0.7, 1.2, 0.5);
        let zero = solutions_at_zero(&q).unwrap();
        let one = solutions_at_one(&q).unwrap();
        let inf = solutions_at_infinity(&q).unwrap();
        for b in &zero {
            let r = cfghe_residual(Solution::Branch(b), &q, 0.25, 80).unwrap();
            assert!(r.relative() <= 1e-9, "{r:?}");
        }
        for b in &one {
            let r = cfghe_residual(Solution::Branch(b), &q, 0.36, 80).unwrap();
            assert!(r.relative() <= 1e-9, "{r:?}");
        }
        for b in &inf {
            let r = cfghe_residual(Solution::Branch(b), &q, 16.0, 80).unwrap();
            assert!(r.relative() <= 1e-9, "{r:?}");
        }
        assert!(cfghe_residual(Solution::Branch(&inf[0]), &q, 0.5, 80).is_err());
    }

    #[test]
    fn infinity_branches_swap() {
        let q = p(0.3, 0.7, 1.2, 0.5);
        let a = solutions_at_infinity(&q).unwrap();
        let b = solutions_at_infinity(&q.swapped()).unwrap();
        assert_eq!(a[0], b[1]);
        assert_eq!(a[1], b[0]);
    }

    #[test]
    fn theta_form_matches() {
        let q = p(0.8, -0.35, 1.7, 0.75);
        let x = 0.3f64;
        let s = FracSeries::new(0.75, 0.0, gauss_coeffs(0.8, -0.35, 1.7, 40));
        let r1 = cfghe_residual(Solution::Series(&s), &q, x, 40).unwrap();
        let r7 = theta_form_residual(&s, &q, x).unwrap();
        let u = x.powf(0.75);
        assert_relative_eq!(r7.residual, u / (0.75 * 0.75) * r1.residual, max_relative = 1e-6, epsilon = 1e-15);
    }
}
