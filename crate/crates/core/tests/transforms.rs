mod common;

use cfhyp::analytic::{
    euler_integral_eval, frac_laplace_2f1_series, frac_laplace_2f1_terms, frac_laplace_auto, frac_laplace_numeric,
    laplace_t_sin, LaplaceQuery, LaplaceTarget, QuadMethod, QuadratureSpec,
};
use cfhyp::hypercore::{gauss_2f1, SeriesConfig};
use cfhyp::{eval_2f1, Error, Params};
use common::{rel, rng, ALPHAS};
use rand::Rng;
use statrs::function::gamma::gamma;

#[test]
fn euler_integral_against_series() {
    let mut r = rng(41);
    for _ in 0..30 {
        let mu: f64 = r.random_range(-3.0..3.0);
        let nu: f64 = r.random_range(0.25..4.0);
        let c = nu + r.random_range(0.25..3.0);
        let a = ALPHAS[r.random_range(0..4)];
        let p = Params::new(mu, nu, c, a).unwrap();
        let x: f64 = r.random_range(0.05..0.8f64).powf(1.0 / a);
        let series = eval_2f1(&p, x, 1e-15, 20_000).unwrap().value;
        let gj = euler_integral_eval(&p, x, &QuadratureSpec::gauss_jacobi()).unwrap().value;
        let ts = euler_integral_eval(&p, x, &QuadratureSpec::tanh_sinh()).unwrap().value;
        assert!(rel(gj, series) < 1e-8, "{p:?} {gj} {series}");
        assert!(rel(ts, series) < 1e-8, "{p:?} {ts} {series}");
        assert!(rel(gj, ts) < 1e-9);
    }
}

#[test]
fn euler_integral_example_and_domain() {
    let p = Params::new(1.0, 1.0, 2.0, 1.0).unwrap();
    let v = euler_integral_eval(&p, 0.5, &QuadratureSpec::gauss_jacobi()).unwrap().value;
    assert!((v - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
    let bad = Params::new(1.0, 2.0, 1.5, 1.0).unwrap();
    assert!(matches!(euler_integral_eval(&bad, 0.5, &QuadratureSpec::default()), Err(Error::Domain(_))));
    assert!(QuadratureSpec::new(QuadMethod::TanhSinh, 2, 1e-10).is_err());
}

#[test]
fn classical_transforms_at_alpha_one() {
    // α = 1 reduces to the ordinary Laplace transform
    for s in [0.5, 1.0, 3.0] {
        let v = frac_laplace_auto(|t| t * t, 1.0, s).unwrap();
        assert!(rel(v, 2.0 / s.powi(3)) < 1e-10);
        let v = frac_laplace_auto(|t| (-t).exp(), 1.0, s).unwrap();
        assert!(rel(v, 1.0 / (s + 1.0)) < 1e-10);
    }
    let v = frac_laplace_auto(|t: f64| t.sin(), 1.0, 2.0).unwrap();
    assert!((v - 0.2).abs() < 1e-10);
    assert!((laplace_t_sin(0, 1.0, 1.0, 2.0).unwrap() - 0.2).abs() < 1e-12);
    // L[t sin t](s) = 2s/(s²+1)²
    assert!(rel(laplace_t_sin(1, 1.0, 1.0, 3.0).unwrap(), 6.0 / 100.0) < 1e-12);
}

#[test]
fn transform_is_linear() {
    let mut r = rng(2);
    for _ in 0..10 {
        let a = ALPHAS[r.random_range(0..4)];
        let s: f64 = r.random_range(0.5..3.0);
        let (k1, k2): (f64, f64) = (r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let f = |t: f64| t.powf(a).sin();
        let g = |t: f64| (1.0 + t).ln();
        let both = frac_laplace_auto(|t| k1 * f(t) + k2 * g(t), a, s).unwrap();
        let parts = k1 * frac_laplace_auto(f, a, s).unwrap() + k2 * frac_laplace_auto(g, a, s).unwrap();
        assert!((both - parts).abs() < 1e-10 * (1.0 + both.abs()));
    }
}

#[test]
fn basic_queries() {
    let one = LaplaceQuery::new(LaplaceTarget::One, 0.5, 2.0).unwrap();
    assert_eq!(one.closed_form().unwrap(), 0.5);
    let pw = LaplaceQuery::new(LaplaceTarget::PowerP { p: 0.5 }, 0.5, 1.0).unwrap();
    assert!(rel(pw.closed_form().unwrap(), 0.5) < 1e-14);
    for (target, a, s) in [
        (LaplaceTarget::One, 0.3, 1.5),
        (LaplaceTarget::PowerP { p: 0.7 }, 0.6, 2.0),
        (LaplaceTarget::ExpK { k: 0.5 }, 0.8, 2.0),
    ] {
        let q = LaplaceQuery::new(target, a, s).unwrap();
        assert!(rel(q.closed_form().unwrap(), q.numeric().unwrap()) < 1e-8, "{q:?}");
    }
    assert!(matches!(LaplaceQuery::new(LaplaceTarget::ExpK { k: 2.0 }, 0.5, 1.0), Err(Error::Domain(_))));
}

#[test]
fn power_closed_form_by_gamma() {
    // α^{p/α} Γ(1 + p/α) / s^{1+p/α}
    let (a, p, s) = (0.4f64, 1.1f64, 1.3f64);
    let q = p / a;
    let want = a.powf(q) * gamma(1.0 + q) / s.powf(1.0 + q);
    let got = LaplaceQuery::new(LaplaceTarget::PowerP { p }, a, s).unwrap().closed_form().unwrap();
    assert!(rel(got, want) < 1e-14);
}

#[test]
fn term_wise_series_against_quadrature() {
    let mut r = rng(13);
    let cfg = SeriesConfig::default();
    for _ in 0..12 {
        let m = r.random_range(0..=5) as f64;
        let nu: f64 = r.random_range(-3.0..3.0);
        let c: f64 = r.random_range(0.6..4.0);
        let a = ALPHAS[r.random_range(0..4)];
        let s: f64 = r.random_range(1.0..4.0);
        let p = Params::new(-m, nu, c, a).unwrap();
        let series = frac_laplace_2f1_series(&p, a, s, 100).unwrap().value;
        let numeric = frac_laplace_auto(|t| gauss_2f1(-m, nu, c, t.powf(a), &cfg).unwrap().value, a, s).unwrap();
        assert!((series - numeric).abs() <= 1e-6 * series.abs().max(1.0), "{p:?} s={s}");
    }
    // n = 0 term is 1/s
    let p = Params::new(0.5, 0.5, 1.5, 0.5).unwrap();
    assert_eq!(frac_laplace_2f1_terms(&p, 1.0, 4.0, 1)[0], 0.25);
    // divergent without termination when γ = α
    assert!(matches!(frac_laplace_2f1_series(&p, 0.5, 4.0, 200), Err(Error::NoConvergence { .. })));
}

#[test]
fn shifted_transform_matches_quadrature() {
    let mut r = rng(19);
    for _ in 0..8 {
        let mu: f64 = r.random_range(-3.0..3.0);
        let nu: f64 = r.random_range(-3.0..3.0);
        let a = ALPHAS[r.random_range(0..4)];
        let p = Params::new(mu, nu, 1.0, a).unwrap();
        let x: f64 = r.random_range(0.1..0.8f64).powf(1.0 / a);
        let q = LaplaceQuery::new(LaplaceTarget::ShiftedExpArg { params: p, x }, a, r.random_range(0.5..4.0)).unwrap();
        let (c, n) = (q.closed_form().unwrap(), q.numeric().unwrap());
        assert!((c - n).abs() <= 1e-6 * c.abs().max(1.0));
    }
}

#[test]
fn short_window_reports_fat_tail() {
    let r = frac_laplace_numeric(|_| 1.0, 1.0, 0.1, 1.0);
    assert!(matches!(r, Err(Error::TailTooFat { .. })));
}
