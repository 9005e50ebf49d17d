mod common;

use cfhyp::analytic::conf_integral_2f1_closed;
use cfhyp::cfghe::{cfghe_residual, gauss_coeffs, theta_form_residual, Solution};
use cfhyp::confcalc::{conf_diff_numeric, conf_integral_numeric, default_h0, series_diff, FracSeries};
use cfhyp::hypercore::{gauss_2f1, SeriesConfig};
use cfhyp::Params;
use common::{draw_params, rel, rng};
use rand::Rng;

#[test]
fn theta_form_is_scaled_ode_residual() {
    let mut r = rng(5);
    for _ in 0..40 {
        let (mu, nu, c, a) = draw_params(&mut r);
        let p = Params::new(mu, nu, c, a).unwrap();
        // arbitrary series, not a solution
        let coeffs: Vec<f64> = (0..25).map(|_| r.random_range(-1.0..1.0)).collect();
        let s = FracSeries::new(a, r.random_range(-0.5..0.5), coeffs);
        let x: f64 = r.random_range(0.1..0.8f64).powf(1.0 / a);
        let u = x.powf(a);
        let th = theta_form_residual(&s, &p, x).unwrap();
        let ode = cfghe_residual(Solution::Series(&s), &p, x, 0).unwrap();
        let scaled = u / (a * a) * ode.residual;
        assert!((th.residual - scaled).abs() <= 1e-12 * th.scale.max(u / (a * a) * ode.scale), "{th:?} {scaled}");
    }
}

#[test]
fn analytic_derivative_matches_limit_definition() {
    let mut r = rng(21);
    let cfg = SeriesConfig::default();
    for _ in 0..100 {
        let (mu, nu, c, a) = draw_params(&mut r);
        let x: f64 = r.random_range(0.05..0.7f64).powf(1.0 / a);
        let f = |t: f64| gauss_2f1(mu, nu, c, t.powf(a), &cfg).unwrap().value;
        let numeric = conf_diff_numeric(f, x, a, default_h0(x)).unwrap();
        // D^α F = α μν/c F(μ+1, ν+1; c+1; x^α)
        let exact = a * mu * nu / c * gauss_2f1(mu + 1.0, nu + 1.0, c + 1.0, x.powf(a), &cfg).unwrap().value;
        assert!((numeric - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{numeric} {exact}");
    }
}

#[test]
fn fundamental_lemma() {
    let a = 0.6;
    let dsin = move |x: f64| x.powf(1.0 - a) * x.cos();
    let dexp = move |x: f64| x.powf(1.0 - a) * (x / 2.0).exp() / 2.0;
    let s = FracSeries::new(a, 0.0, gauss_coeffs(0.7, -1.3, 2.2, 200));
    let ds = series_diff(&s, 1);
    for i in 1..=20 {
        let t = 0.04 * i as f64;
        let got = conf_integral_numeric(dsin, 0.0, t, a).unwrap();
        assert!((got - t.sin()).abs() < 1e-8);
        let got = conf_integral_numeric(dexp, 0.0, t, a).unwrap();
        assert!((got - ((t / 2.0).exp() - 1.0)).abs() < 1e-8);
        let got = conf_integral_numeric(|x| ds.eval(x).unwrap(), 0.0, t, a).unwrap();
        assert!((got - (s.eval(t).unwrap() - 1.0)).abs() < 1e-8);
    }
}

#[test]
fn closed_integral_of_2f1() {
    let mut r = rng(8);
    let cfg = SeriesConfig::default();
    for _ in 0..20 {
        let (mu, nu, c, a) = draw_params(&mut r);
        if [mu, nu, c].iter().any(|v| (v - 1.0).abs() < 0.05) {
            continue;
        }
        let p = Params::new(mu, nu, c, a).unwrap();
        let x: f64 = r.random_range(0.1..0.7f64).powf(1.0 / a);
        let closed = conf_integral_2f1_closed(&p, x).unwrap();
        let direct = conf_integral_numeric(|t| gauss_2f1(mu, nu, c, t.powf(a), &cfg).unwrap().value, 0.0, x, a).unwrap();
        assert!(rel(closed, direct) < 1e-8 || (closed - direct).abs() < 1e-10, "{closed} {direct}");
    }
}
