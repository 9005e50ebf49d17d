mod common;

use cfhyp::cfghe::{
    cfghe_residual, frobenius_closed_form, frobenius_coeffs, indicial_roots, solutions_at_infinity,
    solutions_at_one, solutions_at_zero, theta_form_residual, Solution, SolutionBranch,
};
use cfhyp::hypercore::SeriesConfig;
use cfhyp::{Error, Params};
use common::{rel, rng, ALPHAS};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

fn off_integer(v: f64) -> bool {
    (v - v.round()).abs() > 0.05
}

fn generic(r: &mut ChaCha20Rng) -> Params {
    loop {
        let mu: f64 = r.random_range(-3.0..3.0);
        let nu: f64 = r.random_range(-3.0..3.0);
        let c: f64 = r.random_range(0.6..4.0);
        if off_integer(c) && off_integer(c - mu - nu) && off_integer(mu - nu) {
            return Params::new(mu, nu, c, ALPHAS[r.random_range(0..4)]).unwrap();
        }
    }
}

/// x where the branch's local argument equals w.
fn x_for(b: &SolutionBranch, w: f64) -> f64 {
    let u = match b.transform {
        cfhyp::cfghe::Transform::UEqXAlpha => w,
        cfhyp::cfghe::Transform::UEqOneMinusXAlpha => 1.0 - w,
        cfhyp::cfghe::Transform::UEqXNegAlpha => 1.0 / w,
    };
    u.powf(1.0 / b.inner.alpha())
}

#[test]
fn all_six_branches_solve_the_equation() {
    let mut r = rng(17);
    for _ in 0..25 {
        let p = generic(&mut r);
        let sets = [solutions_at_zero(&p).unwrap(), solutions_at_one(&p).unwrap(), solutions_at_infinity(&p).unwrap()];
        for b in sets.iter().flatten() {
            for w in [0.1, 0.2, 0.3] {
                let x = x_for(b, w);
                let res = cfghe_residual(Solution::Branch(b), &p, x, 60).unwrap();
                assert!(res.relative() <= 1e-8, "{p:?} {b:?} x={x} {res:?}");
            }
        }
    }
}

#[test]
fn branch_values_are_finite_inside_regions() {
    let p = Params::new(0.3, 0.7, 1.2, 0.5).unwrap();
    let cfg = SeriesConfig::default();
    for b in solutions_at_infinity(&p).unwrap() {
        let v = b.eval(x_for(&b, 0.25), &cfg).unwrap();
        assert!(v.value.is_finite());
        assert!(matches!(b.eval(x_for(&b, 2.0), &cfg), Err(Error::Domain(_))));
    }
    // leading behaviour x^{−αμ}, x^{−αν}
    let [b1, b2] = solutions_at_infinity(&p).unwrap();
    assert!(rel(b1.x_exponent(), -0.5 * 0.3) < 1e-15);
    assert!(rel(b2.x_exponent(), -0.5 * 0.7) < 1e-15);
}

#[test]
fn frobenius_recurrence_matches_closed_form() {
    let mut r = rng(29);
    for _ in 0..30 {
        let p = generic(&mut r);
        let (s1, s2) = indicial_roots(&p);
        for s in [s1, s2] {
            let series = frobenius_coeffs(&p, s, 30).unwrap();
            assert_eq!(series.coeffs.len(), 31);
            for n in 0..=30u32 {
                let a = series.coeffs[n as usize];
                let b = frobenius_closed_form(&p, s, n);
                assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300), "n={n} {a} {b}");
            }
        }
    }
}

#[test]
fn origin_branch_satisfies_theta_form() {
    let p = Params::new(0.4, -1.1, 1.9, 0.75).unwrap();
    let [b1, b2] = solutions_at_zero(&p).unwrap();
    for b in [b1, b2] {
        let s = b.local_series(200);
        let res = theta_form_residual(&s, &p, 0.3).unwrap();
        assert!(res.relative() < 1e-12, "{res:?}");
    }
}

#[test]
fn degenerate_points_are_reported() {
    let p = Params::new(1.0, 2.0, 3.0, 1.0).unwrap();
    assert!(matches!(solutions_at_infinity(&p), Err(Error::DegenerateRoot(_))));
    assert!(matches!(solutions_at_zero(&p), Err(Error::DegenerateRoot(_))));
    let q = Params::new(0.25, 0.5, 1.75, 1.0).unwrap();
    assert!(matches!(solutions_at_one(&q), Err(Error::DegenerateRoot(_))));
    assert!(frobenius_coeffs(&q, 0.4, 5).is_err());
}
