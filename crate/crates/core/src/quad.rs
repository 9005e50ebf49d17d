//! Quadrature rules: adaptive Gauss–Kronrod, Gauss–Jacobi (Golub–Welsch)
//! and tanh-sinh on [0, 1] with a beta-type weight.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_est: f64,
    pub evals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss 7-point weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut finite = fc.is_finite();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(mid - dx);
        let f2 = f(mid + dx);
        finite &= f1.is_finite() && f2.is_finite();
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !finite {
        return Err(Error::NonFinite(format!("integrand non-finite on [{a}, {b}]")));
    }
    Ok((kron * half, ((kron - gauss) * half).abs()))
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

const MAX_SEGMENTS: usize = 4000;

/// Globally adaptive G7–K15 integration of f over [a, b].
///
/// The target is max(abs_tol, 50ε·|I|); a segment deeper than `max_depth`
/// bisections that still dominates the error fails with QuadFailure.
pub fn gk_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, err_est: 0.0, evals: 0 });
    }
    let (v, e) = gk15(&f, a, b)?;
    let mut segs = vec![Segment { a, b, value: v, err: e, depth: 0 }];
    let mut evals = 15;
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        let target = abs_tol.max(50.0 * f64::EPSILON * total.abs());
        if err <= target {
            return Ok(QuadResult { value: total, err_est: err, evals });
        }
        let (idx, worst) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, s)| (i, s.depth))
            .expect("nonempty");
        if worst >= max_depth || segs.len() >= MAX_SEGMENTS {
            return Err(Error::QuadFailure { estimate: err, tol: target });
        }
        let s = segs.swap_remove(idx);
        let m = 0.5 * (s.a + s.b);
        let (v1, e1) = gk15(&f, s.a, m)?;
        let (v2, e2) = gk15(&f, m, s.b)?;
        evals += 30;
        segs.push(Segment { a: s.a, b: m, value: v1, err: e1, depth: s.depth + 1 });
        segs.push(Segment { a: m, b: s.b, value: v2, err: e2, depth: s.depth + 1 });
    }
}

/// Gauss–Jacobi rule for the weight (1−x)^a (1+x)^b on [−1, 1].
///
/// Weights are normalized to sum to one, so Σ wᵢ g(xᵢ) approximates the
/// weighted mean of g.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Gauss-Jacobi needs at least one node".into()));
        }
        if !(a > -1.0 && b > -1.0) {
            return Err(Error::Domain(format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
        }
        let ab = a + b;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let kf = k as f64;
            let diag = if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                let s = 2.0 * kf + ab;
                (b * b - a * a) / (s * (s + 2.0))
            };
            m[(k, k)] = diag;
            if k + 1 < n {
                let j = kf + 1.0;
                let off = if k == 0 {
                    (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
                } else {
                    let s = 2.0 * j + ab;
                    (4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
                };
                m[(k, k + 1)] = off;
                m[(k + 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::new(m);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        Ok(GaussJacobi {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        })
    }
}

/// Weighted mean of g over [0, 1] under τ^p (1−τ)^q, by Gauss–Jacobi with
/// node doubling from `n0` until successive estimates agree.
///
/// g receives (τ, 1−τ).
pub fn beta_mean_gauss_jacobi<G: Fn(f64, f64) -> f64>(
    g: G,
    p: f64,
    q: f64,
    n0: usize,
    abs_tol: f64,
) -> Result<QuadResult> {
    const MAX_NODES: usize = 1024;
    let rule_value = |n: usize| -> Result<f64> {
        let rule = GaussJacobi::new(n, q, p)?;
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let tau = 0.5 * (1.0 + x);
            let v = g(tau, 0.5 * (1.0 - x));
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("integrand at tau = {tau}")));
            }
            acc += w * v;
        }
        Ok(acc)
    };
    let mut n = n0.max(4);
    let mut prev = rule_value(n)?;
    let mut evals = n;
    loop {
        let next_n = 2 * n;
        if next_n > MAX_NODES {
            return Err(Error::QuadFailure { estimate: f64::NAN, tol: abs_tol });
        }
        let cur = rule_value(next_n)?;
        evals += next_n;
        let diff = (cur - prev).abs();
        if diff <= abs_tol * cur.abs().max(1.0) {
            return Ok(QuadResult { value: cur, err_est: diff, evals });
        }
        prev = cur;
        n = next_n;
    }
}

/// ∫₀¹ τ^p (1−τ)^q g(τ, 1−τ) dτ by tanh-sinh with step halving.
///
/// The weight is evaluated in log space so exponents near −1 do not
/// overflow at nodes crowded against the endpoints.
pub fn beta_integral_tanh_sinh<G: Fn(f64, f64) -> f64>(
    g: G,
    p: f64,
    q: f64,
    h0: f64,
    abs_tol: f64,
) -> Result<QuadResult> {
    if !(p > -1.0 && q > -1.0) {
        return Err(Error::Domain(format!("beta exponents must exceed -1, got ({p}, {q})")));
    }
    const T_MAX: f64 = 6.5;
    const MAX_LEVELS: u32 = 12;
    let pi = std::f64::consts::PI;
    let level_sum = |h: f64| -> Result<(f64, usize)> {
        let mut acc = 0.0;
        let mut count = 0;
        let kmax = (T_MAX / h).ceil() as i64;
        for k in -kmax..=kmax {
            let t = k as f64 * h;
            let sh = pi * t.abs().sinh();
            let e = (-sh).exp();
            let l1p = e.ln_1p();
            // near side is e/(1+e), far side 1/(1+e)
            let (ln_near, near, far) = (-sh - l1p, e / (1.0 + e), 1.0 / (1.0 + e));
            let ln_far = -l1p;
            let (tau, omt, ln_tau, ln_omt) = if t >= 0.0 {
                (far, near, ln_far, ln_near)
            } else {
                (near, far, ln_near, ln_far)
            };
            let ln_w = (pi * t.cosh()).ln() - sh - 2.0 * l1p;
            let ln_total = ln_w + p * ln_tau + q * ln_omt;
            if ln_total < -745.0 {
                continue;
            }
            let gv = g(tau, omt);
            if !gv.is_finite() {
                return Err(Error::NonFinite(format!("integrand at tau = {tau}")));
            }
            acc += ln_total.exp() * gv;
            count += 1;
        }
        Ok((acc * h, count))
    };
    let mut h = h0;
    let (mut prev, mut evals) = level_sum(h)?;
    for _ in 0..MAX_LEVELS {
        h *= 0.5;
        let (cur, c) = level_sum(h)?;
        evals += c;
        let diff = (cur - prev).abs();
        if diff <= abs_tol * cur.abs().max(1.0) {
            return Ok(QuadResult { value: cur, err_est: diff, evals });
        }
        prev = cur;
    }
    Err(Error::QuadFailure { estimate: f64::NAN, tol: abs_tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gk_polynomial_and_exp() {
        let r = gk_adaptive(|x| x * x, 0.0, 3.0, 1e-12, 40).unwrap();
        assert_relative_eq!(r.value, 9.0, max_relative = 1e-14);
        let r = gk_adaptive(|x: f64| (-x).exp(), 0.0, 40.0, 1e-13, 40).unwrap();
        assert_relative_eq!(r.value, 1.0 - (-40.0f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn gk_reports_non_finite() {
        assert!(matches!(gk_adaptive(|_| f64::NAN, 0.0, 1.0, 1e-10, 40), Err(Error::NonFinite(_))));
    }

    #[test]
    fn legendre_case_of_jacobi() {
        // a = b = 0: Gauss–Legendre, weights 1/2 each for two nodes
        let r = GaussJacobi::new(2, 0.0, 0.0).unwrap();
        assert_relative_eq!(r.nodes[1], 1.0 / 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(r.weights[0], 0.5, max_relative = 1e-14);
    }

    #[test]
    fn jacobi_weighted_mean() {
        // mean of τ under Beta(p+1, q+1) is (p+1)/(p+q+2)
        let (p, q) = (-0.4, 1.3);
        let r = beta_mean_gauss_jacobi(|t, _| t, p, q, 8, 1e-14).unwrap();
        assert_relative_eq!(r.value, (p + 1.0) / (p + q + 2.0), max_relative = 1e-13);
    }

    #[test]
    fn tanh_sinh_beta() {
        // B(0.5, 0.5) = π
        let r = beta_integral_tanh_sinh(|_, _| 1.0, -0.5, -0.5, 0.5, 1e-13).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI, max_relative = 1e-12);
        // ∫ τ (1-τ)^2 = 1/12
        let r = beta_integral_tanh_sinh(|_, _| 1.0, 1.0, 2.0, 0.5, 1e-13).unwrap();
        assert_relative_eq!(r.value, 1.0 / 12.0, max_relative = 1e-12);
    }
}
