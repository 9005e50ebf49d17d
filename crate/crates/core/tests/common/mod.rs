#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Unevaluated sum hi + lo.
#[derive(Clone, Copy)]
pub struct D2(pub f64, pub f64);

impl D2 {
    pub fn add(self, o: D2) -> D2 {
        let s = self.0 + o.0;
        let v = s - self.0;
        let e = (self.0 - (s - v)) + (o.0 - v) + self.1 + o.1;
        let h = s + e;
        D2(h, e - (h - s))
    }

    pub fn mul(self, o: D2) -> D2 {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
        let h = p + e;
        D2(h, e - (h - p))
    }

    pub fn div(self, o: D2) -> D2 {
        let q = self.0 / o.0;
        let r = self.add(o.mul(D2(-q, 0.0)));
        let q2 = r.0 / o.0;
        D2(q, 0.0).add(D2(q2, 0.0))
    }

    pub fn f(x: f64) -> D2 {
        D2(x, 0.0)
    }
}

/// Gauss series Σ (a)_k(b)_k/((c)_k k!) u^k carried in double-double, summed
/// until the terms are 1e−30 of the total, with no acceleration or tail model.
pub fn brute_2f1(a: f64, b: f64, c: f64, u: f64) -> f64 {
    let mut term = D2::f(1.0);
    let mut sum = D2::f(1.0);
    let mut small = 0;
    for k in 0..200_000 {
        let kf = k as f64;
        let num = D2::f(a + kf).mul(D2::f(b + kf)).mul(D2::f(u));
        let den = D2::f(c + kf).mul(D2::f(kf + 1.0));
        term = term.mul(num.div(den));
        if term.0 == 0.0 {
            break;
        }
        sum = sum.add(term);
        if term.0.abs() < 1e-30 * sum.0.abs() {
            small += 1;
            if small > 5 {
                break;
            }
        } else {
            small = 0;
        }
    }
    sum.0 + sum.1
}

/// Pₙ(v) by Bonnet's recurrence.
pub fn legendre_p(n: u32, v: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, v);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * v * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Tₙ(v) by the three-term recurrence.
pub fn chebyshev_t(n: u32, v: f64) -> f64 {
    let (mut t0, mut t1) = (1.0, v);
    if n == 0 {
        return t0;
    }
    for _ in 1..n {
        let t2 = 2.0 * v * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    t1
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub const ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// μ, ν ∈ [−4, 4], c ∈ [0.6, 6] away from integers, α from the usual set.
pub fn draw_params(r: &mut ChaCha20Rng) -> (f64, f64, f64, f64) {
    let mu = r.random_range(-4.0..4.0);
    let nu = r.random_range(-4.0..4.0);
    let c = loop {
        let c: f64 = r.random_range(0.6..6.0);
        if (c - c.round()).abs() > 0.05 {
            break c;
        }
    };
    (mu, nu, c, ALPHAS[r.random_range(0..4)])
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
