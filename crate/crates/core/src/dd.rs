//! Minimal double-double arithmetic for coefficient sequences that are
//! formed by heavy cancellation.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub(crate) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub(crate) fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact a + b.
    pub(crate) fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi));
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from_f64(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

/// ₂F₁(a, b; c; u) summed in double-double. Returns None when the series
/// has not settled within `max_terms`.
pub(crate) fn gauss_2f1_dd(a: Dd, b: Dd, c: Dd, u: f64, max_terms: usize) -> Option<Dd> {
    let u = Dd::from_f64(u);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut quiet = 0;
    for k in 0..max_terms {
        let kd = Dd::from_f64(k as f64);
        term = term * (a + kd) * (b + kd) / ((c + kd) * Dd::from_f64(k as f64 + 1.0)) * u;
        if term.hi == 0.0 {
            return Some(sum);
        }
        sum = sum + term;
        if term.hi.abs() <= 1e-32 * sum.hi.abs() {
            quiet += 1;
            if quiet == 3 {
                return Some(sum);
            }
        } else {
            quiet = 0;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_below_f64_epsilon() {
        let a = Dd::from_f64(1.0) + Dd::from_f64(1e-20);
        let b = a - Dd::ONE;
        assert!((b.to_f64() - 1e-20).abs() < 1e-35);
        let third = Dd::ONE / Dd::from_f64(3.0);
        let back = third * Dd::from_f64(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        assert_eq!(Dd::sum(0.1, 0.2).to_f64(), 0.1 + 0.2);
        assert_eq!(Dd::ZERO.to_f64(), 0.0);
    }

    #[test]
    fn gauss_dd_matches_closed_forms() {
        // ₂F₁(1, 1; 2; u) = −ln(1−u)/u
        let u = 0.5;
        let v = gauss_2f1_dd(Dd::ONE, Dd::ONE, Dd::from_f64(2.0), u, 5000).unwrap();
        assert!((v.to_f64() - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
        // terminating: ₂F₁(−2, 1; 1; u) = (1−u)²
        let v = gauss_2f1_dd(Dd::from_f64(-2.0), Dd::ONE, Dd::ONE, 0.3, 50).unwrap();
        assert!((v.to_f64() - 0.49).abs() < 1e-16);
    }
}
