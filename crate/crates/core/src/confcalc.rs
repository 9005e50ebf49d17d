//! Conformable derivative and integral: exact term-wise action on
//! fractional power series, and numeric versions from the definitions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypercore::pos_pow;
use crate::quad::gk_adaptive;

/// Absolute tolerance of the adaptive fractional integral.
pub const INTEGRAL_ABS_TOL: f64 = 1e-10;
/// Bisection depth cap of the adaptive fractional integral.
pub const INTEGRAL_MAX_DEPTH: u32 = 40;

/// x^{α·offset} Σₙ coeffs[n] x^{αn}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FracSeries {
    pub alpha: f64,
    pub offset: f64,
    pub coeffs: Vec<f64>,
}

impl FracSeries {
    pub fn new(alpha: f64, offset: f64, coeffs: Vec<f64>) -> Self {
        FracSeries { alpha, offset, coeffs }
    }

    pub fn zero(alpha: f64) -> Self {
        FracSeries { alpha, offset: 0.0, coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Value at x > 0.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("series evaluated at nonpositive x = {x}")));
        }
        self.eval_u(x.powf(self.alpha))
    }

    /// Value as a function of u = x^α. Negative u is allowed when the
    /// offset is an integer, since then the series is a Laurent polynomial in u.
    pub fn eval_u(&self, u: f64) -> Result<f64> {
        if self.coeffs.is_empty() {
            return Ok(0.0);
        }
        let mut acc = 0.0;
        for &a in self.coeffs.iter().rev() {
            acc = acc * u + a;
        }
        let pre = if self.offset == 0.0 {
            1.0
        } else if self.offset.fract() == 0.0 && self.offset.abs() < i32::MAX as f64 {
            u.powi(self.offset as i32)
        } else {
            pos_pow(u, self.offset)?
        };
        let v = pre * acc;
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("series value at u = {u}")));
        }
        Ok(v)
    }

    pub fn scale(&self, k: f64) -> Self {
        FracSeries { coeffs: self.coeffs.iter().map(|c| c * k).collect(), ..self.clone() }
    }

    /// Sum of two series on the same exponent grid.
    pub fn add(&self, other: &FracSeries) -> Result<Self> {
        if self.alpha != other.alpha {
            return Err(Error::InvalidArgument("series have different alpha".into()));
        }
        if other.coeffs.is_empty() {
            return Ok(self.clone());
        }
        if self.coeffs.is_empty() {
            return Ok(other.clone());
        }
        let shift = other.offset - self.offset;
        if shift.fract() != 0.0 {
            return Err(Error::InvalidArgument("series offsets differ by a non-integer".into()));
        }
        let base = self.offset.min(other.offset);
        let s0 = (self.offset - base) as usize;
        let s1 = (other.offset - base) as usize;
        let len = (s0 + self.coeffs.len()).max(s1 + other.coeffs.len());
        let mut coeffs = vec![0.0; len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[s0 + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[s1 + i] += c;
        }
        Ok(FracSeries { alpha: self.alpha, offset: base, coeffs })
    }

    fn strip_leading_zeros(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            return self;
        }
        self.coeffs.drain(..lead);
        self.offset += lead as f64;
        self
    }
}

/// Applies D^α term-wise `order` times.
pub fn series_diff(s: &FracSeries, order: u32) -> FracSeries {
    let mut cur = s.clone();
    for _ in 0..order {
        if cur.coeffs.is_empty() {
            break;
        }
        let coeffs = cur
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| cur.alpha * (cur.offset + n as f64) * a)
            .collect();
        cur = FracSeries { alpha: cur.alpha, offset: cur.offset - 1.0, coeffs }.strip_leading_zeros();
    }
    cur
}

/// θ^α = (1/α) x^α D^α, acting as multiplication by the exponent index.
pub fn theta_apply(s: &FracSeries) -> FracSeries {
    let coeffs = s.coeffs.iter().enumerate().map(|(n, a)| (s.offset + n as f64) * a).collect();
    FracSeries { coeffs, ..s.clone() }
}

/// Default initial step for [`conf_diff_numeric`].
pub fn default_h0(x: f64) -> f64 {
    1e-4 * x.max(1.0)
}

/// Numeric D^α f(x) from the limit definition: central differences in h
/// with two levels of Richardson extrapolation.
pub fn conf_diff_numeric<F: Fn(f64) -> f64>(f: F, x: f64, alpha: f64, h0: f64) -> Result<f64> {
    if !(x > 0.0) || !(alpha > 0.0 && alpha <= 1.0) || !(h0 > 0.0) {
        return Err(Error::InvalidArgument(format!("need x > 0, alpha in (0,1], h0 > 0; got {x}, {alpha}, {h0}")));
    }
    let scale = x.powf(1.0 - alpha);
    let mut h = h0;
    while h * scale >= 0.5 * x {
        h *= 0.5;
    }
    let quotient = |h: f64| -> Result<f64> {
        let d = h * scale;
        let (fp, fm) = (f(x + d), f(x - d));
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::NonFinite(format!("f is non-finite near x = {x}")));
        }
        Ok((fp - fm) / (2.0 * h))
    };
    let d1 = quotient(h)?;
    let d2 = quotient(h / 2.0)?;
    let d4 = quotient(h / 4.0)?;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d4 - d2) / 3.0;
    Ok((16.0 * r2 - r1) / 15.0)
}

/// ∫ₐᵗ f(x) x^{α−1} dx, computed as ∫ f((αu)^{1/α}) du over u = x^α/α.
pub fn conf_integral_numeric<F: Fn(f64) -> f64>(f: F, a: f64, t: f64, alpha: f64) -> Result<f64> {
    conf_integral_numeric_tol(f, a, t, alpha, INTEGRAL_ABS_TOL)
}

pub fn conf_integral_numeric_tol<F: Fn(f64) -> f64>(f: F, a: f64, t: f64, alpha: f64, abs_tol: f64) -> Result<f64> {
    if !(a >= 0.0) || !(t > a) || !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 <= a < t and alpha in (0,1]; got a={a}, t={t}, alpha={alpha}")));
    }
    let ua = a.powf(alpha) / alpha;
    let ut = t.powf(alpha) / alpha;
    let inv = 1.0 / alpha;
    let g = |u: f64| f((alpha * u).powf(inv));
    Ok(gk_adaptive(g, ua, ut, abs_tol, INTEGRAL_MAX_DEPTH)?.value)
}
