//! Named conformable equations that reduce to the hypergeometric equation
//! under a change of variable t^α = T(x^α).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cfghe::{gauss_coeffs, solutions_at_zero, OdeResidual, PrefactorBase, SolutionBranch, Transform};
use crate::confcalc::{series_diff, FracSeries};
use crate::error::{Error, Result};
use crate::hypercore::{Params, Region};

/// Series length for branches that do not terminate.
const OPEN_SERIES_TERMS: usize = 400;
/// Largest |t^α| at which a non-terminating branch is evaluated.
const OPEN_SERIES_RADIUS: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Legendre,
    Chebyshev,
    Fibonacci,
    Lucas,
    ExpExample,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Legendre, Family::Chebyshev, Family::Fibonacci, Family::Lucas, Family::ExpExample];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Legendre => "legendre",
            Family::Chebyshev => "chebyshev",
            Family::Fibonacci => "fibonacci",
            Family::Lucas => "lucas",
            Family::ExpExample => "exp_example",
        }
    }

    /// Whether the family is indexed by a degree n.
    pub fn has_degree(&self) -> bool {
        !matches!(self, Family::ExpExample)
    }

    pub fn substitution(&self) -> Substitution {
        match self {
            Family::Legendre | Family::Chebyshev => Substitution::HalfOneMinus,
            Family::Fibonacci | Family::Lucas => Substitution::OnePlusQuarterSquare,
            Family::ExpExample => Substitution::OneMinusExp,
        }
    }

    /// (μ, ν, c) as affine forms in n.
    pub fn param_forms(&self) -> [AffineN; 3] {
        let f = AffineN::new;
        match self {
            Family::Legendre => [f(0, -1, 1), f(1, 1, 1), f(1, 0, 1)],
            Family::Chebyshev => [f(0, -1, 1), f(0, 1, 1), f(1, 0, 2)],
            Family::Fibonacci => [f(1, -1, 2), f(1, 1, 2), f(3, 0, 2)],
            Family::Lucas => [f(0, 1, 2), f(0, -1, 2), f(1, 0, 2)],
            Family::ExpExample => [f(1, 0, 1), f(-1, 0, 1), f(-1, 0, 2)],
        }
    }

    /// Plain-text form of the equation, with v = x^α and D = D^α.
    pub fn equation_text(&self) -> &'static str {
        match self {
            Family::Legendre => "(1 - v^2) DDy - 2a v Dy + a^2 n(n+1) y = 0",
            Family::Chebyshev => "(1 - v^2) DDy - a v Dy + a^2 n^2 y = 0",
            Family::Fibonacci => "(v^2 + 4) DDy + 3a v Dy - a^2 (n^2 - 1) y = 0",
            Family::Lucas => "(v^2 + 4) DDy + a v Dy - a^2 n^2 y = 0",
            Family::ExpExample => "(1 - e^v) DDy + (a/2) Dy + a^2 e^v y = 0",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == key || (key == "exp" && *f == Family::ExpExample))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown equation family '{s}'")))
    }
}

/// (constant + slope·n) / den with small integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineN {
    pub constant: i64,
    pub slope: i64,
    pub den: i64,
}

impl AffineN {
    pub const fn new(constant: i64, slope: i64, den: i64) -> Self {
        AffineN { constant, slope, den }
    }

    pub fn eval(&self, n: u32) -> f64 {
        (self.constant + self.slope * n as i64) as f64 / self.den as f64
    }
}

impl fmt::Display for AffineN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.constant, self.slope) {
            (c, 0) => c.to_string(),
            (0, 1) => "n".into(),
            (0, -1) => "-n".into(),
            (0, s) => format!("{s}n"),
            (c, 1) => format!("{c}+n"),
            (c, -1) => format!("{c}-n"),
            (c, s) if s < 0 => format!("{c}{s}n"),
            (c, s) => format!("{c}+{s}n"),
        };
        if self.den == 1 {
            f.write_str(&num)
        } else if self.slope != 0 && self.constant != 0 {
            write!(f, "({num})/{}", self.den)
        } else {
            write!(f, "{num}/{}", self.den)
        }
    }
}

impl Serialize for AffineN {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// t^α as a function of v = x^α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Substitution {
    /// t^α = (1 − x^α)/2
    HalfOneMinus,
    /// t^α = 1 + x^{2α}/4
    OnePlusQuarterSquare,
    /// t^α = 1 − e^{x^α}
    OneMinusExp,
}

impl Substitution {
    pub fn describe(&self) -> &'static str {
        match self {
            Substitution::HalfOneMinus => "t^a = (1 - x^a)/2",
            Substitution::OnePlusQuarterSquare => "t^a = 1 + x^(2a)/4",
            Substitution::OneMinusExp => "t^a = 1 - e^(x^a)",
        }
    }

    /// T(v), T′(v), T″(v).
    pub fn map(&self, v: f64) -> [f64; 3] {
        match self {
            Substitution::HalfOneMinus => [(1.0 - v) / 2.0, -0.5, 0.0],
            Substitution::OnePlusQuarterSquare => [1.0 + v * v / 4.0, v / 2.0, 0.5],
            Substitution::OneMinusExp => {
                let e = v.exp();
                [1.0 - e, -e, -e]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NamedEquation {
    pub name: Family,
    pub alpha: f64,
    pub degree_n: Option<u32>,
}

impl NamedEquation {
    pub fn new(name: Family, alpha: f64, degree_n: Option<u32>) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0,1], got {alpha}")));
        }
        match (name.has_degree(), degree_n) {
            (true, None) => Err(Error::InvalidArgument(format!("{name} needs a degree n"))),
            (false, Some(_)) => Err(Error::InvalidArgument(format!("{name} takes no degree"))),
            _ => Ok(NamedEquation { name, alpha, degree_n }),
        }
    }

    fn n(&self) -> f64 {
        self.degree_n.unwrap_or(0) as f64
    }

    /// Coefficients (P₂, P₁, P₀) of P₂·DDy + P₁·Dy + P₀·y = 0 at v = x^α.
    pub fn coefficients(&self, v: f64) -> [f64; 3] {
        let (a, n) = (self.alpha, self.n());
        match self.name {
            Family::Legendre => [1.0 - v * v, -2.0 * a * v, a * a * n * (n + 1.0)],
            Family::Chebyshev => [1.0 - v * v, -a * v, a * a * n * n],
            Family::Fibonacci => [v * v + 4.0, 3.0 * a * v, -a * a * (n * n - 1.0)],
            Family::Lucas => [v * v + 4.0, a * v, -a * a * n * n],
            Family::ExpExample => [1.0 - v.exp(), a / 2.0, a * a * v.exp()],
        }
    }

    /// Residual of the equation given y, D^α y, D^α D^α y at x.
    pub fn residual(&self, x: f64, d: [f64; 3]) -> OdeResidual {
        let [p2, p1, p0] = self.coefficients(x.powf(self.alpha));
        let terms = [p2 * d[2], p1 * d[1], p0 * d[0]];
        let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        OdeResidual { x, residual: terms.iter().sum(), scale: if scale > 0.0 { scale } else { 1.0 } }
    }
}

/// A named equation rewritten as the hypergeometric equation in t.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reduction {
    pub equation: NamedEquation,
    pub substitution: Substitution,
    pub target_params: Params,
    pub branch1: SolutionBranch,
    pub branch2: Option<SolutionBranch>,
    /// Why branch 2 is missing, when it is.
    pub degeneracy: Option<String>,
}

pub fn reduce_to_cfghe(eq: &NamedEquation) -> Result<Reduction> {
    let n = eq.degree_n.unwrap_or(0);
    let [mu, nu, c] = eq.name.param_forms().map(|f| f.eval(n));
    let target_params = Params::new(mu, nu, c, eq.alpha)?;
    let (branch1, branch2, degeneracy) = match solutions_at_zero(&target_params) {
        Ok([b1, b2]) => (b1, Some(b2), None),
        Err(Error::DegenerateRoot(msg)) => (solution_one(&target_params), None, Some(msg)),
        Err(e) => return Err(e),
    };
    Ok(Reduction { equation: *eq, substitution: eq.name.substitution(), target_params, branch1, branch2, degeneracy })
}

fn solution_one(p: &Params) -> SolutionBranch {
    SolutionBranch {
        transform: Transform::UEqXAlpha,
        prefactor_base: PrefactorBase::None,
        prefactor_exp: 0.0,
        inner: *p,
        region: Region::Origin,
    }
}

impl Reduction {
    /// Branches present, in order.
    pub fn branches(&self) -> Vec<&SolutionBranch> {
        std::iter::once(&self.branch1).chain(self.branch2.as_ref()).collect()
    }

    /// Three x points used for residual diagnostics.
    pub fn sample_points(&self) -> [f64; 3] {
        let vs = match self.substitution {
            Substitution::HalfOneMinus => [0.3, 0.5, 0.7],
            Substitution::OnePlusQuarterSquare => [0.5, 1.0, 1.5],
            Substitution::OneMinusExp => [0.2, 0.5, 0.8],
        };
        vs.map(|v: f64| v.powf(1.0 / self.equation.alpha))
    }

    /// y, D^α y, D^α D^α y of a branch, as a function of x.
    pub fn branch_derivs(&self, branch: &SolutionBranch, x: f64) -> Result<[f64; 3]> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("x must be positive, got {x}")));
        }
        let a = self.equation.alpha;
        let [w, dw, ddw] = self.substitution.map(x.powf(a));
        let p = &branch.inner;
        let coeffs = gauss_coeffs(p.mu(), p.nu(), p.c(), OPEN_SERIES_TERMS);
        if p.termination_degree().is_none() && w.abs() >= OPEN_SERIES_RADIUS {
            return Err(Error::Domain(format!("branch does not terminate and |t^a| = {w} is too large")));
        }
        let s = FracSeries::new(a, branch.prefactor_exp, coeffs);
        let (y, dy, ddy) = (s.eval_u(w)?, series_diff(&s, 1).eval_u(w)?, series_diff(&s, 2).eval_u(w)?);
        // D_x = T′·D_t and D_xD_x = T′²·D_tD_t + αT″·D_t
        Ok([y, dw * dy, dw * dw * ddy + a * ddw * dy])
    }

    /// Residual of the named equation for a branch at x.
    pub fn residual(&self, branch: &SolutionBranch, x: f64) -> Result<OdeResidual> {
        Ok(self.equation.residual(x, self.branch_derivs(branch, x)?))
    }
}

/// ₂F₁(−n, n+1; 1; (1 − x^α)/2), which equals Pₙ(x^α).
pub fn conf_legendre(n: u32, alpha: f64, x: f64) -> f64 {
    let nf = n as f64;
    let t = (1.0 - x.powf(alpha)) / 2.0;
    gauss_coeffs(-nf, nf + 1.0, 1.0, n as usize + 1).iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub family: Family,
    pub equation: &'static str,
    pub substitution: Substitution,
    pub substitution_text: &'static str,
    pub mu: AffineN,
    pub nu: AffineN,
    pub c: AffineN,
}

pub fn catalog() -> Vec<CatalogEntry> {
    Family::ALL
        .into_iter()
        .map(|f| {
            let [mu, nu, c] = f.param_forms();
            let substitution = f.substitution();
            CatalogEntry {
                family: f,
                equation: f.equation_text(),
                substitution,
                substitution_text: substitution.describe(),
                mu,
                nu,
                c,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn eq(f: Family, a: f64, n: Option<u32>) -> NamedEquation {
        NamedEquation::new(f, a, n).unwrap()
    }

    #[test]
    fn table_rows() {
        let r = reduce_to_cfghe(&eq(Family::Legendre, 0.5, Some(3))).unwrap();
        assert_eq!((r.target_params.mu(), r.target_params.nu(), r.target_params.c()), (-3.0, 4.0, 1.0));
        assert!(r.branch2.is_none() && r.degeneracy.is_some());
        let r = reduce_to_cfghe(&eq(Family::Chebyshev, 0.5, Some(3))).unwrap();
        assert_eq!((r.target_params.mu(), r.target_params.nu(), r.target_params.c()), (-3.0, 3.0, 0.5));
        let r = reduce_to_cfghe(&eq(Family::ExpExample, 0.7, None)).unwrap();
        assert_eq!((r.target_params.mu(), r.target_params.nu(), r.target_params.c()), (1.0, -1.0, -0.5));
        let b2 = r.branch2.unwrap();
        assert_eq!((b2.inner.mu(), b2.inner.nu(), b2.inner.c()), (2.5, 0.5, 2.5));
        assert_eq!(b2.prefactor_exp, 1.5);
    }

    #[test]
    fn forms_print() {
        let s = |f: Family| f.param_forms().map(|p| p.to_string()).join("; ");
        assert_eq!(s(Family::Legendre), "-n; 1+n; 1");
        assert_eq!(s(Family::Fibonacci), "(1-n)/2; (1+n)/2; 3/2");
        assert_eq!(s(Family::Lucas), "n/2; -n/2; 1/2");
        assert_eq!(s(Family::ExpExample), "1; -1; -1/2");
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(conf_legendre(0, 0.3, 0.8), 1.0);
        assert_relative_eq!(conf_legendre(1, 0.5, 0.49), 0.7, max_relative = 1e-15);
        assert_relative_eq!(conf_legendre(2, 0.5, 0.64), 0.46, max_relative = 1e-14);
    }

    #[test]
    fn residuals_small() {
        for f in Family::ALL {
            let n = f.has_degree().then_some(4);
            let r = reduce_to_cfghe(&eq(f, 0.6, n)).unwrap();
            let mut checked = 0;
            for b in r.branches() {
                for x in r.sample_points() {
                    if let Ok(res) = r.residual(b, x) {
                        assert!(res.relative() < 1e-10, "{f} {x} {res:?}");
                        checked += 1;
                    }
                }
            }
            assert!(checked >= 3, "{f}");
        }
    }

    #[test]
    fn parse_and_validate() {
        assert_eq!("EXP".parse::<Family>().unwrap(), Family::ExpExample);
        assert!("hermite".parse::<Family>().is_err());
        assert!(NamedEquation::new(Family::Lucas, 0.5, None).is_err());
        assert!(NamedEquation::new(Family::ExpExample, 0.5, Some(1)).is_err());
        assert!(NamedEquation::new(Family::Lucas, 1.5, Some(1)).is_err());
    }
}
