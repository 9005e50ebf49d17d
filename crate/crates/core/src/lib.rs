//! Conformable fractional Gauss hypergeometric function ₂F₁(μ, ν; c; x^α):
//! series evaluation, conformable calculus on fractional power series, the
//! solution branches of its differential equation, an identity catalog with
//! randomized verification, integral and Laplace-transform representations,
//! and reductions of named equations.

pub mod analytic;
pub mod apps;
pub mod cfghe;
pub mod confcalc;
mod dd;
pub mod error;
pub mod hypercore;
pub mod quad;
pub mod relations;

pub use error::{Error, Result};
pub use hypercore::{eval_2f1, pochhammer, EvalResult, Params, Region};
