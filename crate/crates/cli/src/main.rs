//! `cfhyp`: evaluate, verify, solve and transform from the command line.

mod report;

use std::io::Write;
use std::process::ExitCode;

use cfhyp::analytic::{euler_integral_eval, LaplaceQuery, LaplaceTarget, QuadMethod, QuadratureSpec};
use cfhyp::apps::{catalog, reduce_to_cfghe, Family, NamedEquation};
use cfhyp::cfghe::{cfghe_residual, solutions_at_infinity, solutions_at_one, solutions_at_zero, Solution, Transform};
use cfhyp::hypercore::{DEFAULT_MAX_TERMS, DEFAULT_TOL};
use cfhyp::relations::{verify_relation_with, RelationId, RelationReport, Truncation};
use cfhyp::{eval_2f1, Params};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use report::{usage, CliError, Report, Status};

const MAX_TERMS_ENV: &str = "CFHYP_MAX_TERMS";
const SUBCOMMANDS: [&str; 4] = ["eval", "verify", "solve", "laplace"];
/// Relative residual above which `solve` diagnostics count as a failure.
const SOLVE_RESIDUAL_TOL: f64 = 1e-8;
/// Truncation length for branch residuals in `solve`.
const SOLVE_TERMS: usize = 200;

#[derive(Parser)]
#[command(name = "cfhyp", version, about = "Conformable fractional Gauss hypergeometric toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate 2F1(mu, nu; c; x^alpha).
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// Check cataloged identities at random points.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Solution branches of the equation, raw or for a named family.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Fractional Laplace transform of a cataloged target.
    #[command(allow_negative_numbers = true)]
    Laplace(LaplaceArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    Series,
    Integral,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Quad {
    GaussJacobi,
    TanhSinh,
}

#[derive(Args, Serialize)]
struct EvalArgs {
    #[arg(long)]
    mu: f64,
    #[arg(long)]
    nu: f64,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    x: f64,
    #[arg(long, value_enum, default_value_t = Method::Series)]
    method: Method,
    /// Series truncation tolerance, or quadrature tolerance with --method integral.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Quad::GaussJacobi)]
    quad: Quad,
    /// Initial node count for the quadrature.
    #[arg(long, default_value_t = 64)]
    nodes: usize,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Relation id (e.g. C4) or `all`.
    #[arg(long, default_value = "all")]
    relation: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Emit CSV rows instead of a JSON report.
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
enum SingularPoint {
    #[value(name = "0")]
    #[serde(rename = "0")]
    Zero,
    #[value(name = "1")]
    #[serde(rename = "1")]
    One,
    #[value(name = "inf")]
    #[serde(rename = "inf")]
    Inf,
}

#[derive(Args, Serialize)]
struct SolveArgs {
    /// Named family: legendre, chebyshev, fibonacci, lucas, exp_example.
    #[arg(long)]
    equation: Option<String>,
    /// Degree for the polynomial families.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, value_enum)]
    point: Option<SingularPoint>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Target {
    One,
    Power,
    Exp,
    #[value(name = "2f1")]
    #[serde(rename = "2f1")]
    Hyp,
    Tsin,
    Shifted,
}

#[derive(Args, Serialize)]
struct LaplaceArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    s: f64,
    /// Exponent for `power`.
    #[arg(long)]
    p: Option<f64>,
    /// Rate for `exp`.
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Transform order for `2f1` (defaults to alpha).
    #[arg(long)]
    gamma: Option<f64>,
    /// Power index for `tsin`.
    #[arg(long)]
    n: Option<u32>,
    /// Frequency for `tsin`.
    #[arg(long)]
    a: Option<f64>,
    /// Point x for `shifted`.
    #[arg(long)]
    x: Option<f64>,
    /// Also integrate numerically and report the discrepancy.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = 1e-6)]
    check_tol: f64,
}

struct Outcome {
    results: Value,
    status: Status,
}

fn ok(results: Value) -> Outcome {
    Outcome { results, status: Status::Ok }
}

fn max_terms(default: usize) -> Result<usize, CliError> {
    match std::env::var(MAX_TERMS_ENV) {
        Err(_) => Ok(default),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(usage(format!("{MAX_TERMS_ENV} must be a positive integer, got '{v}'"))),
        },
    }
}

fn cmd_eval(a: &EvalArgs) -> Result<Outcome, CliError> {
    let p = Params::new(a.mu, a.nu, a.c, a.alpha)?;
    let r = match a.method {
        Method::Series => eval_2f1(&p, a.x, a.tol, max_terms(DEFAULT_MAX_TERMS)?)?,
        Method::Integral => {
            let method = match a.quad {
                Quad::GaussJacobi => QuadMethod::GaussJacobi,
                Quad::TanhSinh => QuadMethod::TanhSinh,
            };
            euler_integral_eval(&p, a.x, &QuadratureSpec::new(method, a.nodes, a.tol)?)?
        }
    };
    Ok(ok(json!({
        "value": r.value,
        "abs_err_est": r.abs_err_est,
        "terms_used": r.terms_used,
        "terminated": r.terminated,
        "method": a.method,
    })))
}

fn relation_ids(spec: &str) -> Result<Vec<RelationId>, CliError> {
    if spec.eq_ignore_ascii_case("all") {
        let mut ids = RelationId::ALL.to_vec();
        ids.sort_by_key(|id| id.as_str());
        Ok(ids)
    } else {
        Ok(vec![spec.parse()?])
    }
}

fn run_verify(a: &VerifyArgs) -> Result<Vec<RelationReport>, CliError> {
    let ids = relation_ids(&a.relation)?;
    let mut trunc = Truncation::default();
    trunc.series.max_terms = max_terms(trunc.series.max_terms)?;
    ids.into_iter()
        .map(|id| verify_relation_with(id, a.trials, a.seed, a.tol, &trunc).map_err(CliError::from))
        .collect()
}

fn verify_status(reports: &[RelationReport]) -> Status {
    if reports.iter().all(|r| r.passed) {
        Status::Ok
    } else {
        Status::Fail
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let reports = run_verify(a)?;
    let status = verify_status(&reports);
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.id.as_str()).collect();
    Ok(Outcome {
        results: json!({ "reports": reports, "count": reports.len(), "failed": failed }),
        status,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    relation_id: &'a str,
    trials: usize,
    max_rel_residual: f64,
    passed: bool,
    seed: u64,
}

fn verify_csv(reports: &[RelationReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(CsvRow {
            relation_id: r.id.as_str(),
            trials: r.trials,
            max_rel_residual: r.max_rel_residual,
            passed: r.passed,
            seed: r.seed,
        })
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// x at which a branch's local variable equals w.
fn x_for_local(t: Transform, w: f64, alpha: f64) -> f64 {
    let u = match t {
        Transform::UEqXAlpha => w,
        Transform::UEqOneMinusXAlpha => 1.0 - w,
        Transform::UEqXNegAlpha => 1.0 / w,
    };
    u.powf(1.0 / alpha)
}

fn residual_status(worst: f64) -> Status {
    if worst <= SOLVE_RESIDUAL_TOL {
        Status::Ok
    } else {
        Status::Fail
    }
}

fn solve_raw(a: &SolveArgs) -> Result<Outcome, CliError> {
    let (Some(mu), Some(nu), Some(c), Some(point)) = (a.mu, a.nu, a.c, a.point) else {
        return Err(usage("raw solve needs --mu, --nu, --c and --point"));
    };
    if a.n.is_some() {
        return Err(usage("--n applies only with --equation"));
    }
    let p = Params::new(mu, nu, c, a.alpha)?;
    let branches = match point {
        SingularPoint::Zero => solutions_at_zero(&p)?,
        SingularPoint::One => solutions_at_one(&p)?,
        SingularPoint::Inf => solutions_at_infinity(&p)?,
    };
    let n_terms = max_terms(SOLVE_TERMS)?.min(SOLVE_TERMS);
    let mut worst: f64 = 0.0;
    let mut out = Vec::new();
    for b in &branches {
        let mut residuals = Vec::new();
        for w in [0.1, 0.2, 0.3] {
            let x = x_for_local(b.transform, w, a.alpha);
            let r = cfghe_residual(Solution::Branch(b), &p, x, n_terms)?;
            worst = worst.max(r.relative());
            residuals.push(json!({ "x": x, "relative_residual": r.relative() }));
        }
        out.push(json!({ "branch": b, "x_exponent": b.x_exponent(), "residuals": residuals }));
    }
    Ok(Outcome {
        results: json!({ "params": p, "branches": out, "max_relative_residual": worst }),
        status: residual_status(worst),
    })
}

fn solve_named(a: &SolveArgs, name: &str) -> Result<Outcome, CliError> {
    if a.mu.is_some() || a.nu.is_some() || a.c.is_some() || a.point.is_some() {
        return Err(usage("--equation cannot be combined with --mu/--nu/--c/--point"));
    }
    let family: Family = name.parse()?;
    let red = reduce_to_cfghe(&NamedEquation::new(family, a.alpha, a.n)?)?;
    let mut worst: f64 = 0.0;
    let mut out = Vec::new();
    for b in red.branches() {
        let mut residuals = Vec::new();
        let mut skipped = Vec::new();
        for x in red.sample_points() {
            match red.residual(b, x) {
                Ok(r) => {
                    worst = worst.max(r.relative());
                    residuals.push(json!({ "x": x, "relative_residual": r.relative() }));
                }
                Err(e) => skipped.push(json!({ "x": x, "reason": e.to_string() })),
            }
        }
        out.push(json!({ "branch": b, "residuals": residuals, "skipped": skipped }));
    }
    let entry = catalog().into_iter().find(|e| e.family == family).expect("every family is cataloged");
    Ok(Outcome {
        results: json!({
            "reduction": red,
            "catalog": entry,
            "branches": out,
            "max_relative_residual": worst,
        }),
        status: residual_status(worst),
    })
}

fn cmd_solve(a: &SolveArgs) -> Result<Outcome, CliError> {
    match &a.equation {
        Some(name) => solve_named(a, name),
        None => solve_raw(a),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, target: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("target {target} needs --{flag}")))
}

fn laplace_query(a: &LaplaceArgs) -> Result<LaplaceQuery, CliError> {
    let params = |c: f64| -> Result<Params, CliError> {
        Ok(Params::new(need(a.mu, "mu", "2f1/shifted")?, need(a.nu, "nu", "2f1/shifted")?, c, a.alpha)?)
    };
    let q = match a.target {
        Target::One => LaplaceQuery::new(LaplaceTarget::One, a.alpha, a.s)?,
        Target::Power => LaplaceQuery::new(LaplaceTarget::PowerP { p: need(a.p, "p", "power")? }, a.alpha, a.s)?,
        Target::Exp => LaplaceQuery::new(LaplaceTarget::ExpK { k: need(a.k, "k", "exp")? }, a.alpha, a.s)?,
        Target::Hyp => {
            let p = params(need(a.c, "c", "2f1")?)?;
            LaplaceQuery::with_gamma(LaplaceTarget::Cfghf { params: p }, a.alpha, a.gamma.unwrap_or(a.alpha), a.s)?
        }
        Target::Tsin => {
            let t = LaplaceTarget::TPowNSinA { n: need(a.n, "n", "tsin")?, a: need(a.a, "a", "tsin")? };
            LaplaceQuery::new(t, a.alpha, a.s)?
        }
        Target::Shifted => {
            if a.c.is_some_and(|c| c != 1.0) {
                return Err(CliError::Lib(cfhyp::Error::Domain("shifted target is stated for c = 1".into())));
            }
            let t = LaplaceTarget::ShiftedExpArg { params: params(1.0)?, x: need(a.x, "x", "shifted")? };
            LaplaceQuery::new(t, a.alpha, a.s)?
        }
    };
    Ok(q)
}

fn cmd_laplace(a: &LaplaceArgs) -> Result<Outcome, CliError> {
    let q = laplace_query(a)?;
    let closed = q.closed_form()?;
    if !a.check {
        return Ok(ok(json!({ "query": q, "closed_form": closed })));
    }
    let numeric = q.numeric()?;
    let discrepancy = (closed - numeric).abs();
    let status = if discrepancy <= a.check_tol { Status::Ok } else { Status::Fail };
    Ok(Outcome {
        results: json!({ "query": q, "closed_form": closed, "numeric": numeric, "discrepancy": discrepancy }),
        status,
    })
}

/// Parsed arguments as JSON, plus the term-cap override when it is set.
fn echo<T: Serialize>(args: &T) -> Value {
    let mut v = serde_json::to_value(args).expect("arguments are serializable");
    if let (Value::Object(m), Ok(env)) = (&mut v, std::env::var(MAX_TERMS_ENV)) {
        m.insert(MAX_TERMS_ENV.to_ascii_lowercase(), Value::String(env));
    }
    v
}

fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = out.write_all(s.as_bytes());
}

fn finish(name: &str, inputs: Value, r: Result<Outcome, CliError>) -> ExitCode {
    let report = match r {
        Ok(o) => Report { command: name.into(), inputs, results: o.results, status: o.status },
        Err(e) => Report::error(name, inputs, &e),
    };
    emit(&report.render());
    report.status.exit_code()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = usage(e.to_string().trim_end().to_string());
            let sub = std::env::args().nth(1).filter(|a| SUBCOMMANDS.contains(&a.as_str()));
            return finish(sub.as_deref().unwrap_or("cfhyp"), Value::Null, Err(err));
        }
    };
    match &cli.command {
        Command::Eval(a) => finish("eval", echo(a), cmd_eval(a)),
        Command::Solve(a) => finish("solve", echo(a), cmd_solve(a)),
        Command::Laplace(a) => finish("laplace", echo(a), cmd_laplace(a)),
        Command::Verify(a) if a.csv => match run_verify(a) {
            Ok(reports) => {
                emit(&verify_csv(&reports));
                verify_status(&reports).exit_code()
            }
            Err(e) => finish("verify", echo(a), Err(e)),
        },
        Command::Verify(a) => finish("verify", echo(a), cmd_verify(a)),
    }
}
