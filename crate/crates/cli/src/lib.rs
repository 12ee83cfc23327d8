//! Command-line front end: argument definitions and dispatch.
//!
//! [`run`] does all the work and returns the exit code with the rendered
//! output, so the binary only prints.

pub mod parse;

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ortho_moments::closed_forms::{
    admissible, integral_n2, integral_two_row, joint_moments, one_row_integral, phi_from_integral,
    phi_literal, TwoRowSpec,
};
use ortho_moments::monte_carlo::{mc_integral, McEstimate};
use ortho_moments::pairings::enumerate_pairings_with_limit;
use ortho_moments::verify::{verify, Budget, PropertyId, VerificationReport};
use ortho_moments::weingarten::{
    integral_oracle_with, weingarten_function_with_limit, SingularPolicy, DEFAULT_ORACLE_LIMIT,
};
use ortho_moments::{Error, ExactRational, ExponentMatrix, Pairing};
use serde::Serialize;

pub use parse::{parse_matrix, parse_n_range, parse_vector, render_matrix};

/// Environment variable overriding the oracle degree cap.
pub const LIMIT_ENV: &str = "ORTHO_MOMENTS_LIMIT_K";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ortho-moments", version, about = "Exact polynomial integrals over O_n")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub format: Format,

    /// Shorthand for --format json
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Oracle,
    Auto,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integral I(a) of a monomial in the entries of a Haar orthogonal matrix
    Integral {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// Samples when auto falls back to Monte Carlo
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two-row Phi value for literal even exponents
    Phi {
        /// Top row, comma-separated
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Bottom row, comma-separated
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// N or lo:hi
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
    },
    /// Joint moment of two coordinates in generic position
    Moments {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        beta: u32,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Weingarten matrix W_kn, or one entry of it
    Weingarten {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        /// Two pairings, e.g. "(1 2)(3 4)" "(1 3)(2 4)"
        #[arg(long, num_args = 2, value_names = ["P", "S"])]
        entry: Option<Vec<String>>,
    },
    /// Exact integral through the Weingarten formula
    Oracle {
        #[command(flatten)]
        target: Target,
        /// Solve the consistent system when G_kn is singular
        #[arg(long)]
        allow_singular: bool,
    },
    /// Monte Carlo estimate of I(a)
    Mc {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check one identity by exact multi-point evaluation
    Verify {
        property: String,
        #[command(flatten)]
        sweep: Sweep,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        max_columns: Option<usize>,
    },
    /// Check a conjectured sum for f(a,b,c,d)
    Conjecture {
        #[arg(value_enum)]
        which: Parity,
        #[command(flatten)]
        sweep: Sweep,
        /// Largest a+b+c+d (odd case)
        #[arg(long)]
        max_sum: Option<u32>,
    },
}

#[derive(Args, Debug)]
pub struct Target {
    /// Exponent matrix, rows separated by ';'
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: String,
    /// N or lo:hi
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
}

#[derive(Args, Debug)]
pub struct Sweep {
    /// Replace the sample points: N or lo:hi
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,
    #[arg(long)]
    pub max_entry: Option<u32>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Refuse singular Gram matrices instead of solving the consistent system
    #[arg(long)]
    pub refuse_singular: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Parity {
    Even,
    Odd,
}

/// Exit code plus what to print on each stream.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct ValueOut {
    value: ExactRational,
    method: &'static str,
    n: u32,
    k: Option<usize>,
}

#[derive(Serialize)]
struct McOut {
    method: &'static str,
    n: u32,
    k: Option<usize>,
    #[serde(flatten)]
    estimate: McEstimate,
}

#[derive(Serialize)]
struct WeingartenOut {
    k: usize,
    n: u32,
    pairings: Vec<String>,
    matrix: Vec<Vec<ExactRational>>,
}

#[derive(Serialize)]
struct ErrorOut {
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parity(_) | Error::Domain(_) => EXIT_DOMAIN,
        Error::Resource { .. } | Error::GramSingular { .. } => EXIT_RESOURCE,
        Error::Contract(_) | Error::Parse { .. } => EXIT_USAGE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parity(_) => "parity",
        Error::Domain(_) => "domain",
        Error::Resource { .. } => "resource",
        Error::GramSingular { .. } => "gram-singular",
        Error::Contract(_) => "contract",
        Error::Parse { .. } => "parse",
    }
}

/// Reads the oracle cap from `value` (the environment variable's content).
pub fn oracle_limit(value: Option<&str>) -> Result<usize, Error> {
    match value {
        None => Ok(DEFAULT_ORACLE_LIMIT),
        Some(v) => v.trim().parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("{LIMIT_ENV}='{v}' is not a nonnegative integer"),
        }),
    }
}

fn n_values(text: &str) -> Result<Vec<u32>, Error> {
    let ns = parse_n_range(text)?;
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::domain(format!("n must be at least 2 (got {n})")));
    }
    Ok(ns)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

struct Ctx {
    format: Format,
    limit: usize,
}

pub fn run(cli: Cli, limit: usize) -> Outcome {
    let format = if cli.json { Format::Json } else { cli.format };
    let ctx = Ctx { format, limit };
    match dispatch(cli.command, &ctx) {
        Ok(out) => out,
        Err(e) => {
            let stdout = match format {
                Format::Json => json(&ErrorOut {
                    error: ErrorBody { kind: error_kind(&e), message: e.to_string() },
                }),
                _ => String::new(),
            };
            Outcome { code: exit_code(&e), stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn dispatch(cmd: Command, ctx: &Ctx) -> Result<Outcome, Error> {
    match cmd {
        Command::Integral { target, method, samples, seed } => {
            integral(&target, method, samples, seed, SingularPolicy::Refuse, ctx)
        }
        Command::Oracle { target, allow_singular } => {
            let policy = if allow_singular {
                SingularPolicy::ConsistentSolve
            } else {
                SingularPolicy::Refuse
            };
            integral(&target, Method::Oracle, 0, 0, policy, ctx)
        }
        Command::Phi { a, b, n, method } => phi(&a, &b, &n, method, ctx),
        Command::Moments { alpha, beta, n } => {
            let values = n_values(&n)?
                .into_iter()
                .map(|n| {
                    Ok(ValueOut {
                        value: joint_moments(alpha, beta, n)?,
                        method: "closed",
                        n,
                        k: Some((alpha + beta) as usize / 2),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(values_out(&values, |v| format!("M_{}({alpha},{beta})", v.n), ctx))
        }
        Command::Weingarten { k, n, entry } => weingarten(k, n, entry, ctx),
        Command::Mc { matrix, n, samples, seed } => {
            let a = parse_matrix(&matrix)?;
            let estimate = mc_integral(&a, n, samples, seed)?;
            Ok(mc_out(&a, n, estimate, ctx))
        }
        Command::Verify { property, sweep, max_degree, max_columns } => {
            let p: PropertyId = property.parse()?;
            let mut budget = sweep_budget(p, &sweep)?;
            if let Some(d) = max_degree {
                budget.max_degree = d;
            }
            if let Some(c) = max_columns {
                budget.max_columns = c;
            }
            budget.oracle_limit = ctx.limit;
            report_out(verify(p, &budget, sweep.seed)?, ctx)
        }
        Command::Conjecture { which, sweep, max_sum } => {
            let p = match which {
                Parity::Even => PropertyId::ConjectureEven,
                Parity::Odd => PropertyId::ConjectureOdd,
            };
            let mut budget = sweep_budget(p, &sweep)?;
            if let Some(s) = max_sum {
                budget.max_degree = s as usize / 2;
            }
            if p == PropertyId::ConjectureOdd {
                budget.oracle_limit = ctx.limit;
            }
            report_out(verify(p, &budget, sweep.seed)?, ctx)
        }
    }
}

fn sweep_budget(p: PropertyId, sweep: &Sweep) -> Result<Budget, Error> {
    let mut budget = Budget::for_property(p);
    if let Some(n) = &sweep.n {
        budget.n_values = Some(n_values(n)?);
    }
    if let Some(e) = sweep.max_entry {
        budget.max_entry = e;
    }
    if let Some(t) = sweep.trials {
        budget.trials = t;
    }
    if sweep.refuse_singular {
        budget.singular = SingularPolicy::Refuse;
    }
    Ok(budget)
}

/// The closed form that applies to `a` at `n`, if any.
fn closed_integral(a: &ExponentMatrix, n: u32) -> Result<Option<(ExactRational, &'static str)>, Error> {
    if !admissible(a) {
        return Ok(Some((ExactRational::zero(), "vanishing")));
    }
    if n == 2 && a.rows() == 2 && a.cols() == 2 {
        let v = integral_n2(a.get(0, 0), a.get(1, 0), a.get(0, 1), a.get(1, 1));
        return Ok(Some((v, "n2")));
    }
    if !a.all_even() {
        return Ok(None);
    }
    let a = if a.rows() <= 2 { a.clone() } else { a.transpose() };
    match a.rows() {
        1 => Ok(Some((one_row_integral(a.row(0), n)?, "one-row"))),
        2 => {
            let half = |r: &[u32]| r.iter().map(|x| x / 2).collect::<Vec<_>>();
            Ok(Some((integral_two_row(&half(a.row(0)), &half(a.row(1)), n)?, "two-row")))
        }
        _ => Ok(None),
    }
}

fn integral(
    target: &Target,
    method: Method,
    samples: u64,
    seed: u64,
    policy: SingularPolicy,
    ctx: &Ctx,
) -> Result<Outcome, Error> {
    let a = parse_matrix(&target.matrix)?;
    let ns = n_values(&target.n)?;
    let k = a.half_degree();
    let mut values = Vec::new();
    for &n in &ns {
        let (value, name) = match method {
            Method::Closed => closed_integral(&a, n)?.ok_or_else(|| {
                Error::parity(format!("no closed form for the matrix {a}"))
            })?,
            Method::Oracle => (integral_oracle_with(&a, n, ctx.limit, policy)?, "oracle"),
            Method::Auto => {
                let closed = if a.rows() <= 2 || !admissible(&a) {
                    closed_integral(&a, n)?
                } else {
                    None
                };
                match closed {
                    Some(v) => v,
                    None if k.is_some_and(|k| k <= ctx.limit) => {
                        (integral_oracle_with(&a, n, ctx.limit, policy)?, "oracle")
                    }
                    None => {
                        if ns.len() > 1 {
                            return Err(Error::contract(
                                "Monte Carlo fallback takes a single n".to_string(),
                            ));
                        }
                        let estimate = mc_integral(&a, n, samples, seed)?;
                        let mut out = mc_out(&a, n, estimate, ctx);
                        out.stderr = format!(
                            "warning: half-degree {} exceeds the oracle limit {}; using Monte Carlo\n",
                            k.unwrap_or(0),
                            ctx.limit
                        );
                        return Ok(out);
                    }
                }
            }
        };
        values.push(ValueOut { value, method: name, n, k });
    }
    Ok(values_out(&values, |v| format!("I_{}({a})", v.n), ctx))
}

fn phi(a: &str, b: &str, n: &str, method: Method, ctx: &Ctx) -> Result<Outcome, Error> {
    let spec = TwoRowSpec::new(parse_vector(a)?, parse_vector(b)?)?;
    spec.check_even()?;
    let k = (spec.a.iter().sum::<u32>() + spec.b.iter().sum::<u32>()) as usize / 2;
    let mut values = Vec::new();
    for n in n_values(n)? {
        let (value, name) = match method {
            Method::Oracle => {
                let i = integral_oracle_with(&spec.to_matrix(), n, ctx.limit, SingularPolicy::Refuse)?;
                (phi_from_integral(&spec, &i, n)?.value, "oracle")
            }
            Method::Closed | Method::Auto => (phi_literal(&spec, n)?, "two-row"),
        };
        values.push(ValueOut { value, method: name, n, k: Some(k) });
    }
    let label = |v: &ValueOut| format!("Phi_{}({})", v.n, spec.to_matrix());
    Ok(values_out(&values, label, ctx))
}

fn weingarten(k: usize, n: u32, entry: Option<Vec<String>>, ctx: &Ctx) -> Result<Outcome, Error> {
    if n < 2 {
        return Err(Error::domain(format!("n must be at least 2 (got {n})")));
    }
    let w = weingarten_function_with_limit(k, n, ctx.limit)?;
    if let Some(entry) = entry {
        let parse = |s: &str| -> Result<Pairing, Error> {
            let p: Pairing = s.parse()?;
            if p.k() != k {
                return Err(Error::contract(format!("{p} is not a pairing of {} points", 2 * k)));
            }
            Ok(p)
        };
        let (p, s) = (parse(&entry[0])?, parse(&entry[1])?);
        let v = ValueOut { value: w.entry(&p, &s)?, method: "weingarten", n, k: Some(k) };
        return Ok(values_out(&[v], |_| format!("W_{n}({p}, {s})"), ctx));
    }
    let pairings = enumerate_pairings_with_limit(k, ctx.limit.max(k))?;
    let matrix: Vec<Vec<ExactRational>> = pairings
        .iter()
        .map(|p| pairings.iter().map(|s| w.entry(p, s)).collect())
        .collect::<Result<_, Error>>()?;
    let stdout = match ctx.format {
        Format::Json => json(&WeingartenOut {
            k,
            n,
            pairings: pairings.iter().map(Pairing::to_string).collect(),
            matrix,
        }),
        Format::Csv => {
            let mut s = String::from("p,s,num,den\n");
            for (p, row) in pairings.iter().zip(&matrix) {
                for (q, v) in pairings.iter().zip(row) {
                    let _ = writeln!(s, "{p},{q},{},{}", v.numer(), v.denom());
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (p, row) in pairings.iter().zip(&matrix) {
                for (q, v) in pairings.iter().zip(row) {
                    let _ = writeln!(s, "W_{n}({p}, {q}) = {v}");
                }
            }
            s
        }
    };
    Ok(Outcome { code: EXIT_OK, stdout, stderr: String::new() })
}

fn values_out(values: &[ValueOut], label: impl Fn(&ValueOut) -> String, ctx: &Ctx) -> Outcome {
    let stdout = match ctx.format {
        Format::Json if values.len() == 1 => json(&values[0]),
        Format::Json => json(&values),
        Format::Csv => {
            let mut s = String::from("n,num,den,method\n");
            for v in values {
                let _ = writeln!(s, "{},{},{},{}", v.n, v.value.numer(), v.value.denom(), v.method);
            }
            s
        }
        Format::Text => values.iter().map(|v| format!("{} = {}\n", label(v), v.value)).collect(),
    };
    Outcome { code: EXIT_OK, stdout, stderr: String::new() }
}

fn mc_out(a: &ExponentMatrix, n: u32, estimate: McEstimate, ctx: &Ctx) -> Outcome {
    let stdout = match ctx.format {
        Format::Json => json(&McOut { method: "monte-carlo", n, k: a.half_degree(), estimate }),
        Format::Csv => format!(
            "n,mean,standard_error,samples,seed\n{n},{},{},{},{}\n",
            estimate.mean, estimate.standard_error, estimate.samples, estimate.seed
        ),
        Format::Text => format!(
            "I_{n}({a}) ~ {} +/- {} ({} samples, seed {})\n",
            estimate.mean, estimate.standard_error, estimate.samples, estimate.seed
        ),
    };
    Outcome { code: EXIT_OK, stdout, stderr: String::new() }
}

fn report_out(r: VerificationReport, ctx: &Ctx) -> Result<Outcome, Error> {
    let code = if !r.passed() {
        EXIT_FAILURE
    } else if r.errors.iter().any(|e| e.resource) {
        EXIT_RESOURCE
    } else if !r.errors.is_empty() {
        EXIT_DOMAIN
    } else {
        EXIT_OK
    };
    let stdout = match ctx.format {
        Format::Json => json(&r),
        Format::Csv => {
            let mut s = String::from("case,n,lhs,rhs,status\n");
            for rec in &r.records {
                let show = |v: &Option<ExactRational>| v.as_ref().map(ToString::to_string).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "\"{}\",{},{},{},{}",
                    rec.input,
                    rec.n,
                    show(&rec.lhs),
                    show(&rec.rhs),
                    rec.status
                );
            }
            s
        }
        Format::Text => {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let mut s = format!(
                "{}: {status} ({} cases, {} evaluations, {} errors, n in {:?})\n",
                r.property,
                r.cases,
                r.evaluations,
                r.errors.len(),
                r.n_samples
            );
            for f in r.failures.iter().take(10) {
                let _ = writeln!(s, "  {} n={}: {} = {}", f.input, f.n, f.lhs, f.rhs);
            }
            for e in r.errors.iter().take(10) {
                let _ = writeln!(s, "  {} n={}: {}", e.input, e.n, e.message);
            }
            s
        }
    };
    Ok(Outcome { code, stdout, stderr: String::new() })
}
