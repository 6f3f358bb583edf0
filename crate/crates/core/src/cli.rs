//! The `rbonacci` command-line front end.
//!
//! Every subcommand is a thin adapter over the library: it validates flags,
//! calls one or two library functions and renders the result. [`run`] never
//! touches the process directly except for `--out` files, so the whole
//! surface is testable in-process.
//!
//! Exit codes: 0 success or pass, 1 verification or convergence failure,
//! 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::exactpoly::{rational_string, IntPolynomial};
use crate::plot::render_svg;
use crate::rbonacci::{build_closed_form, build_derivative_closed_form, build_recurrence, RBonacciParams};
use crate::roots::{
    find_roots, matching_distance, quadratic_orbit_roots, star_probe, ComplexRootSet, RootError, DEFAULT_RESIDUAL,
};
use crate::vieta::{derivative_spec, upsilon_psi, verify, Theorem, VerifyParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Closed-form and numeric zeros must pair up within this distance.
const CLOSED_FORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "rbonacci",
    version,
    about = "R-Bonacci polynomials, their derivatives and their zeros"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print R_n for the given r
    Gen(GenArgs),
    /// Print the t-th derivative of R_n
    Deriv(DerivArgs),
    /// Compute the zeros of R_n, R_n^(t) or R_{rn+p}^(t) for t = rk - (1-p)(r-1)
    Roots(RootsArgs),
    /// Check an identity exactly and report expected vs computed values
    Verify(VerifyArgs),
    /// Print t, eta, mu, upsilon and psi for the derivative family
    Spec(SpecArgs),
    /// Report where the zeros of R_{rn+p} sit relative to the zeros of x^r + 1
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Recurrence,
    Closed,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RootsFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "recurrence")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TextFormat,
}

#[derive(Debug, Args)]
pub struct DerivArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, value_enum, default_value = "recurrence")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TextFormat,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long)]
    pub r: usize,
    /// Polynomial index, or the `n` of R_{rn+p} when --p/--k are given
    #[arg(long)]
    pub n: usize,
    /// Derivative order applied to R_n
    #[arg(long, conflicts_with_all = ["p", "k"])]
    pub t: Option<usize>,
    #[arg(long, requires = "k")]
    pub p: Option<usize>,
    #[arg(long, requires = "p")]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: RootsFormat,
    /// Also compute the zeros from the closed form (needs --p/--k with eta = 2)
    #[arg(long, requires = "p")]
    pub closed_form: bool,
    /// Write the artifact here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Residual every reported root must meet
    #[arg(long, default_value_t = DEFAULT_RESIDUAL)]
    pub precision: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub theorem: Theorem,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TextFormat,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TextFormat,
    #[arg(long, default_value_t = DEFAULT_RESIDUAL)]
    pub precision: f64,
}

/// What a command produced: text for stdout and stderr plus an exit code.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_USAGE,
        }
    }

    fn failure(msg: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_FAIL,
        }
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_USAGE,
                }
            } else {
                Outcome::ok(text)
            }
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen(a) => run_gen(&a),
        Command::Deriv(a) => run_deriv(&a),
        Command::Roots(a) => run_roots(&a),
        Command::Verify(a) => run_verify(&a),
        Command::Spec(a) => run_spec(&a),
        Command::Probe(a) => run_probe(&a),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Shared body of `gen` and `deriv`.
fn render_polynomial(label: String, params: RBonacciParams, t: usize, mode: Mode, format: TextFormat) -> Outcome {
    let recurrence = || build_recurrence(params).formal_derivative(t);
    let closed = || build_derivative_closed_form(params, t);
    let (poly, matches): (IntPolynomial, Option<bool>) = match mode {
        Mode::Recurrence => (recurrence(), None),
        Mode::Closed if t == 0 => (build_closed_form(params), None),
        Mode::Closed => (closed(), None),
        Mode::Both => {
            let a = recurrence();
            let ok = a == closed();
            (a, Some(ok))
        }
    };
    let mut out = String::new();
    match format {
        TextFormat::Text => {
            let _ = writeln!(out, "{poly}");
            if let Some(ok) = matches {
                let _ = writeln!(out, "recurrence == closed-form: {}", if ok { "OK" } else { "MISMATCH" });
            }
        }
        TextFormat::Json => {
            let mut doc = json!({
                "polynomial": label,
                "r": params.r(),
                "n": params.n(),
                "t": t,
                "degree": poly.degree(),
                "coefficients": poly,
                "text": poly.to_string(),
            });
            if let Some(ok) = matches {
                doc["closed_form_match"] = json!(ok);
            }
            out = to_json(&doc);
        }
    }
    Outcome {
        stdout: out,
        stderr: String::new(),
        code: if matches == Some(false) { EXIT_FAIL } else { EXIT_OK },
    }
}

fn run_gen(a: &GenArgs) -> Outcome {
    match RBonacciParams::new(a.r, a.n) {
        Ok(params) => render_polynomial(format!("R_{}", a.n), params, 0, a.mode, a.format),
        Err(e) => Outcome::usage(e),
    }
}

fn run_deriv(a: &DerivArgs) -> Outcome {
    match RBonacciParams::new(a.r, a.n) {
        Ok(params) => render_polynomial(format!("R_{}^({})", a.n, a.t), params, a.t, a.mode, a.format),
        Err(e) => Outcome::usage(e),
    }
}

/// The polynomial a `roots` invocation refers to, and its display label.
fn roots_target(a: &RootsArgs) -> Result<(IntPolynomial, String), Outcome> {
    if !(a.precision > 0.0) {
        return Err(Outcome::usage(format!(
            "--precision must be positive, got {}",
            a.precision
        )));
    }
    match (a.p, a.k) {
        (Some(p), Some(k)) => {
            let spec = derivative_spec(a.r, a.n, p, k).map_err(Outcome::usage)?;
            if a.closed_form && spec.eta != 2 {
                return Err(Outcome::usage(format!(
                    "--closed-form needs eta = 2, this spec has eta = {} (use k = {})",
                    spec.eta,
                    (a.r - 1) * a.n - 2
                )));
            }
            let label = format!("R_{}^({})", spec.index(), spec.t);
            Ok((spec.polynomial(), label))
        }
        _ => {
            let params = RBonacciParams::new(a.r, a.n).map_err(Outcome::usage)?;
            let t = a.t.unwrap_or(0);
            let label = if t == 0 {
                format!("R_{}", a.n)
            } else {
                format!("R_{}^({t})", a.n)
            };
            Ok((build_recurrence(params).formal_derivative(t), label))
        }
    }
}

#[derive(Serialize)]
struct ClosedFormJson {
    upsilon: String,
    psi: String,
    y_plus: [f64; 2],
    y_minus: [f64; 2],
    degenerate: bool,
    roots: Vec<[f64; 2]>,
    matching_distance: f64,
}

fn run_roots(a: &RootsArgs) -> Outcome {
    let (poly, label) = match roots_target(a) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let set = match find_roots(&poly, a.precision).and_then(|s| s.with_orbits(a.r)) {
        Ok(s) => s,
        Err(RootError::Constant(d)) => {
            return Outcome::usage(format!("{label} is constant (degree {d:?}), it has no zeros"))
        }
        Err(e) => return Outcome::failure(e),
    };

    let mut stderr = String::new();
    let mut code = EXIT_OK;
    let closed = if a.closed_form {
        let p = a.p.expect("clap enforces --p with --closed-form");
        let q = match quadratic_orbit_roots(a.r, a.n, p) {
            Ok(q) => q,
            Err(e) => return Outcome::usage(e),
        };
        let distance = matching_distance(&q.roots, &set.expanded()).unwrap_or(f64::INFINITY);
        let _ = writeln!(stderr, "closed-form vs numeric max matching distance: {distance:.3e}");
        if !(distance <= CLOSED_FORM_TOLERANCE) {
            code = EXIT_FAIL;
        }
        let pair = |z: Complex64| [z.re, z.im];
        Some(ClosedFormJson {
            upsilon: rational_string(&q.upsilon),
            psi: rational_string(&q.psi),
            y_plus: pair(q.y_plus),
            y_minus: pair(q.y_minus),
            degenerate: q.degenerate,
            roots: q.roots.iter().copied().map(pair).collect(),
            matching_distance: distance,
        })
    } else {
        None
    };

    let artifact = match a.format {
        RootsFormat::Csv => set.to_csv(),
        RootsFormat::Svg => render_svg(&set, a.r, &format!("zeros of {label}, r = {}", a.r)),
        RootsFormat::Json => roots_json(&set, &label, a, &poly, closed.as_ref()),
    };
    let stdout = match &a.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &artifact) {
                return Outcome::failure(format!("cannot write {}: {e}", path.display()));
            }
            format!(
                "wrote {} distinct roots of {label} to {}\n",
                set.roots.len(),
                path.display()
            )
        }
        None => artifact,
    };
    Outcome { stdout, stderr, code }
}

fn roots_json(
    set: &ComplexRootSet,
    label: &str,
    a: &RootsArgs,
    poly: &IntPolynomial,
    closed: Option<&ClosedFormJson>,
) -> String {
    let mut doc = json!({
        "polynomial": label,
        "r": a.r,
        "degree": set.degree,
        "coefficients": poly,
        "precision": a.precision,
        "max_residual": set.max_residual(),
        "orbit_count": set.orbit_count(),
        "roots": set.records(),
    });
    if let Some(c) = closed {
        doc["closed_form"] = serde_json::to_value(c).expect("serializable");
    }
    to_json(&doc)
}

fn run_verify(a: &VerifyArgs) -> Outcome {
    let params = VerifyParams {
        r: a.r,
        n: a.n,
        p: a.p,
        k: a.k,
        t: a.t,
    };
    match verify(a.theorem, params) {
        Ok(report) => Outcome {
            stdout: match a.format {
                ReportFormat::Table => report.table(),
                ReportFormat::Json => to_json(&report),
            },
            stderr: String::new(),
            code: if report.pass { EXIT_OK } else { EXIT_FAIL },
        },
        Err(e) => Outcome::usage(e),
    }
}

fn run_spec(a: &SpecArgs) -> Outcome {
    let spec = match derivative_spec(a.r, a.n, a.p, a.k) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e),
    };
    let (upsilon, psi) = upsilon_psi(&spec);
    let stdout = match a.format {
        TextFormat::Text => format!(
            "R_{}^({}) r={} n={} p={} k={}\nt={} eta={} mu={} upsilon={} psi={}\n",
            spec.index(),
            spec.t,
            spec.r,
            spec.n,
            spec.p,
            spec.k,
            spec.t,
            spec.eta,
            spec.mu,
            rational_string(&upsilon),
            rational_string(&psi)
        ),
        TextFormat::Json => {
            let mut doc = serde_json::to_value(&spec).expect("serializable");
            doc["index"] = json!(spec.index());
            doc["upsilon"] = json!(rational_string(&upsilon));
            doc["psi"] = json!(rational_string(&psi));
            to_json(&doc)
        }
    };
    Outcome::ok(stdout)
}

fn run_probe(a: &ProbeArgs) -> Outcome {
    if a.r < 2 || a.n < 1 || a.p >= a.r {
        return Outcome::usage(format!(
            "probe needs r >= 2, n >= 1, 0 <= p <= r-1; got r={} n={} p={}",
            a.r, a.n, a.p
        ));
    }
    match star_probe(a.r, a.n, a.p, a.precision) {
        Ok(report) => Outcome::ok(match a.format {
            TextFormat::Text => report.summary(),
            TextFormat::Json => to_json(&report),
        }),
        Err(RootError::InvalidSpec(m)) => Outcome::usage(m),
        Err(e) => Outcome::failure(e),
    }
}
