use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ga_vieta::sample::{random_float, random_integer};
use ga_vieta::{
    catalog, eigen_compare, eigenvalues, fl_coefficients, gelfand_retakh_ys, CharPoly, GaError, Method, Multivector,
    Rational, Scalar, Signature,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::expr::{parse_multivector, print_multivector, Coefficient, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_INVERTIBLE: i32 = 3;
pub const EXIT_NOT_GENERIC: i32 = 4;
pub const EXIT_INCONSISTENT: i32 = 5;

/// Relative tolerance for comparing float results across methods.
const FLOAT_AGREEMENT_TOL: f64 = 1e-7;
/// Random inputs have coefficients in `[-RANDOM_BOUND, RANDOM_BOUND]`, integers
/// on the rational backend.
const RANDOM_BOUND: i64 = 9;

#[derive(Debug, Parser)]
#[command(name = "ga-vieta", version, about = "Characteristic polynomials and determinants in G(p,q)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Determinant of a multivector.
    Det(Single),
    /// Characteristic coefficients C_1..C_N.
    Charpoly(Single),
    /// Inverse via the adjugate.
    Inverse(Single),
    /// Eigenvalues of the matrix representation (float).
    Eigen(Single),
    /// Run every method on random inputs and compare.
    Check(Sweep),
    /// Export the determinant formula catalog.
    Formulas(FormulaArgs),
    /// Time every method on random inputs.
    Bench(Sweep),
    /// Vandermonde elements and y_k for n <= 3.
    GelfandRetakh(Single),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Rational,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    One(Method),
    All,
}

fn parse_method(s: &str) -> Result<MethodChoice, String> {
    if s == "all" {
        return Ok(MethodChoice::All);
    }
    s.parse().map(MethodChoice::One).map_err(|e: GaError| e.to_string())
}

fn parse_sig(s: &str) -> Result<Signature, String> {
    let (p, q) = s.split_once(',').ok_or("expected p,q")?;
    let p = p.trim().parse().map_err(|_| format!("bad p in {s:?}"))?;
    let q = q.trim().parse().map_err(|_| format!("bad q in {s:?}"))?;
    Signature::new(p, q).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct Common {
    /// Signature as p,q with 1 <= p+q <= 6.
    #[arg(long, value_parser = parse_sig)]
    pub sig: Signature,
    #[arg(long, value_enum, default_value = "rational")]
    pub backend: Backend,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Single {
    #[command(flatten)]
    pub common: Common,
    /// fl, matrix, interp, closed-<family>, vieta-<family> or all.
    #[arg(long, value_parser = parse_method, default_value = "fl")]
    pub method: MethodChoice,
    /// Multivector, e.g. "5 + 1/2*e2 + 1/2*e12".
    pub input: String,
}

#[derive(Debug, Args)]
pub struct Sweep {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_method, default_value = "all")]
    pub method: MethodChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct FormulaArgs {
    /// Only this dimension.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Ga(GaError),
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Ga(GaError::NotInvertible { .. }) => EXIT_NOT_INVERTIBLE,
            CliError::Ga(GaError::NotGeneric { .. }) => EXIT_NOT_GENERIC,
            CliError::Inconsistent(_) => EXIT_INCONSISTENT,
            CliError::Ga(_) => EXIT_OTHER,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "parse error {e}"),
            CliError::Ga(e) => write!(f, "{e}"),
            CliError::Inconsistent(msg) => write!(f, "methods disagree: {msg}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<GaError> for CliError {
    fn from(e: GaError) -> Self {
        CliError::Ga(e)
    }
}

/// Result of one invocation: exit code, stdout and stderr text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cli: Cli) -> Output {
    let result = match &cli.command {
        Command::Det(a) => dispatch(a, Kind::Det),
        Command::Charpoly(a) => dispatch(a, Kind::Charpoly),
        Command::Inverse(a) => dispatch(a, Kind::Inverse),
        Command::Eigen(a) => cmd_eigen(a),
        Command::GelfandRetakh(a) => cmd_gelfand_retakh(a),
        Command::Check(a) => cmd_check(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Formulas(a) => cmd_formulas(a),
    };
    match result {
        Ok(stdout) => Output {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err((e, stdout)) => Output {
            code: e.exit_code(),
            stdout,
            stderr: format!("error: {e}\n"),
        },
    }
}

type CmdResult = Result<String, (CliError, String)>;

fn fail<E: Into<CliError>>(e: E) -> (CliError, String) {
    (e.into(), String::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Det,
    Charpoly,
    Inverse,
}

/// Float-aware equality of two characteristic polynomials.
trait Agree: Scalar + Coefficient {
    fn agree(a: &CharPoly<Self>, b: &CharPoly<Self>, u: &Multivector<Self>) -> bool;
    fn agree_mv(a: &Multivector<Self>, b: &Multivector<Self>, scale: f64) -> bool;
    fn json(&self) -> Value;
    fn random(sig: Signature, rng: &mut ChaCha8Rng) -> Multivector<Self>;
}

impl Agree for Rational {
    fn agree(a: &CharPoly<Self>, b: &CharPoly<Self>, _: &Multivector<Self>) -> bool {
        a == b
    }

    fn agree_mv(a: &Multivector<Self>, b: &Multivector<Self>, _: f64) -> bool {
        a == b
    }

    fn json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn random(sig: Signature, rng: &mut ChaCha8Rng) -> Multivector<Self> {
        random_integer(sig, RANDOM_BOUND, rng)
    }
}

/// `binomial(N, k) rho^k` with `rho` the coefficient 1-norm of `u`, a bound
/// on `|C_k|`.
fn coefficient_scale(u: &Multivector<f64>, k: usize) -> f64 {
    let rho: f64 = u.coeffs().iter().map(|c| c.abs()).sum::<f64>().max(1.0);
    let n = u.sig().char_degree();
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64) * rho.powi(k as i32)
}

impl Agree for f64 {
    fn agree(a: &CharPoly<Self>, b: &CharPoly<Self>, u: &Multivector<Self>) -> bool {
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .enumerate()
            .all(|(i, (x, y))| (x - y).abs() <= FLOAT_AGREEMENT_TOL * coefficient_scale(u, i + 1))
    }

    fn agree_mv(a: &Multivector<Self>, b: &Multivector<Self>, scale: f64) -> bool {
        a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs() <= FLOAT_AGREEMENT_TOL * scale.max(1.0))
    }

    fn json(&self) -> Value {
        json!(self)
    }

    fn random(sig: Signature, rng: &mut ChaCha8Rng) -> Multivector<Self> {
        random_float(sig, RANDOM_BOUND as f64, rng)
    }
}

fn dispatch(a: &Single, kind: Kind) -> CmdResult {
    let exact = parse_multivector(&a.input, a.common.sig).map_err(fail)?;
    match a.common.backend {
        Backend::Rational => single(a, kind, exact),
        Backend::Float => single(a, kind, exact.to_f64()),
    }
}

fn methods_for(choice: MethodChoice, n: usize) -> Vec<Method> {
    match choice {
        MethodChoice::One(m) => vec![m],
        MethodChoice::All => Method::all_for(n),
    }
}

fn list<T: Scalar>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn single<T: Agree>(a: &Single, kind: Kind, u: Multivector<T>) -> CmdResult {
    let methods = methods_for(a.method, u.sig().n());
    let mut results: Vec<(Method, CharPoly<T>)> = Vec::new();
    for &m in &methods {
        let cp = match kind {
            Kind::Det | Kind::Inverse if m != Method::Fl => {
                // Only the determinant is needed; keep the full polynomial from FL.
                let det = m.det(&u).map_err(fail)?;
                let mut coeffs = fl_coefficients(&u).coeffs().to_vec();
                let last = coeffs.len() - 1;
                coeffs[last] = -det;
                CharPoly::new(u.sig(), coeffs).map_err(fail)?
            }
            _ => m.charpoly(&u).map_err(fail)?,
        };
        results.push((m, cp));
    }
    let reference = results[0].1.clone();
    let consistent = results.iter().all(|(_, cp)| T::agree(cp, &reference, &u));

    let adjugate = match kind {
        Kind::Inverse => {
            let m = methods[0];
            let adj = m.adjugate(&u).unwrap_or_else(|| Ok(ga_vieta::adjugate(&u))).map_err(fail)?;
            Some(adj)
        }
        _ => None,
    };
    let det = reference.det();
    let inverse = match kind {
        Kind::Inverse => {
            let scale = u.max_abs().powi(u.sig().char_degree() as i32);
            if det.is_zero() || det.is_negligible(scale) {
                None
            } else {
                Some(adjugate.as_ref().expect("set for inverse").scale(&(T::one() / det.clone())))
            }
        }
        _ => None,
    };

    let method_name = match a.method {
        MethodChoice::All => "all".to_string(),
        MethodChoice::One(m) => m.to_string(),
    };
    let mut out = String::new();
    match a.common.format {
        Format::Json => {
            let mut obj = json!({
                "signature": u.sig().to_string(),
                "input": print_multivector(&u),
                "method": method_name,
                "coefficients": reference.coeffs().iter().map(Agree::json).collect::<Vec<_>>(),
                "det": det.json(),
            });
            if let Some(adj) = &adjugate {
                obj["adjugate"] = Value::String(print_multivector(adj));
            }
            if let Some(inv) = &inverse {
                obj["inverse"] = Value::String(print_multivector(inv));
            }
            if a.method == MethodChoice::All {
                obj["consistent"] = Value::Bool(consistent);
                obj["methods"] = results
                    .iter()
                    .map(|(m, cp)| {
                        (
                            m.to_string(),
                            Value::Array(cp.coeffs().iter().map(Agree::json).collect()),
                        )
                    })
                    .collect::<serde_json::Map<_, _>>()
                    .into();
            }
            out = serde_json::to_string_pretty(&obj).expect("serializable");
            out.push('\n');
        }
        Format::Text => {
            if a.method == MethodChoice::All {
                for (m, cp) in &results {
                    match kind {
                        Kind::Charpoly => writeln!(out, "{m}: C=[{}]", list(cp.coeffs())),
                        _ => writeln!(out, "{m}: {}", cp.det()),
                    }
                    .expect("string write");
                }
                writeln!(out, "consistent: {consistent}").expect("string write");
            } else {
                match kind {
                    Kind::Det => writeln!(out, "{det}"),
                    Kind::Charpoly => writeln!(out, "C=[{}]\nDet={det}", list(reference.coeffs())),
                    Kind::Inverse => match &inverse {
                        Some(inv) => writeln!(out, "{}", print_multivector(inv)),
                        None => Ok(()),
                    },
                }
                .expect("string write");
            }
        }
    }
    if !consistent {
        let disagree: Vec<String> = results
            .iter()
            .filter(|(_, cp)| !T::agree(cp, &reference, &u))
            .map(|(m, _)| m.to_string())
            .collect();
        return Err((CliError::Inconsistent(disagree.join(", ")), out));
    }
    if kind == Kind::Inverse && inverse.is_none() {
        return Err((CliError::Ga(GaError::NotInvertible { det: det.to_string() }), out));
    }
    Ok(out)
}

fn complex_str(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn cmd_eigen(a: &Single) -> CmdResult {
    let u = parse_multivector(&a.input, a.common.sig).map_err(fail)?.to_f64();
    let lambdas = eigenvalues(&u).map_err(fail)?;
    let report = if u.sig().n() <= 2 {
        Some(eigen_compare(&u).map_err(fail)?)
    } else {
        None
    };
    let mut out = String::new();
    match a.common.format {
        Format::Json => {
            let mut obj = json!({
                "signature": u.sig().to_string(),
                "input": print_multivector(&u),
                "eigenvalues": lambdas.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
            });
            if let Some(r) = &report {
                obj["closed_form"] = json!({
                    "lambdas": r.lambdas.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
                    "ys": r.ys.iter().map(print_multivector).collect::<Vec<_>>(),
                    "sum_matches": r.sum_matches,
                    "product_matches": r.product_matches,
                    "lambdas_equal_ys": r.coincide,
                });
            }
            out = serde_json::to_string_pretty(&obj).expect("serializable");
            out.push('\n');
        }
        Format::Text => {
            for (i, z) in lambdas.iter().enumerate() {
                writeln!(out, "lambda_{} = {}", i + 1, complex_str(z)).expect("string write");
            }
            if let Some(r) = &report {
                for (i, y) in r.ys.iter().enumerate() {
                    writeln!(out, "y_{} = {}", i + 1, print_multivector(y)).expect("string write");
                }
                writeln!(out, "lambdas equal ys: {}", r.coincide).expect("string write");
            }
        }
    }
    Ok(out)
}

fn cmd_gelfand_retakh(a: &Single) -> CmdResult {
    let u = parse_multivector(&a.input, a.common.sig).map_err(fail)?;
    let set = gelfand_retakh_ys(&u).map_err(fail)?;
    let coeffs = set.coefficients().map_err(fail)?;
    let mut out = String::new();
    match a.common.format {
        Format::Json => {
            let obj = json!({
                "signature": u.sig().to_string(),
                "input": print_multivector(&u),
                "x": set.xs.iter().map(print_multivector).collect::<Vec<_>>(),
                "v": set.vs.iter().map(print_multivector).collect::<Vec<_>>(),
                "y": set.ys.iter().map(print_multivector).collect::<Vec<_>>(),
                "coefficients": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
            out = serde_json::to_string_pretty(&obj).expect("serializable");
            out.push('\n');
        }
        Format::Text => {
            for (k, (v, y)) in set.vs.iter().zip(&set.ys).enumerate() {
                writeln!(out, "v_{} = {}", k + 1, print_multivector(v)).expect("string write");
                writeln!(out, "y_{} = {}", k + 1, print_multivector(y)).expect("string write");
            }
            writeln!(out, "a=[{}]", list(&coeffs)).expect("string write");
        }
    }
    Ok(out)
}

fn cmd_check(a: &Sweep) -> CmdResult {
    match a.common.backend {
        Backend::Rational => check::<Rational>(a),
        Backend::Float => check::<f64>(a),
    }
}

fn check<T: Agree>(a: &Sweep) -> CmdResult {
    let sig = a.common.sig;
    let methods = methods_for(a.method, sig.n());
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut failures: Vec<Value> = Vec::new();
    let mut ill_conditioned = 0usize;
    for trial in 0..a.trials {
        let u = T::random(sig, &mut rng);
        let reference = fl_coefficients(&u);
        let reference_adj = ga_vieta::adjugate(&u);
        let adj_scale = u.max_abs().powi(sig.char_degree() as i32 - 1);
        for &m in &methods {
            let problem = match m.charpoly(&u) {
                Err(GaError::IllConditioned { .. }) => {
                    ill_conditioned += 1;
                    None
                }
                Err(e) => Some(e.to_string()),
                Ok(cp) if !T::agree(&cp, &reference, &u) => Some(format!("C=[{}]", list(cp.coeffs()))),
                Ok(_) => match m.adjugate(&u) {
                    Some(Err(e)) => Some(e.to_string()),
                    Some(Ok(adj)) if !T::agree_mv(&adj, &reference_adj, adj_scale) => {
                        Some(format!("adjugate {}", print_multivector(&adj)))
                    }
                    _ => None,
                },
            };
            if let Some(detail) = problem {
                failures.push(json!({
                    "trial": trial,
                    "method": m.to_string(),
                    "input": print_multivector(&u),
                    "detail": detail,
                }));
            }
        }
    }
    let agree = failures.is_empty();
    let out = match a.common.format {
        Format::Json => {
            let obj = json!({
                "signature": sig.to_string(),
                "trials": a.trials,
                "seed": a.seed,
                "methods": methods.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "consistent": agree,
                "ill_conditioned": ill_conditioned,
                "failures": failures,
            });
            serde_json::to_string_pretty(&obj).expect("serializable") + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            for f in &failures {
                writeln!(
                    out,
                    "trial {} {}: {} for {}",
                    f["trial"], f["method"].as_str().unwrap_or(""), f["detail"].as_str().unwrap_or(""), f["input"].as_str().unwrap_or("")
                )
                .expect("string write");
            }
            writeln!(out, "{sig}: {} trials, {} methods", a.trials, methods.len()).expect("string write");
            if ill_conditioned > 0 {
                writeln!(out, "skipped as ill-conditioned: {ill_conditioned}").expect("string write");
            }
            writeln!(out, "all methods agree: {agree}").expect("string write");
            out
        }
    };
    if agree {
        Ok(out)
    } else {
        Err((CliError::Inconsistent(format!("{} mismatches", failures.len())), out))
    }
}

fn cmd_bench(a: &Sweep) -> CmdResult {
    match a.common.backend {
        Backend::Rational => bench::<Rational>(a),
        Backend::Float => bench::<f64>(a),
    }
}

fn bench<T: Agree>(a: &Sweep) -> CmdResult {
    let sig = a.common.sig;
    let methods = methods_for(a.method, sig.n());
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let inputs: Vec<Multivector<T>> = (0..a.trials).map(|_| T::random(sig, &mut rng)).collect();
    let mut rows: Vec<(String, f64, usize)> = Vec::new();
    for &m in &methods {
        let mut ill = 0;
        let start = Instant::now();
        for u in &inputs {
            match m.charpoly(u) {
                Ok(_) => {}
                Err(GaError::IllConditioned { .. }) => ill += 1,
                Err(e) => return Err(fail(e)),
            }
        }
        let per_call = start.elapsed().as_secs_f64() / a.trials.max(1) as f64;
        rows.push((m.to_string(), per_call, ill));
    }
    let out = match a.common.format {
        Format::Json => {
            let obj = json!({
                "signature": sig.to_string(),
                "trials": a.trials,
                "seed": a.seed,
                "seconds_per_call": rows.iter().map(|(m, s, _)| (m.clone(), json!(s))).collect::<serde_json::Map<_, _>>(),
                "ill_conditioned": rows.iter().map(|(m, _, i)| (m.clone(), json!(i))).collect::<serde_json::Map<_, _>>(),
            });
            serde_json::to_string_pretty(&obj).expect("serializable") + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "{sig}: {} trials", a.trials).expect("string write");
            for (m, s, ill) in &rows {
                write!(out, "{m:<24} {:>12.3} us/call", s * 1e6).expect("string write");
                if *ill > 0 {
                    write!(out, "  ({ill} ill-conditioned)").expect("string write");
                }
                out.push('\n');
            }
            out
        }
    };
    Ok(out)
}

fn cmd_formulas(a: &FormulaArgs) -> CmdResult {
    let dims: Vec<usize> = match a.n {
        Some(n) => vec![n],
        None => (1..=6).collect(),
    };
    let mut all = Vec::new();
    for n in dims {
        all.extend(catalog(n).map_err(fail)?);
    }
    let out = match a.format {
        Format::Json => serde_json::to_string_pretty(&all).expect("serializable") + "\n",
        Format::Text => {
            let mut out = String::new();
            for f in &all {
                writeln!(out, "n={} {} ({}):", f.n, f.name, f.family).expect("string write");
                for t in &f.terms {
                    writeln!(out, "  {} * {}", t.weight, t.expr).expect("string write");
                }
            }
            out
        }
    };
    Ok(out)
}
