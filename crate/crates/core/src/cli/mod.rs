//! Command-line front end: argument definitions, commands and exit codes.

pub mod parse;
pub mod report;

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::invariants::{self, AnalysisReport, Comparison, ComponentReport, ResidueSeries};
use crate::numbertheory::{Params, DEFAULT_MARGIN};
use crate::par::Strategy;
use crate::poly::SymPoly;
use crate::{corpus, oracle, series, witt, Error, Result};

pub use parse::{parse_expr, parse_poly, Parsed, Pos};
pub use report::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "piexp", version, about = "Solubility, residue invariant and index of y' = L(T) y over Q_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solubility, ê, index, L-function degree, comparison and Witt coordinates.
    Analyze(Common),
    /// Index χ and L-function degree Δ (requires solubility).
    Index(Common),
    /// Whether two equations are equivalent.
    Equiv(Common),
    /// Comparison criterion χ = 1 - deg P.
    Compare(Common),
    /// Remove superfluous factors until the comparison criterion holds.
    Reduce(Common),
    /// Artin-Hasse coordinates of ê and the index they give.
    Witt(Common),
    /// A polynomial with prescribed ê, written as a series such as `1 + 2*T^3`.
    Lift(Common),
    /// Ring-multiplication counts of the truncated exponential over a grid of D.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// The prime p.
    #[arg(short = 'p', long = "p")]
    pub p: u64,
    /// Degree bound D (defaults to the degree of the input).
    #[arg(short = 'D', long = "degree-bound")]
    pub degree_bound: Option<usize>,
    /// Extra p-adic precision digits.
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    pub margin: u32,
    /// Cross-check against the exact oracle.
    #[arg(long)]
    pub probe: bool,
    /// Oracle probe horizon (defaults to 3D).
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
    /// Read expressions from a file, one per line (`-` for stdin).
    #[arg(short = 'f', long)]
    pub file: Option<PathBuf>,
    /// Expressions; read from stdin when none is given.
    pub exprs: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Sequential,
    Parallel,
    #[default]
    Both,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(short = 'p', long = "p", default_value_t = 2)]
    pub p: u64,
    /// Degree bounds to run.
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64])]
    pub grid: Vec<usize>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Both)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    pub margin: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock times.
    #[arg(long)]
    pub timing: bool,
}

/// Exit status for each error class.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INSOLUBLE: i32 = 3;
    pub const PRECISION: i32 = 4;
    pub const INTERNAL: i32 = 5;
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::NotPrime(_)
        | Error::InvalidDegreeBound(_)
        | Error::IndexOutOfRange { .. }
        | Error::DegreeExceedsBound { .. }
        | Error::DegreeMismatch { .. }
        | Error::NotPTypical(_)
        | Error::ZeroPolynomial => exit::USAGE,
        Error::Insoluble { .. } => exit::INSOLUBLE,
        Error::PrecisionExhausted(_) => exit::PRECISION,
        Error::NonUnit
        | Error::ValuationTooSmall { .. }
        | Error::ContextMismatch
        | Error::NonIntegral(_)
        | Error::Inconsistency(_) => exit::INTERNAL,
    }
}

/// What a command prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn from_error(err: &Error) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            code: exit_code(err),
        }
    }
}

/// Runs a parsed command line. `stdin` is consulted only when the command
/// has no positional expressions and no file.
pub fn run(cli: Cli, stdin: &mut dyn Read) -> Outcome {
    let result = match cli.command {
        Command::Bench(args) => cmd_bench(&args).map(|r| (r, args.format)),
        Command::Analyze(c) => with_inputs(&c, stdin, cmd_analyze),
        Command::Index(c) => with_inputs(&c, stdin, cmd_index),
        Command::Equiv(c) => with_inputs(&c, stdin, cmd_equiv),
        Command::Compare(c) => with_inputs(&c, stdin, cmd_compare),
        Command::Reduce(c) => with_inputs(&c, stdin, cmd_reduce),
        Command::Witt(c) => with_inputs(&c, stdin, cmd_witt),
        Command::Lift(c) => with_inputs(&c, stdin, cmd_lift),
    };
    match result {
        Ok((report, format)) => Outcome {
            stdout: report.render(format),
            stderr: String::new(),
            code: exit::OK,
        },
        Err(err) => Outcome::from_error(&err),
    }
}

type Handler = fn(&Common, &[Parsed], &mut Report) -> Result<()>;

fn with_inputs(c: &Common, stdin: &mut dyn Read, handler: Handler) -> Result<(Report, Format)> {
    let start = Instant::now();
    let inputs = read_inputs(c, stdin)?;
    let mut report = Report::default();
    handler(c, &inputs, &mut report)?;
    if c.timing {
        report.push("wall_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
    }
    Ok((report, c.format))
}

fn read_inputs(c: &Common, stdin: &mut dyn Read) -> Result<Vec<Parsed>> {
    if !c.exprs.is_empty() {
        return c
            .exprs
            .iter()
            .enumerate()
            .map(|(i, e)| parse_expr(e, i + 1))
            .collect();
    }
    let mut text = String::new();
    let io_err = |e: std::io::Error| Error::Parse {
        line: 0,
        column: 0,
        message: format!("cannot read input: {e}"),
    };
    match &c.file {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path).map_err(io_err)?;
        }
        _ => {
            stdin.read_to_string(&mut text).map_err(io_err)?;
        }
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_expr(l, i + 1))
        .collect()
}

fn arity(inputs: &[Parsed], n: usize) -> Result<()> {
    if inputs.len() != n {
        return Err(Error::Parse {
            line: inputs.get(n).map_or(0, |p| p.start().line),
            column: 0,
            message: format!("expected {n} expression(s), got {}", inputs.len()),
        });
    }
    Ok(())
}

/// Context for the inputs: `D` is the flag or the largest degree.
fn context(c: &Common, inputs: &[Parsed]) -> Result<Params> {
    let deg = inputs.iter().map(Parsed::degree).max().unwrap_or(0).max(1);
    Params::new(c.p, c.degree_bound.unwrap_or(deg), c.margin)
}

fn poly(parsed: &Parsed, params: &Params) -> Result<SymPoly> {
    parsed
        .clone()
        .into_poly(params.degree_bound(), params.ring().d())
}

fn push_context(r: &mut Report, params: &Params) {
    r.push("p", params.p());
    r.push("degree_bound", params.degree_bound());
    r.push("d", params.d());
    r.push("e", params.e());
    r.push("precision", params.precision());
    r.push("margin", params.margin());
}

fn ehat_digits(e: &ResidueSeries) -> String {
    e.coeffs()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn vt_string(v: Option<usize>) -> String {
    v.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

fn push_ehat(r: &mut Report, prefix: &str, e: &ResidueSeries) {
    r.push(format!("{prefix}ehat"), e);
    r.push(format!("{prefix}ehat_coeffs"), ehat_digits(e));
    r.push(format!("{prefix}vt"), vt_string(e.vt()));
}

fn push_components(r: &mut Report, parts: &[ComponentReport]) {
    r.push("components", parts.iter().map(|c| c.m.to_string()).collect::<Vec<_>>().join(","));
    for c in parts {
        let prefix = format!("component.{}.", c.m);
        r.push(format!("{prefix}degree_bound"), c.degree_bound);
        push_ehat(r, &prefix, &c.ehat);
        r.push(format!("{prefix}weight"), c.weight);
    }
}

fn push_comparison(r: &mut Report, c: &Comparison) {
    r.push("comparison_iso", c.iso);
    r.push("comparison_m", c.m);
    r.push("comparison_n", c.n);
    r.push("derivative_criterion", c.derivative_criterion);
    r.push("innocuous", c.innocuous.map_or_else(|| "na".to_string(), |b| b.to_string()));
}

fn push_witt(r: &mut Report, w: &witt::WittFactorization) {
    let coords = w
        .factors
        .iter()
        .map(|(n, u)| format!("{n}:{u}"))
        .collect::<Vec<_>>()
        .join(",");
    r.push("witt", if coords.is_empty() { "none".to_string() } else { coords });
}

fn push_analysis(r: &mut Report, a: &AnalysisReport) {
    r.push("k", a.k);
    r.push("prepared_valuation", a.prepared_valuation);
    r.push("ring_mults", a.ring_mults);
    r.push("soluble", a.solubility.soluble);
    if let Some(w) = a.solubility.witness {
        r.push("witness_degree", w.degree);
        r.push("witness_deficit", w.deficit);
    }
    if let Some(det) = &a.details {
        r.push("trivial", det.trivial);
        push_ehat(r, "", &det.ehat);
        r.push("chi", det.chi);
        r.push("chi_witt", det.chi_witt);
        r.push("delta", det.delta);
        if let Some(c) = &det.comparison {
            push_comparison(r, c);
        }
        push_witt(r, &det.witt);
        push_components(r, &det.components);
    }
}

fn push_probe(r: &mut Report, c: &Common, p: &SymPoly, params: &Params) -> Result<()> {
    let horizon = c.horizon.unwrap_or(3 * params.degree_bound());
    let cc = oracle::crosscheck_pipeline(p, params, horizon)?;
    r.push("probe.agreement", true);
    r.push("probe.min_precision", cc.min_precision);
    r.push("probe.direct_compared", cc.direct_compared);
    r.push("probe.horizon", cc.probe.horizon);
    r.push("probe.integral", cc.probe.integral());
    r.push(
        "probe.first_failure",
        cc.probe
            .first_failure
            .map_or_else(|| "none".to_string(), |(i, v)| format!("{i}:{v}")),
    );
    r.push(
        "probe.divisible_from",
        cc.probe.divisible_from.map_or_else(|| "none".to_string(), |n| n.to_string()),
    );
    Ok(())
}

fn cmd_analyze(c: &Common, inputs: &[Parsed], r: &mut Report) -> Result<()> {
    arity(inputs, 1)?;
    let params = context(c, inputs)?;
    let p = poly(&inputs[0], &params)?;
    r.push("command", "analyze");
    r.push("input", &p);
    push_context(r, &params);
    let a = invariants::analyze(&p.to_input(&params)?, &params, Strategy::default())?;
    push_analysis(r, &a);
    if c.probe {
        push_probe(r, c, &p, &params)?;
    }
    Ok(())
}

fn cmd_index(c: &Common, inputs: &[Parsed], r: &mut Report) -> Result<()> {
    arity(inputs, 1)?;
    let params = context(c, inputs)?;
    let p = poly(&inputs[0], &params)?;
    let x = p.to_input(&params)?;
    r.push("command", "index");
    r.push("input", &p);
    push_context(r, &params);
    let ehat = invariants::residue_invariant(&x, &params)?;
    let chi = invariants::index(&x, &params)?;
    push_ehat(r, "", &ehat);
    r.push("trivial", ehat.is_one());
    r.push("chi", chi);
    if x.check_p_typical(params.p()).is_ok() {
        r.push("chi_p_typical", invariants::index_p_typical(&x, &params)?);
    }
    r.push("delta", invariants::lfunction_degree(&x, &params)?);
    push_components(r, &invariants::components(&x, &params)?);
    if c.probe {
        push_probe(r, c, &p, &params)?;
    }
    Ok(())
}

fn cmd_equiv(c: &Common, inputs: &[Parsed], r: &mut Report) -> Result<()> {
    arity(inputs, 2)?;
    let params = context(c, inputs)?;
    let p1 = poly(&inputs[0], &params)?;
    let p2 = poly(&inputs[1], &params)?;
    r.push("command", "equiv");
    r.push("input.1", &p1);
    r.push("input.2", &p2);
    push_context(r, &params);
    let x1 = p1.to_input(&params)?;
    let x2 = p2.to_input(&params)?;
    let equivalent = invariants::equivalent(&x1, &x2, &params)?;
    for (i, x) in [(1, &x1), (2, &x2)] {
        match invariants::residue_invariant(x, &params) {
            Ok(e) => push_ehat(r, &format!("input.{i}."), &e),
            Err(Error::Insoluble { .. }) => r.push(format!("input.{i}.soluble"), false),
            Err(err) => return Err(err),
        }
    }
    r.push("equivalent", equivalent);
    Ok(())
}

fn cmd_compare(c: &Common, inputs: &[Parsed], r: &mut Report) -> Result<()> {
    arity(inputs, 1)?;
    let params = context(c, inputs)?;
    let p = poly(&inputs[0], &params)?;
    r.push("command", "compare");
    r.push("input", &p);
    push_context(r, &params);
    let cmp = invariants::comparison_iso(&p.to_input(&params)?, &params)?;
    r.push("chi", cmp.chi);
    push_comparison(r, &cmp);
    Ok(())
}

fn cmd_reduce(c: &Common, inputs: &[Parsed], r: &mut Report) -> Result<()> {
    arity(inputs, 1)?;
    let params = context(c, inputs)?;
    let p = poly(&inputs[0], &params)?;
    r.push("command", "reduce");
    r.push("input", &p);
    push_context(r, &params);
    let red = invariants::reduce_comparison(&p, &params)?;
    r.push("steps", red.steps.len());
    for (i, s) in red.steps.iter().enumerate() {
        let prefix = format!("step.{}.", i + 1);
        r.push(format!("{prefix}degree"), s.degree);
        r.push(format!("{prefix}m"), s.m);
        r.push(format!("{prefix}factor"), &s.factor);
    }
    r.push("reduced", &red.reduced);
    if let Some(cmp) = &red.comparison {
        r.push("chi", cmp.chi);
        push_comparison(r, cmp);
    }
    r.push("equivalent", true);
    Ok(())
}

fn cmd_witt(c: &Common, inputs: &[Parsed], r: &mut Report) -> Result<()> {
    arity(inputs, 1)?;
    let params = context(c, inputs)?;
    let p = poly(&inputs[0], &params)?;
    r.push("command", "witt");
    r.push("input", &p);
    push_context(r, &params);
    let ehat = invariants::residue_invariant(&p.to_input(&params)?, &params)?;
    let w = witt::witt_factorize(&ehat)?;
    push_ehat(r, "", &ehat);
    push_witt(r, &w);
    r.push("chi_witt", w.index());
    Ok(())
}

fn cmd_lift(c: &Common, inputs: &[Parsed], r: &mut Report) -> Result<()> {
    arity(inputs, 1)?;
    let parsed = inputs[0].clone();
    let start = parsed.start();
    let degree = parsed.degree().max(1);
    let (constant, rest) = parsed.into_series();
    let params = Params::new(c.p, c.degree_bound.unwrap_or(degree), c.margin)?;
    if rest.degree() > params.degree_bound() {
        return Err(start.error_at(format!(
            "degree {} exceeds the bound {}",
            rest.degree(),
            params.degree_bound()
        )));
    }
    let pb = BigInt::from(c.p);
    let residue = |q: num_rational::BigRational| -> Result<u64> {
        let inv = q
            .denom()
            .mod_floor(&pb)
            .modinv(&pb)
            .ok_or_else(|| start.error_at("coefficients of ê must be p-integral"))?;
        Ok((q.numer() * inv).mod_floor(&pb).to_u64().expect("residue fits"))
    };
    let c0 = residue(parse::rational_constant(constant.as_ref(), start)?)?;
    let mut coeffs = vec![c0];
    for i in 1..=params.degree_bound() {
        coeffs.push(residue(parse::rational_constant(rest.coeff(i), start)?)?);
    }
    let ehat = ResidueSeries::new(c.p, coeffs).map_err(|_| start.error_at("constant term of ê must be 1"))?;
    let lifted = invariants::lift_symbolic(&ehat, &params)?;
    r.push("command", "lift");
    push_context(r, &params);
    push_ehat(r, "", &ehat);
    r.push("lift", &lifted);
    let back = invariants::residue_invariant(&lifted.to_input(&params)?, &params)?;
    if back != ehat {
        return Err(Error::inconsistency(format!("lift reproduces {back} instead of {ehat}")));
    }
    r.push("roundtrip", true);
    Ok(())
}

impl Pos {
    fn error_at(self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

/// One grid point of [`cmd_bench`].
#[derive(Clone, Debug, PartialEq)]
pub struct BenchPoint {
    pub degree_bound: usize,
    pub ring_mults: u64,
    pub bound: u64,
    pub seconds: Vec<(Strategy, f64)>,
}

/// Least-squares slope of `log y` against `log x`.
pub fn fitted_exponent(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Runs prepare + truncated exponential on a fixed lifted input per `D`.
pub fn bench_point(p: u64, dd: usize, margin: u32, strategies: &[Strategy]) -> Result<BenchPoint> {
    let params = Params::new(p, dd, margin)?;
    let sym = corpus::random_soluble(&mut ChaCha8Rng::seed_from_u64(dd as u64), &params)?;
    let x = sym.to_input(&params)?;
    let ptilde = series::tilde_transform(&x, &params)?;
    let prepared = series::prepare(&ptilde, &params, series::PrepareMode::Minimal)?;
    let ltilde = series::derivative(&prepared.poly, &params)?;
    let mut mults = None;
    let mut seconds = Vec::new();
    for &s in strategies {
        let start = Instant::now();
        let out = series::truncated_exp(&ltilde, &params, s)?;
        seconds.push((s, start.elapsed().as_secs_f64()));
        if mults.is_some_and(|m| m != out.ring_mults) {
            return Err(Error::inconsistency("strategies disagree on the multiplication count"));
        }
        mults = Some(out.ring_mults);
    }
    let n = dd as u64;
    Ok(BenchPoint {
        degree_bound: dd,
        ring_mults: mults.unwrap_or(0),
        bound: n * (n - 1) / 2 + n,
        seconds,
    })
}

fn cmd_bench(args: &BenchArgs) -> Result<Report> {
    let strategies: Vec<Strategy> = match args.strategy {
        StrategyArg::Sequential => vec![Strategy::Sequential],
        StrategyArg::Parallel => vec![Strategy::Parallel],
        StrategyArg::Both => vec![Strategy::Sequential, Strategy::Parallel],
    };
    let mut r = Report::default();
    r.push("command", "bench");
    r.push("p", args.p);
    r.push("grid", args.grid.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    let mut points = Vec::new();
    for &dd in &args.grid {
        let pt = bench_point(args.p, dd, args.margin, &strategies)?;
        let prefix = format!("D.{dd}.");
        r.push(format!("{prefix}ring_mults"), pt.ring_mults);
        r.push(format!("{prefix}bound"), pt.bound);
        r.push(format!("{prefix}within_bound"), pt.ring_mults <= pt.bound);
        if args.timing {
            for (s, secs) in &pt.seconds {
                r.push(format!("{prefix}seconds.{}", strategy_name(*s)), format!("{secs:.6}"));
            }
        }
        points.push(pt);
    }
    if points.len() >= 2 {
        let xy: Vec<(f64, f64)> = points
            .iter()
            .map(|pt| (pt.degree_bound as f64, pt.ring_mults as f64))
            .collect();
        r.push("fitted_exponent", format!("{:.4}", fitted_exponent(&xy)));
        if args.timing {
            for (k, s) in strategies.iter().enumerate() {
                let xy: Vec<(f64, f64)> = points
                    .iter()
                    .map(|pt| (pt.degree_bound as f64, pt.seconds[k].1.max(1e-9)))
                    .collect();
                r.push(format!("time_exponent.{}", strategy_name(*s)), format!("{:.4}", fitted_exponent(&xy)));
            }
        }
    }
    Ok(r)
}

fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Sequential => "sequential",
        Strategy::Parallel => "parallel",
    }
}

/// Convenience for tests and scripts: parse arguments and run.
pub fn run_args<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdin),
        Err(err) => {
            let code = if err.use_stderr() { exit::USAGE } else { exit::OK };
            let text = err.to_string();
            if code == exit::OK {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> Outcome {
        let mut argv = vec!["piexp"];
        argv.extend_from_slice(args);
        run_args(argv, &mut std::io::empty())
    }

    fn machine(args: &[&str]) -> Report {
        let mut argv = args.to_vec();
        argv.extend(["--format", "machine"]);
        let out = run_cli(&argv);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let mut r = Report::default();
        for (k, v) in report::parse_machine(&out.stdout) {
            r.push(k, v);
        }
        r
    }

    #[test]
    fn index_of_pi0_t() {
        for p in ["2", "3", "5"] {
            let r = machine(&["index", "-p", p, "-D", p, "pi(0)*T"]);
            assert_eq!(r.get("chi"), Some("0"));
            assert_eq!(r.get("delta"), Some("0"));
            assert_eq!(r.get("vt"), Some(p));
        }
    }

    #[test]
    fn reduce_dwork() {
        let r = machine(&["reduce", "-p", "2", "pi(0)*T^2"]);
        assert_eq!(r.get("steps"), Some("1"));
        assert_eq!(r.get("reduced"), Some("pi(0)*T"));
        assert_eq!(r.get("step.1.factor"), Some("-pi(0)*T + pi(0)*T^2"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_cli(&["index", "-p", "2", "T +"]).code, exit::USAGE);
        assert_eq!(run_cli(&["index", "-p", "4", "T"]).code, exit::USAGE);
        assert_eq!(run_cli(&["index", "-p", "2", "T"]).code, exit::INSOLUBLE);
        assert_eq!(run_cli(&["analyze", "-p", "2", "T"]).code, exit::OK);
        assert_eq!(run_cli(&["frobnicate"]).code, exit::USAGE);
        assert_eq!(run_cli(&["compare", "-p", "2", "-D", "3", "pi(0)*T"]).code, exit::USAGE);
        assert_eq!(exit_code(&Error::precision("x")), exit::PRECISION);
        assert_eq!(exit_code(&Error::inconsistency("x")), exit::INTERNAL);
    }

    #[test]
    fn deterministic_output() {
        let args = ["analyze", "-p", "3", "pi(0)*T + pi(1)*T^2 - 1/3*pi(0)*T^3", "--probe"];
        let a = run_cli(&args);
        let b = run_cli(&args);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a, b);
    }

    #[test]
    fn stdin_and_lift() {
        let mut input = "# comment\npi(0)*T\n\n2*pi(0)*T\n".as_bytes();
        let out = run_args(["piexp", "equiv", "-p", "3", "--format", "machine"], &mut input);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("equivalent=false"));
        let r = machine(&["lift", "-p", "3", "1 + 2*T + T^3"]);
        assert_eq!(r.get("roundtrip"), Some("true"));
        assert_eq!(r.get("ehat_coeffs"), Some("1,2,0,1"));
    }

    #[test]
    fn bench_counts() {
        let r = machine(&["bench", "--strategy", "sequential"]);
        assert_eq!(r.get("D.8.ring_mults"), Some("36"));
        assert_eq!(r.get("D.64.ring_mults"), Some("2080"));
        let e: f64 = r.get("fitted_exponent").unwrap().parse().unwrap();
        assert!((1.8..=2.2).contains(&e));
    }

    #[test]
    fn fit() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0].iter().map(|&x: &f64| (x, 3.0 * x.powi(2))).collect();
        assert!((fitted_exponent(&pts) - 2.0).abs() < 1e-12);
    }
}
