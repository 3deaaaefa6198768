//! `bcw`: command-line front-end for the bcwiener toolkit.
//!
//! Every subcommand reads JSON input, writes a JSON or CSV result file,
//! and prints a JSON run report to stdout. Outputs are byte-deterministic:
//! fixed summation orders inside the library, shortest round-trip float
//! formatting, and no timestamps in reports.
//!
//! Exit codes: 0 success, 2 domain errors (non-invertible boundary value,
//! indefinite density, eigenvalue on the circle, ...), 3 I/O, schema or
//! configuration errors. `BCW_THREADS` caps worker parallelism.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use bcwiener::jsonio::{self, SchemaError};
use bcwiener::realization::{
    build_realization, fourier_from_realization, riesz_projection, stein_solve, RieszMethod,
};
use bcwiener::series::BCLaurentSeries;
use bcwiener::spectral::{invert, spectral_factorize, FactorizeOptions, Normalization};
use bcwiener::superosc::{approximate_series, channel_angle_grid, superosc_coeffs};

#[derive(Parser)]
#[command(
    name = "bcw",
    about = "Bicomplex Wiener-algebra pipelines over JSON/CSV files",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Input file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output file (JSON or CSV depending on the command).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Truncation order K: results keep coefficients with |n| <= K
    /// (factors: 0 <= n <= K).
    #[arg(short = 'K', long = "truncation", global = true)]
    k: Option<usize>,

    /// Sample grid size N (a power of two, N >= 2K+2).
    #[arg(short = 'N', long = "grid-size", global = true)]
    n: Option<usize>,

    /// Sweep resolution for `approx` (points per channel-angle axis).
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Tolerance: smallest-singular-value floor for `invert`, Newton
    /// residual for `factorize`.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Iteration cap for `factorize`.
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Factor normalization: `pd0` or `at_one`.
    #[arg(long, global = true)]
    normalization: Option<String>,

    /// Riesz projector method for `fourier`: `schur` or `quadrature`.
    #[arg(long, global = true)]
    method: Option<String>,

    /// Seed echoed into reports; reserved for randomized self-tests.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Superoscillation order m (`superosc`, `approx`).
    #[arg(long, global = true)]
    m: Option<u32>,

    /// Superoscillation parameter a (`superosc`).
    #[arg(long, global = true)]
    a: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Idempotent decomposition of a bicomplex scalar.
    Decompose,
    /// Wiener inversion of a series on the bicomplex boundary.
    Invert,
    /// Spectral factorization f = f+ f+* of a positive series.
    Factorize,
    /// State-space realization of a partial-fraction expansion.
    Realize,
    /// Laurent coefficients of a realization via Riesz projection.
    Fourier,
    /// Solve the Stein equation X - a X a* = b b*.
    Stein,
    /// Superoscillation coefficients c_k(m, a) as CSV.
    Superosc,
    /// Band-limited approximation error sweep as CSV.
    Approx,
}

enum CliError {
    /// Mathematical infeasibility: exit 2.
    Domain(bcwiener::Error),
    /// I/O, schema or configuration faults: exit 3.
    Schema(String),
}

impl From<bcwiener::Error> for CliError {
    fn from(e: bcwiener::Error) -> Self {
        match e {
            bcwiener::Error::InvalidParameter(msg) => CliError::Schema(msg),
            other => CliError::Domain(other),
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Schema(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(3);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    if let Err(e) = init_thread_pool() {
        eprintln!("{}", error_json("schema", &e));
        return ExitCode::from(3);
    }
    match run(&cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report"));
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(e)) => {
            eprintln!("{}", error_json("domain", &e.to_string()));
            ExitCode::from(2)
        }
        Err(CliError::Schema(msg)) => {
            eprintln!("{}", error_json("schema", &msg));
            ExitCode::from(3)
        }
    }
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::to_string(&json!({ "kind": kind, "message": message })).expect("error report")
}

fn init_thread_pool() -> Result<(), String> {
    if let Ok(raw) = std::env::var("BCW_THREADS") {
        let threads: usize = raw
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| format!("BCW_THREADS must be a positive integer, got {raw:?}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    Ok(())
}

fn input_path(cli: &Cli) -> Result<&PathBuf, CliError> {
    cli.input
        .as_ref()
        .ok_or_else(|| CliError::Schema("--input is required for this command".into()))
}

fn output_path(cli: &Cli) -> Result<&PathBuf, CliError> {
    cli.output
        .as_ref()
        .ok_or_else(|| CliError::Schema("--output is required for this command".into()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text).map_err(SchemaError::from)?)
}

fn write_text(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)?;
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &PathBuf, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Schema(format!("serialize: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}

fn read_series(cli: &Cli) -> Result<BCLaurentSeries, CliError> {
    let j: jsonio::SeriesJson = read_json(input_path(cli)?)?;
    Ok(jsonio::series_from_json(&j)?)
}

fn series_span(f: &BCLaurentSeries) -> i64 {
    f.support().map(|(lo, hi)| hi - lo).unwrap_or(0)
}

fn pick_grid(cli: &Cli, k: usize, span: i64) -> Result<usize, CliError> {
    let n = cli
        .n
        .unwrap_or_else(|| bcwiener::spectral::default_grid_size(span.max(2 * k as i64)));
    if !n.is_power_of_two() || n < 2 * k + 2 {
        return Err(CliError::Schema(format!(
            "grid size {n} must be a power of two with N >= 2K+2"
        )));
    }
    Ok(n)
}

fn run(cli: &Cli) -> Result<serde_json::Value, CliError> {
    match cli.command {
        Cmd::Decompose => {
            let j: jsonio::ScalarJson = read_json(input_path(cli)?)?;
            let z = jsonio::scalar_from_json(&j)?;
            let (l1, l2) = z.idempotent();
            let out = json!({
                "lambda1": [l1.re, l1.im],
                "lambda2": [l2.re, l2.im],
            });
            write_json(output_path(cli)?, &out)?;
            Ok(json!({
                "command": "decompose",
                "dual_lie_norm": z.dual_lie_norm(),
                "invertible": z.inverse().is_ok(),
                "seed": cli.seed,
            }))
        }
        Cmd::Invert => {
            let f = read_series(cli)?;
            let k = cli.k.unwrap_or(24);
            let n = pick_grid(cli, k, series_span(&f))?;
            let tol = cli.tol.unwrap_or(1e-9);
            let result = invert(&f, k, n, tol)?;
            write_json(output_path(cli)?, &jsonio::series_to_json(&result.inverse))?;
            Ok(json!({
                "command": "invert",
                "K": k,
                "N": n,
                "tol": tol,
                "residual": result.residual,
                "input_tail_mass": f.tail_mass(k as i64),
                "seed": cli.seed,
            }))
        }
        Cmd::Factorize => {
            let f = read_series(cli)?;
            let k = cli.k.unwrap_or(16);
            let n = pick_grid(cli, k, series_span(&f).max(2 * k as i64))?;
            let normalization = match cli.normalization.as_deref() {
                None | Some("pd0") => Normalization::PdZero,
                Some("at_one") => Normalization::AtOne,
                Some(other) => {
                    return Err(CliError::Schema(format!(
                        "unknown normalization {other:?} (expected pd0 or at_one)"
                    )))
                }
            };
            let opts = FactorizeOptions {
                truncation: k,
                grid: n,
                newton_tol: cli.tol.unwrap_or(1e-10),
                max_iter: cli.max_iter.unwrap_or(60),
                pd_tol: 1e-10,
                normalization,
            };
            let fac = spectral_factorize(&f, &opts)?;
            write_json(output_path(cli)?, &jsonio::series_to_json(&fac.plus))?;
            Ok(json!({
                "command": "factorize",
                "options": jsonio::factorize_options_to_json(&opts),
                "residual": fac.residual,
                "iterations": fac.iterations,
                "input_tail_mass": f.tail_mass(k as i64),
                "seed": cli.seed,
            }))
        }
        Cmd::Realize => {
            let j: jsonio::PartialFractionsJson = read_json(input_path(cli)?)?;
            let pf = jsonio::partial_fractions_from_json(&j)?;
            let r = build_realization(&pf)?;
            write_json(output_path(cli)?, &jsonio::realization_to_json(&r))?;
            Ok(json!({
                "command": "realize",
                "state_dim": r.state_dim(),
                "poles": pf.poles.len(),
                "seed": cli.seed,
            }))
        }
        Cmd::Fourier => {
            let j: jsonio::RealizationJson = read_json(input_path(cli)?)?;
            let r = jsonio::realization_from_json(&j)?;
            let k = cli.k.unwrap_or(16) as i64;
            let method = match cli.method.as_deref() {
                None | Some("schur") => RieszMethod::Schur,
                Some("quadrature") => RieszMethod::Quadrature,
                Some(other) => {
                    return Err(CliError::Schema(format!(
                        "unknown method {other:?} (expected schur or quadrature)"
                    )))
                }
            };
            let proj = riesz_projection(&r.a, method)?;
            let mut terms = Vec::new();
            for n in -k..=k {
                let coeff = fourier_from_realization(&r, &proj, n)?;
                terms.push(json!({ "n": n, "coeff": jsonio::cmatrix_to_json(&coeff) }));
            }
            write_json(output_path(cli)?, &json!({ "terms": terms }))?;
            Ok(json!({
                "command": "fourier",
                "K": k,
                "method": match method { RieszMethod::Schur => "schur", RieszMethod::Quadrature => "quadrature" },
                "projector_rank": proj.rank(),
                "state_dim": r.state_dim(),
                "seed": cli.seed,
            }))
        }
        Cmd::Stein => {
            #[derive(serde::Deserialize)]
            struct SteinInput {
                a: jsonio::CMatrixJson,
                b: jsonio::CMatrixJson,
            }
            let j: SteinInput = read_json(input_path(cli)?)?;
            let a = jsonio::cmatrix_from_json(&j.a)?;
            let b = jsonio::cmatrix_from_json(&j.b)?;
            let x = stein_solve(&a, &b)?;
            write_json(output_path(cli)?, &json!({ "X": jsonio::cmatrix_to_json(&x) }))?;
            let rhs = &b * b.adjoint();
            let residual = bcwiener::cmatrix::frob_norm(&(&x - &a * &x * a.adjoint() - rhs));
            Ok(json!({
                "command": "stein",
                "residual": residual,
                "seed": cli.seed,
            }))
        }
        Cmd::Superosc => {
            let m = cli
                .m
                .filter(|&m| m >= 1)
                .ok_or_else(|| CliError::Schema("--m (>= 1) is required for superosc".into()))?;
            let a = cli
                .a
                .ok_or_else(|| CliError::Schema("--a is required for superosc".into()))?;
            if !a.is_finite() {
                return Err(CliError::Schema("--a must be finite".into()));
            }
            let coeffs = superosc_coeffs(m, a);
            let mut csv = String::from("k,c\n");
            for (k, c) in coeffs.iter().enumerate() {
                writeln!(csv, "{},{}", k, c).expect("string write");
            }
            write_text(output_path(cli)?, &csv)?;
            let abs_sum: f64 = coeffs.iter().map(|c| c.abs()).sum();
            Ok(json!({
                "command": "superosc",
                "m": m,
                "a": a,
                "abs_coefficient_sum": abs_sum,
                "seed": cli.seed,
            }))
        }
        Cmd::Approx => {
            let f = read_series(cli)?;
            let m = cli
                .m
                .filter(|&m| m >= 1)
                .ok_or_else(|| CliError::Schema("--m (>= 1) is required for approx".into()))?;
            let steps = cli.grid.unwrap_or(9);
            if steps == 0 {
                return Err(CliError::Schema("--grid must be positive".into()));
            }
            let grid = channel_angle_grid(1.0, steps);
            let mut csv = String::from("m,a,t,s,err\n");
            let mut sup_err = 0.0f64;
            for pt in &grid {
                let exact = f.eval(pt);
                let approx = approximate_series(&f, m, pt)?;
                let err = exact.sub(&approx)?.bc_op_norm();
                sup_err = sup_err.max(err);
                // the per-term superoscillation parameter is a = n, so the
                // `a` column stays empty for series sweeps
                writeln!(csv, "{},,{},{},{}", m, pt.t(), pt.s(), err).expect("string write");
            }
            write_text(output_path(cli)?, &csv)?;
            Ok(json!({
                "command": "approx",
                "m": m,
                "grid": steps,
                "sup_error": sup_err,
                "seed": cli.seed,
            }))
        }
    }
}
