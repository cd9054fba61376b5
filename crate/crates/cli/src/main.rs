//! Command-line front end: evaluate any implemented Whittaker function,
//! run the identity-verification suites, and emit CSV tables.
//!
//! Exit codes: 0 success, 1 failed identity in `verify`, 2 bad usage or
//! parameter schema, 3 numerical failure (unconverged or infeasible
//! contour).

mod params;

use clap::{Args, Parser, Subcommand, ValueEnum};
use params::{parse_complex_list, parse_complex_scalar, ParamError};
use serde_json::{json, Value};
use std::process::ExitCode;
use whittaker_core::arch::{
    f_spherical, miyazaki_mb, whittaker_c_mb, MinimalTypeParamsC, MiyazakiParams, SphericalParamsC,
    TorusPointC, WeightIndexC,
};
use whittaker_core::asai::{asai_l_factor, AsaiInput};
use whittaker_core::padic::{parse_big_rational, shintani_value, DominantWeight, SatakeParams};
use whittaker_core::{settings, verify, Error};

#[derive(Parser)]
#[command(
    name = "whittaker",
    version,
    about = "Whittaker functions on GL(n) over local fields"
)]
struct Cli {
    /// Target relative tolerance for numerical evaluations.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Truncation height for vertical-line contours.
    #[arg(long, global = true)]
    mb_height: Option<f64>,
    /// Grid step for vertical-line contours.
    #[arg(long, global = true)]
    mb_step: Option<f64>,
    /// Half-width cap for exp-substituted quadrature windows.
    #[arg(long, global = true)]
    quad_window: Option<f64>,
    /// Worker threads (results are bit-identical for any count).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON file with the same fields as the flags above.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one function and print its value.
    Eval(EvalArgs),
    /// Run an identity-verification suite; exits 1 on any failure.
    Verify(VerifyArgs),
    /// Emit a CSV table of values over a parameter grid.
    Table(TableArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[command(subcommand)]
    target: EvalTarget,
}

#[derive(Subcommand)]
enum EvalTarget {
    /// Exact Shintani value: q-power and Schur polynomial.
    Padic {
        /// Dominant weight as a JSON integer array, e.g. [2,1,0].
        #[arg(long)]
        lambda: String,
        /// Satake parameters as JSON strings, e.g. ["1/2","3"].
        #[arg(long)]
        alpha: String,
    },
    /// Spherical Whittaker value on GL(n, C).
    SphericalC {
        #[arg(long)]
        n: usize,
        /// nu as a JSON list of numbers or [re, im] pairs.
        #[arg(long)]
        nu: String,
        /// Torus coordinates, JSON list of n-1 positive numbers.
        #[arg(long)]
        a: String,
    },
    /// Minimal-K-type Whittaker value on GL(n, C).
    MinimalC {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nu: String,
        #[arg(long)]
        kappa: u32,
        /// Weight index, JSON list of n nonnegative integers summing to kappa.
        #[arg(long)]
        ell: String,
        #[arg(long)]
        a: String,
    },
    /// GL(3, R) minimal-type coefficients, one per monomial index.
    Gl3r {
        #[arg(long)]
        kappa: u32,
        /// Twist exponent as a number or [re, im] pair.
        #[arg(long)]
        w: String,
        #[arg(long)]
        a1: f64,
        #[arg(long)]
        a2: f64,
    },
    /// Asai L-factor value and structure.
    AsaiL {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nu: String,
        #[arg(long)]
        kappa: u32,
        /// Argument s as a number or [re, im] pair.
        #[arg(long)]
        s: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// gamma | barnes | shintani | lemmas | gl3r | glnc | ishii-stade | asai | engine | all
    suite: String,
    /// Number of random cases (barnes).
    #[arg(long, default_value_t = 20)]
    cases: usize,
}

#[derive(Args)]
struct TableArgs {
    /// spherical-c | minimal-c
    function: String,
    #[arg(long)]
    nu: String,
    #[arg(long, default_value_t = 0)]
    kappa: u32,
    /// Weight index for minimal-c.
    #[arg(long)]
    ell: Option<String>,
    /// Swept axis (1-based) for rank-3 functions.
    #[arg(long, default_value_t = 1)]
    sweep_axis: usize,
    /// Fixed value of the other torus coordinate (rank 3).
    #[arg(long)]
    fixed_a: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    from: f64,
    #[arg(long, default_value_t = 10.0)]
    to: f64,
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Logarithmic spacing.
    #[arg(long)]
    log: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let (kind, code) = classify(&e);
            println!(
                "{}",
                json!({"error": {"kind": kind, "detail": e.to_string()}})
            );
            code
        }
    }
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Param(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Param(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Param(e.0)
    }
}

fn classify(e: &CliError) -> (&'static str, ExitCode) {
    match e {
        CliError::Param(_) => ("schema", ExitCode::from(2)),
        CliError::Core(core) => match core {
            Error::Domain(_)
            | Error::LengthMismatch { .. }
            | Error::RepeatedParameter
            | Error::UnsupportedRank(_) => ("schema", ExitCode::from(2)),
            Error::Unconverged { .. } => ("unconverged", ExitCode::from(3)),
            Error::InfeasibleContour(_) => ("infeasible-contour", ExitCode::from(3)),
            Error::Pole { .. } | Error::PoleOnContour { .. } => ("pole", ExitCode::from(3)),
        },
    }
}

fn apply_config(cli: &Cli) -> Result<(f64, Format), CliError> {
    let mut tolerance = 1e-8;
    let mut format = Format::Json;
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Param(format!("cannot read config {path:?}: {e}")))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Param(format!("bad config JSON: {e}")))?;
        if let Some(t) = v.get("tolerance").and_then(Value::as_f64) {
            tolerance = t;
        }
        if let Some(t) = v.get("mb_height").and_then(Value::as_f64) {
            settings::set_mb_height(t);
        }
        if let Some(t) = v.get("mb_step").and_then(Value::as_f64) {
            settings::set_mb_step(t);
        }
        if let Some(t) = v.get("quad_window").and_then(Value::as_f64) {
            settings::set_quad_window(t);
        }
        if let Some(t) = v.get("threads").and_then(Value::as_u64) {
            settings::set_threads(t as usize);
        }
        if let Some(t) = v.get("output_format").and_then(Value::as_str) {
            format = match t {
                "csv" | "CSV" => Format::Csv,
                _ => Format::Json,
            };
        }
    }
    if let Ok(env_threads) = std::env::var("WHITTAKER_THREADS") {
        if let Ok(n) = env_threads.parse::<usize>() {
            settings::set_threads(n);
        }
    }
    if let Some(n) = cli.threads {
        settings::set_threads(n);
    }
    if let Some(h) = cli.mb_step {
        settings::set_mb_step(h);
    }
    if let Some(t) = cli.mb_height {
        settings::set_mb_height(t);
    }
    if let Some(u) = cli.quad_window {
        settings::set_quad_window(u);
    }
    if let Some(t) = cli.tol {
        tolerance = t;
    }
    if let Some(f) = cli.format {
        format = f;
    }
    Ok((tolerance, format))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let (tol, format) = apply_config(&cli)?;
    match &cli.cmd {
        Cmd::Eval(args) => run_eval(args, tol, format),
        Cmd::Verify(args) => run_verify(args),
        Cmd::Table(args) => run_table(args, tol),
    }
}

fn print_value(value: whittaker_core::Complex, err: f64, echo: Value, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            json!({
                "value": {"re": value.re, "im": value.im},
                "error_estimate": err,
                "params_echo": echo,
            })
        ),
        Format::Csv => {
            println!("value_re,value_im,error_estimate");
            println!("{},{},{}", value.re, value.im, err);
        }
    }
}

fn run_eval(args: &EvalArgs, tol: f64, format: Format) -> Result<ExitCode, CliError> {
    match &args.target {
        EvalTarget::Padic { lambda, alpha } => {
            let entries: Vec<i64> = serde_json::from_str(lambda)
                .map_err(|e| CliError::Param(format!("bad --lambda: {e}")))?;
            let alpha_strs: Vec<String> = serde_json::from_str(alpha)
                .map_err(|e| CliError::Param(format!("bad --alpha: {e}")))?;
            let alphas = alpha_strs
                .iter()
                .map(|s| {
                    parse_big_rational(s)
                        .ok_or_else(|| CliError::Param(format!("bad rational `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let lam = DominantWeight::new(entries.clone())?;
            let sat = SatakeParams::new(alphas)?;
            let v = shintani_value(&lam, &sat)?;
            match format {
                Format::Json => println!(
                    "{}",
                    json!({
                        "q_exponent": v.q_exponent_string(),
                        "value": v.value_string(),
                        "params_echo": {"lambda": entries, "alpha": alpha_strs},
                    })
                ),
                Format::Csv => {
                    println!("q_exponent,value");
                    println!("{},{}", v.q_exponent_string(), v.value_string());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        EvalTarget::SphericalC { n, nu, a } => {
            let nu_vals = parse_complex_list(nu, *n)?;
            let a_vals: Vec<f64> =
                serde_json::from_str(a).map_err(|e| CliError::Param(format!("bad --a: {e}")))?;
            let params = SphericalParamsC::new(nu_vals.clone())?;
            let point = TorusPointC::new(a_vals.clone())?;
            let v = f_spherical(&params, &point, tol)?;
            print_value(
                v,
                tol,
                json!({"n": n, "nu": params::echo_complex_list(&nu_vals), "a": a_vals, "tol": tol}),
                format,
            );
            Ok(ExitCode::SUCCESS)
        }
        EvalTarget::MinimalC {
            n,
            nu,
            kappa,
            ell,
            a,
        } => {
            let nu_vals = parse_complex_list(nu, *n)?;
            let ell_vals: Vec<u32> = serde_json::from_str(ell)
                .map_err(|e| CliError::Param(format!("bad --ell: {e}")))?;
            let a_vals: Vec<f64> =
                serde_json::from_str(a).map_err(|e| CliError::Param(format!("bad --a: {e}")))?;
            let params = MinimalTypeParamsC::new(nu_vals.clone(), *kappa)?;
            let ell = WeightIndexC::new(ell_vals.clone())?;
            let point = TorusPointC::new(a_vals.clone())?;
            let v = whittaker_c_mb(&params, &ell, &point, tol)?;
            print_value(
                v,
                tol,
                json!({
                    "n": n, "nu": params::echo_complex_list(&nu_vals), "kappa": kappa,
                    "ell": ell_vals, "a": a_vals, "tol": tol
                }),
                format,
            );
            Ok(ExitCode::SUCCESS)
        }
        EvalTarget::Gl3r { kappa, w, a1, a2 } => {
            let w_val = parse_complex_scalar(w)?;
            let params = MiyazakiParams::new(*kappa, w_val)?;
            let coeffs = miyazaki_mb(&params, *a1, *a2, tol)?;
            match format {
                Format::Json => {
                    let rows: Vec<Value> = coeffs
                        .iter()
                        .map(|((n1, n2, n3), v)| {
                            json!({"monomial": [n1, n2, n3], "value": {"re": v.re, "im": v.im}})
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "coefficients": rows,
                            "error_estimate": tol,
                            "params_echo": {
                                "kappa": kappa,
                                "w": {"re": w_val.re, "im": w_val.im},
                                "a1": a1, "a2": a2
                            },
                        })
                    );
                }
                Format::Csv => {
                    println!("n1,n2,n3,value_re,value_im");
                    for ((n1, n2, n3), v) in &coeffs {
                        println!("{n1},{n2},{n3},{},{}", v.re, v.im);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        EvalTarget::AsaiL { n, nu, kappa, s } => {
            let nu_vals = parse_complex_list(nu, *n)?;
            let s_val = parse_complex_scalar(s)?;
            let input = AsaiInput::new(*n, nu_vals.clone(), *kappa, s_val)?;
            let l = asai_l_factor(&input);
            let v = l.eval(s_val)?;
            match format {
                Format::Json => {
                    let terms: Vec<Value> = l
                        .gamma_terms
                        .iter()
                        .map(|(kind, arg)| {
                            json!({
                                "kind": match kind {
                                    whittaker_core::mb::GammaKind::R => "r",
                                    whittaker_core::mb::GammaKind::C => "c",
                                    whittaker_core::mb::GammaKind::Plain => "plain",
                                },
                                "constant": {"re": arg.constant.re, "im": arg.constant.im},
                                "slope": arg.slope,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "value": {"re": v.re, "im": v.im},
                            "error_estimate": 0.0,
                            "gamma_terms": terms,
                            "params_echo": {
                                "n": n, "nu": params::echo_complex_list(&nu_vals),
                                "kappa": kappa, "s": {"re": s_val.re, "im": s_val.im}
                            },
                        })
                    );
                }
                Format::Csv => {
                    println!("value_re,value_im");
                    println!("{},{}", v.re, v.im);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let suites: Vec<(&str, Vec<verify::CaseResult>)> = match args.suite.as_str() {
        "gamma" => vec![("gamma", verify::gamma_suite())],
        "barnes" => vec![("barnes", verify::barnes_suite(args.cases))],
        "shintani" => vec![("shintani", verify::shintani_suite())],
        "lemmas" => vec![("lemmas", verify::lemmas_suite())],
        "gl3r" => vec![("gl3r", verify::gl3r_suite())],
        "glnc" => vec![("glnc", verify::glnc_suite())],
        "ishii-stade" => vec![("ishii-stade", verify::ishii_stade_suite())],
        "asai" => vec![("asai", verify::asai_suite())],
        "engine" => vec![("engine", verify::engine_suite())],
        "all" => vec![
            ("gamma", verify::gamma_suite()),
            ("barnes", verify::barnes_suite(args.cases)),
            ("shintani", verify::shintani_suite()),
            ("lemmas", verify::lemmas_suite()),
            ("ishii-stade", verify::ishii_stade_suite()),
            ("glnc", verify::glnc_suite()),
            ("gl3r", verify::gl3r_suite()),
            ("asai", verify::asai_suite()),
            ("engine", verify::engine_suite()),
        ],
        other => {
            return Err(CliError::Param(format!(
                "unknown suite `{other}`; expected gamma|barnes|shintani|lemmas|gl3r|glnc|ishii-stade|asai|engine|all"
            )))
        }
    };
    let mut all_pass = true;
    for (suite, cases) in &suites {
        for case in cases {
            let status = if case.pass { "PASS" } else { "FAIL" };
            println!(
                "{status} [{suite}] {} rel_err={:e} tol={:e}",
                case.name, case.rel_err, case.tol
            );
            all_pass &= case.pass;
        }
    }
    let total: usize = suites.iter().map(|(_, c)| c.len()).sum();
    println!(
        "{}: {total} cases",
        if all_pass { "ALL PASS" } else { "FAILURES" }
    );
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn grid(from: f64, to: f64, steps: usize, log: bool) -> Vec<f64> {
    if steps == 0 {
        return Vec::new();
    }
    if steps == 1 {
        return vec![from];
    }
    (0..steps)
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            if log {
                (from.ln() + t * (to.ln() - from.ln())).exp()
            } else {
                from + t * (to - from)
            }
        })
        .collect()
}

fn sweep_point(
    rank: usize,
    x: f64,
    sweep_axis: usize,
    fixed_a: Option<f64>,
) -> Result<TorusPointC, CliError> {
    if rank == 2 {
        Ok(TorusPointC::new(vec![x])?)
    } else {
        let fixed =
            fixed_a.ok_or_else(|| CliError::Param("--fixed-a required for rank 3".into()))?;
        let coords = if sweep_axis == 1 {
            vec![x, fixed]
        } else {
            vec![fixed, x]
        };
        Ok(TorusPointC::new(coords)?)
    }
}

fn run_table(args: &TableArgs, tol: f64) -> Result<ExitCode, CliError> {
    let points = grid(args.from, args.to, args.steps, args.log);
    match args.function.as_str() {
        "spherical-c" => {
            let nu_vals = parse_complex_list(&args.nu, 0)?;
            let params = SphericalParamsC::new(nu_vals)?;
            println!("a,value_re,value_im");
            for &x in &points {
                let a = sweep_point(params.rank(), x, args.sweep_axis, args.fixed_a)?;
                let v = f_spherical(&params, &a, tol)?;
                println!("{x},{},{}", v.re, v.im);
            }
            Ok(ExitCode::SUCCESS)
        }
        "minimal-c" => {
            let nu_vals = parse_complex_list(&args.nu, 0)?;
            let params = MinimalTypeParamsC::new(nu_vals, args.kappa)?;
            let ell_str = args
                .ell
                .as_ref()
                .ok_or_else(|| CliError::Param("--ell required for minimal-c".into()))?;
            let ell_vals: Vec<u32> = serde_json::from_str(ell_str)
                .map_err(|e| CliError::Param(format!("bad --ell: {e}")))?;
            let ell = WeightIndexC::new(ell_vals)?;
            println!("a,value_re,value_im");
            for &x in &points {
                let a = sweep_point(params.rank(), x, args.sweep_axis, args.fixed_a)?;
                let v = whittaker_c_mb(&params, &ell, &a, tol)?;
                println!("{x},{},{}", v.re, v.im);
            }
            Ok(ExitCode::SUCCESS)
        }
        other => Err(CliError::Param(format!(
            "unknown table function `{other}`; expected spherical-c|minimal-c"
        ))),
    }
}
