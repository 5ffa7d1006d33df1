//! Command-line front end: `ml eval`, `solve scalar`, `solve pde`, `verify`.
//!
//! Exit status: 0 success, 1 numerical failure, 2 invalid input, 3 degenerate
//! condition system, 4 failed verification. Failures print one JSON
//! diagnostic line on stderr.

pub mod config;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::fraccalc::UniformGrid;
use crate::solvers::{
    build_condition_system, cauchy_functionals, residual_report, solve_cauchy, solve_inner, solve_inner_boundary,
    ConditionReport, Family, NonlocalSpec, ResidualReport, ScalarSolution, SolverError, RESIDUAL_WINDOW,
};
use crate::special::{ml, MlQuery};
use crate::spectral::{data_norms, series_norms, solve_pde, stability_ratio, NormKind, SpectralError};

use config::{Mode, RunConfig, ScalarProblem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

/// Structured error for stderr.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub code: String,
    pub message: String,
    pub exit: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
}

impl Diagnostic {
    pub fn config(code: &str, message: impl Into<String>) -> Self {
        Diagnostic { code: code.into(), message: message.into(), exit: EXIT_INVALID, report: None }
    }

    pub fn from_solver(e: &SolverError) -> Self {
        match e {
            SolverError::Invalid { code, message } => Diagnostic::config(code.as_str(), message.clone()),
            SolverError::DegenerateSystem(r) => Diagnostic {
                code: "E_DEGENERATE_SYSTEM".into(),
                message: e.to_string(),
                exit: EXIT_DEGENERATE,
                report: serde_json::to_value(r).ok(),
            },
            other => Diagnostic { code: "E_NUMERICAL".into(), message: other.to_string(), exit: EXIT_NUMERICAL, report: None },
        }
    }

    fn from_spectral(e: &SpectralError) -> Self {
        match e {
            SpectralError::Solver(s) => Diagnostic::from_solver(s),
            SpectralError::Invalid(m) => Diagnostic::config("E_PDE_INPUT", m.clone()),
            SpectralError::DegenerateMode { xi, report } => Diagnostic {
                code: "E_DEGENERATE_MODE".into(),
                message: e.to_string(),
                exit: EXIT_DEGENERATE,
                report: Some(json!({ "xi": xi, "conditions": report })),
            },
            other => Diagnostic { code: "E_NUMERICAL".into(), message: other.to_string(), exit: EXIT_NUMERICAL, report: None },
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Diagnostic {
            code: "E_OUTPUT_IO".into(),
            message: format!("{}: {e}", path.display()),
            exit: EXIT_NUMERICAL,
            report: None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fracwave", version, about = "Fractional wave equation solvers and checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mittag-Leffler evaluation.
    Ml {
        #[command(subcommand)]
        cmd: MlCmd,
    },
    /// Solve a scalar or PDE problem from a JSON config.
    Solve {
        #[command(subcommand)]
        cmd: SolveCmd,
    },
    /// Solve a scalar problem and check residual and conditions.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum MlCmd {
    /// Print E_{alpha,beta}(z) as JSON.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
    },
}

#[derive(Debug, Subcommand)]
enum SolveCmd {
    Scalar(RunArgs),
    Pde(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: `output.dir` in the config, else `<config stem>-out`).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    grid_n: Option<usize>,
}

/// Parses `args` (including the program name), runs, and returns the exit status.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(d) = configure_threads() {
        return report_failure(&d);
    }
    let out = match cli.cmd {
        Command::Ml { cmd: MlCmd::Eval { alpha, beta, z } } => ml_eval(alpha, beta, z),
        Command::Solve { cmd: SolveCmd::Scalar(a) } => solve_scalar_cmd(&a, None, false),
        Command::Solve { cmd: SolveCmd::Pde(a) } => solve_pde_cmd(&a),
        Command::Verify(v) => solve_scalar_cmd(&v.run, v.grid_n, true),
    };
    match out {
        Ok(code) => code,
        Err(d) => report_failure(&d),
    }
}

fn report_failure(d: &Diagnostic) -> i32 {
    eprintln!("{}", serde_json::to_string(d).unwrap_or_else(|_| d.message.clone()));
    d.exit
}

fn configure_threads() -> Result<(), Diagnostic> {
    let Ok(v) = std::env::var("FRACWAVE_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Diagnostic::config("E_THREADS", format!("FRACWAVE_THREADS = {v:?} is not a positive integer")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn ml_eval(alpha: f64, beta: f64, z: f64) -> Result<i32, Diagnostic> {
    let r = ml(MlQuery { alpha, beta, z }).map_err(|e| match e {
        crate::special::SpecialError::Domain(m) => Diagnostic::config("E_ML_DOMAIN", m),
        other => Diagnostic { code: "E_ML_OVERFLOW".into(), message: other.to_string(), exit: EXIT_NUMERICAL, report: None },
    })?;
    let out = json!({
        "alpha": alpha,
        "beta": beta,
        "z": z,
        "value": r.value,
        "method": r.method,
        "est_abs_error": r.est_abs_error,
    });
    println!("{out}");
    Ok(EXIT_OK)
}

fn output_dir(args: &RunArgs, cfg: &RunConfig, base: &Path) -> PathBuf {
    if let Some(d) = &args.out_dir {
        return d.clone();
    }
    if let Some(d) = &cfg.output.dir {
        return base.join(d);
    }
    let stem = args.config.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
    base.join(format!("{stem}-out"))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Diagnostic> {
    fs::create_dir_all(dir).map_err(|e| Diagnostic::io(dir, e))?;
    let p = dir.join(name);
    fs::write(&p, contents).map_err(|e| Diagnostic::io(&p, e))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, v: &T) -> Result<(), Diagnostic> {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    write_file(dir, name, &s)
}

/// 17 significant digits; non-finite values as `NaN`.
fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "NaN".into()
    }
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    target: f64,
    value: f64,
    abs_error: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn new(name: &'static str, target: f64, value: f64, rel_tol: f64) -> Self {
        let abs_error = (value - target).abs();
        let tolerance = rel_tol * target.abs().max(1.0);
        Check { name, target, value, abs_error, tolerance, pass: abs_error <= tolerance }
    }
}

#[derive(Debug, Serialize)]
struct Verification<'a> {
    family: Family,
    residual: &'a ResidualReport,
    checks: Vec<Check>,
    pass: bool,
}

fn solve_scalar_cmd(args: &RunArgs, grid_n: Option<usize>, verify: bool) -> Result<i32, Diagnostic> {
    let (mut cfg, base) = RunConfig::load(&args.config)?;
    cfg.check_mode(if verify { Mode::Verify } else { Mode::SolveScalar })?;
    if let Some(n) = grid_n {
        cfg.numerics.grid_n = n;
    }
    let problem = cfg.problem.scalar(&cfg.numerics, &base)?;
    let dir = output_dir(args, &cfg, &base);

    let report: Option<ConditionReport> = match &problem {
        ScalarProblem::Cauchy(_) => None,
        ScalarProblem::Inner(s) => Some(build_condition_system(&NonlocalSpec::Inner(s.clone())).map_err(|e| Diagnostic::from_solver(&e))?),
        ScalarProblem::InnerBoundary(s) => {
            Some(build_condition_system(&NonlocalSpec::InnerBoundary(s.clone())).map_err(|e| Diagnostic::from_solver(&e))?)
        }
    };
    if let Some(r) = &report {
        write_json(&dir, "conditions.json", r)?;
    }
    let sol = match &problem {
        ScalarProblem::Cauchy(s) => solve_cauchy(s),
        ScalarProblem::Inner(s) => solve_inner(s),
        ScalarProblem::InnerBoundary(s) => solve_inner_boundary(s),
    }
    .map_err(|e| Diagnostic::from_solver(&e))?;

    write_json(&dir, "solution.json", &sol.record())?;
    write_file(&dir, "solution.csv", &scalar_csv(&sol, &problem, cfg.numerics.sample_n)?)?;
    if !verify {
        println!("{}", json!({ "status": "ok", "C1": sol.c1, "C2": sol.c2 }));
        return Ok(EXIT_OK);
    }

    let grid = UniformGrid::new(sol.eq.t_end, cfg.numerics.grid_n).map_err(|e| Diagnostic::config("E_GRID_N", e.to_string()))?;
    let t_min = cfg.numerics.t_min.unwrap_or(RESIDUAL_WINDOW * sol.eq.t_end);
    let residual = residual_report(&sol, grid, t_min).map_err(|e| Diagnostic::from_solver(&e))?;
    let checks = condition_checks(&sol, &problem, &cfg).map_err(|e| Diagnostic::from_solver(&e))?;
    let pass = residual.pass && checks.iter().all(|c| c.pass);
    let v = Verification { family: sol.family, residual: &residual, checks, pass };
    write_json(&dir, "verification.json", &v)?;
    println!(
        "{}",
        json!({ "status": if pass { "pass" } else { "fail" }, "rel_residual": residual.rel_residual, "tolerance": residual.tolerance })
    );
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn condition_checks(sol: &ScalarSolution, p: &ScalarProblem, cfg: &RunConfig) -> Result<Vec<Check>, SolverError> {
    let (beta, gamma) = (p.beta(), p.gamma());
    let tol = cfg.numerics.condition_tol;
    Ok(match p {
        ScalarProblem::Cauchy(s) => {
            let (c1, c2) = cauchy_functionals(sol, beta)?;
            let ft = cfg.numerics.functional_tol;
            vec![Check::new("initial_I_beta", s.c1_hat, c1, ft), Check::new("initial_D_gamma", s.c2_hat, c2, ft)]
        }
        ScalarProblem::Inner(s) => vec![
            Check::new("I_beta_at_a", s.d1_hat, sol.ibeta(beta, s.a)?, tol),
            Check::new("D_gamma_at_a", s.d2_hat, sol.dgamma(gamma, s.a)?, tol),
        ],
        ScalarProblem::InnerBoundary(s) => vec![
            Check::new("I_beta_at_a", s.e1_hat, sol.ibeta(beta, s.a)?, tol),
            Check::new("D_gamma_at_b", s.e2_hat, sol.dgamma(gamma, s.b)?, tol),
        ],
    })
}

fn scalar_csv(sol: &ScalarSolution, p: &ScalarProblem, n: usize) -> Result<String, Diagnostic> {
    let (beta, gamma) = (p.beta(), p.gamma());
    let t_end = sol.eq.t_end;
    let mut s = String::from("t,u,I_beta_u,D_gamma_u\n");
    for j in 0..=n {
        let t = if j == n { t_end } else { t_end * j as f64 / n as f64 };
        let cell = |r: Result<f64, SolverError>| match r {
            Ok(v) => Ok(num(v)),
            Err(SolverError::SingularAtZero) => Ok("NaN".to_string()),
            Err(e) => Err(Diagnostic::from_solver(&e)),
        };
        let row = [cell(Ok(t))?, cell(sol.eval(t))?, cell(sol.ibeta(beta, t))?, cell(sol.dgamma(gamma, t))?];
        s.push_str(&row.join(","));
        s.push('\n');
    }
    Ok(s)
}

fn solve_pde_cmd(args: &RunArgs) -> Result<i32, Diagnostic> {
    let (cfg, base) = RunConfig::load(&args.config)?;
    cfg.check_mode(Mode::SolvePde)?;
    let (problem, sp) = cfg.problem.pde(&cfg.numerics, &base)?;
    let dir = output_dir(args, &cfg, &base);
    let series = match solve_pde(&problem, sp) {
        Ok(s) => s,
        Err(e) => {
            let d = Diagnostic::from_spectral(&e);
            if let Some(r) = &d.report {
                write_json(&dir, "conditions.json", r)?;
            }
            return Err(d);
        }
    };
    write_json(&dir, "series.json", &series.record())?;

    let n = cfg.numerics.sample_n;
    let ts: Vec<f64> = (1..=n).map(|j| if j == n { problem.t_end } else { problem.t_end * j as f64 / n as f64 }).collect();
    let (x0, x1) = series.provider().domain();
    let nx = cfg.numerics.sample_x;
    let xs: Vec<f64> = (0..nx).map(|i| if i == nx - 1 { x1 } else { x0 + (x1 - x0) * i as f64 / (nx - 1) as f64 }).collect();
    let rows = series.sample(&ts, &xs).map_err(|e| Diagnostic::from_spectral(&e))?;
    let mut csv = String::from("t,x,u\n");
    for [t, x, u] in rows {
        csv.push_str(&format!("{},{},{}\n", num(t), num(x), num(u)));
    }
    write_file(&dir, "field.csv", &csv)?;

    let tq = cfg.numerics.time_quad_n;
    let norms = series_norms(&series, problem.t_end, tq).map_err(|e| Diagnostic::from_spectral(&e))?;
    let data = data_norms(&series, problem.t_end, tq).map_err(|e| Diagnostic::from_spectral(&e))?;
    let ratios = [NormKind::U, NormKind::AU, NormKind::DAlphaU]
        .iter()
        .map(|&k| stability_ratio(&norms, &data, k).ok())
        .collect::<Vec<_>>();
    write_json(
        &dir,
        "norms.json",
        &json!({
            "time_quad_n": tq,
            "norms": norms,
            "data": data,
            "stability_ratios": { "u": ratios[0], "a_u": ratios[1], "d_alpha_u": ratios[2] },
        }),
    )?;
    println!("{}", json!({ "status": "ok", "N": series.n_modes(), "tail_indicator": series.tail_indicator() }));
    Ok(EXIT_OK)
}
