//! The `sumkernel` command line: `solve`, `convergence`, `verify` and `example`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 a series did not converge, 4 other runtime failure.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::dsl::{load_problem, Field, MethodChoice, ProblemSpec};
use crate::error::Error;
use crate::grid::Grid;
use crate::resolvent::{convergence_bounds, solve_neumann, Resummation, SeriesConfig, SolveReport, Timings};
use crate::scalar::Scalar;
use crate::star::GeneralizedKernel;
use crate::validation::{
    default_verify_problem, heun_compare, verify_suite, CheckStatus, ConstantKernelOracle, HeunComparison, HeunProblem,
    VerifyReport,
};

#[derive(Debug, Parser)]
#[command(name = "sumkernel", version, about = "Volterra equations with sum kernels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem file and write the solution and series report.
    Solve(RunArgs),
    /// Compare partial sums of both series with their limits and the n!-bounds.
    Convergence(ConvergenceArgs),
    /// Run the invariant suite on a problem file, or on constant kernels.
    Verify(VerifyArgs),
    /// Run a worked example against its oracle: `constant` or `heun`.
    Example(ExampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "csv,json")]
    pub format: Vec<Format>,
}

impl Output {
    fn wants(&self, f: Format) -> bool {
        self.format.contains(&f)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: Output,
    /// Print wall-clock timings to stderr and include them in report.json.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: Output,
    /// Number of orders to tabulate; defaults to `solver.orders`.
    #[arg(long)]
    pub orders: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Problem file; the default suite uses constants a=1, b=2 on [0, 1].
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    pub name: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerifyFailed,
    NotConverged,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(Error),
    #[error(transparent)]
    Runtime(Error),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DeltaResidue { .. } => CliError::Runtime(e),
            e => CliError::Config(e),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn exit_code(r: &CliResult<Outcome>) -> u8 {
    match r {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::VerifyFailed) => 1,
        Ok(Outcome::NotConverged) => 3,
        Err(CliError::Config(_)) => 2,
        Err(CliError::Runtime(_) | CliError::Output { .. }) => 4,
    }
}

pub fn run(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Convergence(a) => cmd_convergence(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Example(a) => cmd_example(&a),
    }
}

fn write_file(dir: &Path, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> CliResult<()> {
    let path = dir.join(name);
    let err = |source| CliError::Output { path: path.display().to_string(), source };
    let mut w = BufWriter::new(File::create(&path).map_err(err)?);
    body(&mut w).and_then(|_| w.flush()).map_err(err)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("plain data");
    write_file(dir, name, |w| writeln!(w, "{text}"))
}

fn prepare(out: &Output) -> CliResult<()> {
    fs::create_dir_all(&out.out).map_err(|source| CliError::Output { path: out.out.display().to_string(), source })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSummary {
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
}

impl From<Grid> for GridSummary {
    fn from(g: Grid) -> Self {
        Self { t_min: g.t_min(), t_max: g.t_max(), n: g.n_points() }
    }
}

#[derive(Debug, Serialize)]
struct RunReport {
    field: Field,
    grid: GridSummary,
    method: MethodChoice,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    resummed: Option<SolveReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    neumann: Option<SolveReport>,
}

pub fn cmd_solve(args: &RunArgs) -> CliResult<Outcome> {
    let spec = load_problem(&args.input)?;
    match spec.field {
        Field::Real => solve_typed::<f64>(&spec, args),
        Field::Complex => solve_typed::<Complex64>(&spec, args),
    }
}

fn timed(setup: f64, start: Instant, enabled: bool, label: &str) -> Option<Timings> {
    let t = Timings { setup_seconds: setup, series_seconds: start.elapsed().as_secs_f64() };
    if enabled {
        eprintln!("{label}: setup {:.3} s, series {:.3} s", t.setup_seconds, t.series_seconds);
    }
    enabled.then_some(t)
}

fn solve_typed<S: Scalar>(spec: &ProblemSpec, args: &RunArgs) -> CliResult<Outcome> {
    let problem = spec.build::<S>()?;
    let cfg = spec.solver.config();
    let orders = spec.solver.orders;
    let method = spec.solver.method;

    let mut resummed = None;
    if matches!(method, MethodChoice::Resummed | MethodChoice::Both) {
        let start = Instant::now();
        let res = Resummation::new(&problem.sum_kernel, spec.solver.order.as_deref(), &cfg)?;
        let setup = start.elapsed().as_secs_f64();
        let series = Instant::now();
        let (f, mut report) = res.solve(&problem.g, orders, &cfg)?;
        report.timings = timed(setup, series, args.timings, "resummed");
        resummed = Some((f, report));
    }
    let mut neumann = None;
    if matches!(method, MethodChoice::Neumann | MethodChoice::Both) {
        let series = Instant::now();
        let (f, mut report) = solve_neumann(&problem.sum_kernel, &problem.g, orders, &cfg)?;
        report.timings = timed(0.0, series, args.timings, "neumann");
        neumann = Some((f, report));
    }

    let out = &args.output;
    prepare(out)?;
    let stride = spec.output.stride;
    if out.wants(Format::Csv) {
        let primary = resummed.as_ref().or(neumann.as_ref()).expect("at least one method ran");
        write_file(&out.out, "solution.csv", |w| primary.0.write_csv(w, stride))?;
        if let (Some(_), Some((f, _))) = (&resummed, &neumann) {
            write_file(&out.out, "solution_neumann.csv", |w| f.write_csv(w, stride))?;
        }
        for (name, run) in [("orders_resummed.csv", &resummed), ("orders_neumann.csv", &neumann)] {
            if let Some((_, report)) = run {
                write_file(&out.out, name, |w| report.write_csv(w))?;
            }
        }
    }
    let converged = [&resummed, &neumann].iter().all(|r| r.as_ref().is_none_or(|(_, rep)| rep.converged));
    if out.wants(Format::Json) {
        let report = RunReport {
            field: spec.field,
            grid: spec.grid.into(),
            method,
            converged,
            resummed: resummed.map(|r| r.1),
            neumann: neumann.map(|r| r.1),
        };
        write_json(&out.out, "report.json", &report)?;
    }
    Ok(if converged { Outcome::Success } else { Outcome::NotConverged })
}

pub fn cmd_convergence(args: &ConvergenceArgs) -> CliResult<Outcome> {
    let spec = load_problem(&args.input)?;
    match spec.field {
        Field::Real => convergence_typed::<f64>(&spec, args),
        Field::Complex => convergence_typed::<Complex64>(&spec, args),
    }
}

fn convergence_typed<S: Scalar>(spec: &ProblemSpec, args: &ConvergenceArgs) -> CliResult<Outcome> {
    let problem = spec.build::<S>()?;
    let n_orders = args.orders.unwrap_or(spec.solver.orders);
    let analysis = convergence_bounds(
        &problem.sum_kernel,
        &problem.g,
        n_orders,
        &spec.solver.config(),
        spec.solver.order.as_deref(),
    )?;
    let out = &args.output;
    prepare(out)?;
    if out.wants(Format::Csv) {
        write_file(&out.out, "convergence.csv", |w| analysis.write_csv(w))?;
    }
    if out.wants(Format::Json) {
        write_json(&out.out, "convergence.json", &analysis)?;
    }
    let converged = analysis.neumann.converged && analysis.resummed.converged;
    Ok(if converged { Outcome::Success } else { Outcome::NotConverged })
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<Outcome> {
    let report = match &args.input {
        None => {
            let (sk, g) = default_verify_problem();
            verify_suite(&sk, &g, &SeriesConfig::default())?
        }
        Some(path) => {
            let spec = load_problem(path)?;
            let cfg = spec.solver.config();
            match spec.field {
                Field::Real => {
                    let p = spec.build::<f64>()?;
                    verify_suite(&p.sum_kernel, &p.g, &cfg)?
                }
                Field::Complex => {
                    let p = spec.build::<Complex64>()?;
                    verify_suite(&p.sum_kernel, &p.g, &cfg)?
                }
            }
        }
    };
    let out = &args.output;
    prepare(out)?;
    if out.wants(Format::Json) {
        write_json(&out.out, "verify.json", &report)?;
    }
    if out.wants(Format::Csv) {
        write_file(&out.out, "verify.csv", |w| write_verify_csv(&report, w))?;
    }
    Ok(if report.passed { Outcome::Success } else { Outcome::VerifyFailed })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |x| format!("{x:.16e}"))
}

fn write_verify_csv<W: Write>(r: &VerifyReport, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "name,status,measured,threshold,slack")?;
    for c in &r.checks {
        let status = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "n/a",
        };
        writeln!(w, "{},{status},{},{},{}", c.name, opt(c.measured), opt(c.threshold), opt(c.slack))?;
    }
    Ok(())
}

pub const EXAMPLES: [&str; 2] = ["constant", "heun"];

pub fn cmd_example(args: &ExampleArgs) -> CliResult<Outcome> {
    match args.name.as_str() {
        "constant" => {
            let summary = constant_example(Grid::new(0.0, 1.0, 1601)?, 1.0, 2.0)?;
            prepare(&args.output)?;
            if args.output.wants(Format::Csv) {
                write_file(&args.output.out, "constant_comparison.csv", |w| summary.write_csv(w))?;
            }
            if args.output.wants(Format::Json) {
                write_json(&args.output.out, "constant_summary.json", &summary)?;
            }
            Ok(if summary.report.converged { Outcome::Success } else { Outcome::NotConverged })
        }
        "heun" => {
            let cmp = heun_compare(&HeunProblem::desk(), 60, &SeriesConfig::default(), 20_000)?;
            prepare(&args.output)?;
            if args.output.wants(Format::Csv) {
                write_file(&args.output.out, "heun_comparison.csv", |w| write_heun_csv(&cmp, w))?;
            }
            if args.output.wants(Format::Json) {
                write_json(&args.output.out, "heun_summary.json", &cmp)?;
            }
            Ok(if cmp.report.converged { Outcome::Success } else { Outcome::NotConverged })
        }
        other => Err(CliError::Config(Error::Invalid(format!(
            "unknown example `{other}` (known: {})",
            EXAMPLES.join(", ")
        )))),
    }
}

/// Constant-kernel solver output against the closed forms along `t = t_min`.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantExample {
    pub a: f64,
    pub b: f64,
    pub grid: GridSummary,
    /// Sup-norm relative deviations of order 0, order 1 and the converged solution.
    pub rel_dev_order0: f64,
    pub rel_dev_order1: f64,
    pub rel_dev_converged: f64,
    pub rel_dev_t: f64,
    pub report: SolveReport,
    #[serde(skip)]
    pub rows: Vec<[f64; 9]>,
}

fn rel_dev(col: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for (solver, oracle) in col {
        num = num.max((solver - oracle).abs());
        den = den.max(oracle.abs());
    }
    num / den
}

pub fn constant_example(grid: Grid, a: f64, b: f64) -> crate::error::Result<ConstantExample> {
    let oracle = ConstantKernelOracle::new(a, b);
    let sk = oracle.sum_kernel(grid)?;
    let cfg = SeriesConfig::default();
    let res = Resummation::new(&sk, None, &cfg)?;
    let mut partial: Vec<Vec<f64>> = Vec::new();
    let (f, report) = res.solve_with(&GeneralizedKernel::identity(grid), usize::MAX, &cfg, |n, f| {
        if n < 2 {
            partial.push(f.smooth().column(0));
        }
    })?;
    let converged = f.smooth().column(0);
    let t = res.t().smooth().column(0);
    let order1 = partial.get(1).cloned().unwrap_or_else(|| converged.clone());
    let rows: Vec<[f64; 9]> = (0..grid.n_points())
        .map(|i| {
            let d = grid.node(i) - grid.t_min();
            [d, partial[0][i], oracle.f0(d), order1[i], oracle.f1(d), converged[i], oracle.exact(d), t[i], oracle.t(d)]
        })
        .collect();
    let col = |s: usize, o: usize| rel_dev(rows.iter().map(|r| (r[s], r[o])));
    Ok(ConstantExample {
        a,
        b,
        grid: grid.into(),
        rel_dev_order0: col(1, 2),
        rel_dev_order1: col(3, 4),
        rel_dev_converged: col(5, 6),
        rel_dev_t: col(7, 8),
        report,
        rows,
    })
}

impl ConstantExample {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "delta,f0_solver,f0_oracle,f1_solver,f1_oracle,f_solver,f_oracle,t_solver,t_oracle")?;
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn write_heun_csv<W: Write>(c: &HeunComparison, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "t,a_volterra_re,a_volterra_im,a_rk4_re,a_rk4_im,abs_error")?;
    for (t, a, r) in &c.samples {
        writeln!(w, "{t:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", a.re, a.im, r.re, r.im, (a - r).norm())?;
    }
    Ok(())
}
