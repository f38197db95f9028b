use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fractime_core::harness::{
    self, convergence_markdown, example_problem, ladder, run_convergence, run_timing,
    timing_markdown, write_convergence_csv, write_timing_csv, ConvergenceRow, ExperimentPlan, LadderStyle,
    OutputFormat, SizeCaps,
};
use fractime_core::weights::{g_weights, m_weights};
use fractime_core::{Method, SchemeKind, SolutionGrid, SolverConfig};

#[derive(Parser)]
#[command(name = "fractime", version, about = "Fast solvers for time-fractional differential equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the manufactured problem of one scheme on one mesh.
    Solve(SolveArgs),
    /// Run a convergence study over a ladder of meshes.
    Convergence(LadderArgs),
    /// Time solvers over a ladder of meshes (warm-up plus median of three).
    Bench(LadderArgs),
    /// Print a weight sequence as CSV.
    Weights(WeightsArgs),
}

#[derive(Args)]
struct SolverArgs {
    /// Relative residual tolerance for CG / GMRES.
    #[arg(long)]
    tol: Option<f64>,
    /// GMRES restart length.
    #[arg(long)]
    restart: Option<usize>,
    /// Krylov iteration cap.
    #[arg(long)]
    max_iter: Option<usize>,
}

impl SolverArgs {
    /// Overrides on top of `base`; `None` when nothing was given.
    fn apply(&self, base: SolverConfig) -> Result<Option<SolverConfig>> {
        if self.tol.is_none() && self.restart.is_none() && self.max_iter.is_none() {
            return Ok(None);
        }
        let cfg = SolverConfig::new(
            self.tol.unwrap_or(base.tol),
            self.max_iter.unwrap_or(base.max_iter),
            self.restart.unwrap_or(base.restart),
        )?;
        Ok(Some(cfg))
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: OutputFormat,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_parser = parse_scheme)]
    scheme: SchemeKind,
    #[arg(long)]
    gamma: f64,
    /// Number of time steps.
    #[arg(long)]
    n: usize,
    /// Number of space cells (PDE schemes).
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value = "fast", value_parser = parse_method)]
    method: Method,
    /// Also write the discrete solution as CSV (`i,n,x,t,u`).
    #[arg(long)]
    solution: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LadderArgs {
    /// Manufactured example 1..4 (ODE, hyperbolic, diffusion-wave, diffusion).
    #[arg(long)]
    example: u8,
    /// One or more fractional orders, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    gamma: Vec<f64>,
    /// Mesh exponents `A..B` (inclusive), giving steps 2^-A .. 2^-B.
    #[arg(long, value_parser = parse_levels)]
    levels: Levels,
    /// Keep the number of time steps fixed and refine only in space.
    #[arg(long)]
    fixed_n: Option<usize>,
    /// Methods to compare, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    methods: Vec<Method>,
    /// Largest system solved by dense elimination or plain CG.
    #[arg(long)]
    dense_cap: Option<usize>,
    /// Largest M*N^2 work for time marching.
    #[arg(long)]
    direct_cap: Option<usize>,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy)]
struct Levels(u32, u32);

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    G,
    M,
}

#[derive(Args)]
struct WeightsArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    count: usize,
}

fn parse_scheme(s: &str) -> Result<SchemeKind, String> {
    s.parse().map_err(|e: fractime_core::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: fractime_core::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: fractime_core::Error| e.to_string())
}

fn parse_levels(s: &str) -> Result<Levels, String> {
    let bad = || format!("expected A..B with A <= B < 31, got '{s}'");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a > b || b > 30 {
        return Err(bad());
    }
    Ok(Levels(a, b))
}

fn example_for(scheme: SchemeKind) -> u8 {
    match scheme {
        SchemeKind::Ode2Sided => 1,
        SchemeKind::Hyperbolic => 2,
        SchemeKind::DiffusionWave => 3,
        SchemeKind::Diffusion => 4,
    }
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_rows(rows: &[ConvergenceRow], output: &OutputArgs) -> Result<()> {
    let mut w = sink(&output.out)?;
    match output.format {
        OutputFormat::Csv => write_convergence_csv(rows, &mut w)?,
        OutputFormat::Markdown => w.write_all(convergence_markdown(rows).as_bytes())?,
    }
    w.flush()?;
    Ok(())
}

fn write_solution(grid: &SolutionGrid, path: &PathBuf) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
    writeln!(w, "i,n,x,t,u")?;
    let h = grid.h.unwrap_or(0.0);
    for i in 1..=grid.nodes() {
        for n in 1..=grid.levels() {
            let x = i as f64 * h;
            writeln!(w, "{i},{n},{x},{},{}", n as f64 * grid.tau, grid.value(i, n))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn solve_cmd(args: SolveArgs) -> Result<()> {
    let m = if args.scheme.is_pde() { args.m } else { 0 };
    let spec = example_problem(example_for(args.scheme), args.gamma, args.n, m)?;
    if !args.method.supports(args.scheme) {
        bail!("method '{}' is not available for scheme '{}'", args.method, args.scheme);
    }
    let base = harness::default_config(args.scheme, args.n);
    let cfg = args.solver.apply(base)?.unwrap_or(base);
    let (grid, report) = fractime_core::schemes::solve(&spec, args.method, &cfg)?;
    if let Some(path) = &args.solution {
        write_solution(&grid, path)?;
    }
    let exact = spec.exact.clone().context("example has no exact solution")?;
    let row = ConvergenceRow {
        mesh_exp: args.n.max(m).ilog2(),
        h: grid.h,
        tau: grid.tau,
        l2_error: grid.l2_error(&*exact),
        rate: None,
        iterations: report.iterations,
        wall_seconds: report.wall_seconds,
        method: args.method,
        gamma: args.gamma,
        scheme: args.scheme,
    };
    emit_rows(&[row], &args.output)
}

fn plan_from(args: &LadderArgs) -> Result<ExperimentPlan> {
    let scheme = harness::example_scheme(args.example)?;
    let style = match args.fixed_n {
        Some(n) if scheme.is_pde() => LadderStyle::FixedTime(n),
        Some(_) => bail!("--fixed-n only applies to the PDE examples"),
        None => LadderStyle::for_scheme(scheme),
    };
    let methods = if args.methods.is_empty() { vec![Method::Fast] } else { args.methods.clone() };
    let mut plan = ExperimentPlan::new(args.example, args.gamma.clone(), ladder(style, args.levels.0..=args.levels.1), methods);
    plan.cfg = args.solver.apply(harness::default_config(scheme, 1 << args.levels.1))?;
    let defaults = SizeCaps::default();
    plan.caps = SizeCaps {
        dense_unknowns: args.dense_cap.unwrap_or(defaults.dense_unknowns),
        direct_work: args.direct_cap.unwrap_or(defaults.direct_work),
    };
    plan.format = args.output.format;
    plan.output = args.output.out.clone();
    plan.validate()?;
    Ok(plan)
}

fn convergence_cmd(args: LadderArgs) -> Result<()> {
    let plan = plan_from(&args)?;
    let rows = run_convergence(&plan)?;
    emit_rows(&rows, &args.output)
}

fn bench_cmd(args: LadderArgs) -> Result<()> {
    let plan = plan_from(&args)?;
    let rows = run_timing(&plan)?;
    let mut w = sink(&args.output.out)?;
    match args.output.format {
        OutputFormat::Csv => write_timing_csv(&rows, &mut w)?,
        OutputFormat::Markdown => w.write_all(timing_markdown(&rows).as_bytes())?,
    }
    w.flush()?;
    Ok(())
}

fn weights_cmd(args: WeightsArgs) -> Result<()> {
    let seq = match args.kind {
        Kind::G => g_weights(args.gamma, args.count)?,
        Kind::M => m_weights(args.gamma, args.count)?,
    };
    let mut w = io::stdout().lock();
    writeln!(w, "k,value")?;
    for (k, v) in seq.values().iter().enumerate() {
        writeln!(w, "{k},{v}")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(a) => solve_cmd(a),
        Command::Convergence(a) => convergence_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Weights(a) => weights_cmd(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fractime: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
