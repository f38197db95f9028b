//! Experiment drivers: manufactured examples, convergence ladders, timing
//! tables and their CSV / Markdown output.

mod examples;
mod table;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krylov::SolverConfig;
use crate::schemes::{solve, Method, ProblemSpec, SchemeKind};

pub use examples::{example_exact, example_problem, example_scheme};
pub use table::{
    convergence_markdown, read_convergence_csv, read_timing_csv, timing_markdown, write_convergence_csv,
    write_timing_csv,
};

/// Environment variable bounding the worker threads of [`run_convergence`].
pub const THREADS_ENV: &str = "FRACTIME_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            other => Err(Error::Config(format!("unknown output format '{other}'"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Markdown => "md",
        })
    }
}

/// One rung of a mesh ladder. `exp` names the refined step, `2^-exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshLevel {
    pub exp: u32,
    pub n_time: usize,
    /// Space cells; 0 for the ODE.
    pub m_space: usize,
}

/// How a ladder of exponents maps to `(N, M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderStyle {
    /// `tau = 2^-k`, no space grid (ODE).
    Time,
    /// `h = tau = 2^-k`.
    Uniform,
    /// `h = 2^-k` with a fixed number of time steps.
    FixedTime(usize),
}

impl LadderStyle {
    pub fn level(self, exp: u32) -> MeshLevel {
        let k = 1usize << exp;
        let (n_time, m_space) = match self {
            LadderStyle::Time => (k, 0),
            LadderStyle::Uniform => (k, k),
            LadderStyle::FixedTime(n) => (n, k),
        };
        MeshLevel { exp, n_time, m_space }
    }

    /// Natural ladder style for a scheme.
    pub fn for_scheme(scheme: SchemeKind) -> Self {
        if scheme.is_pde() {
            LadderStyle::Uniform
        } else {
            LadderStyle::Time
        }
    }
}

pub fn ladder(style: LadderStyle, exps: impl IntoIterator<Item = u32>) -> Vec<MeshLevel> {
    exps.into_iter().map(|e| style.level(e)).collect()
}

/// Problem sizes above which the reference solvers are not run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeCaps {
    /// Unknowns for dense elimination and plain CG.
    pub dense_unknowns: usize,
    /// `M N^2` for time marching.
    pub direct_work: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        Self {
            dense_unknowns: 1 << 13,
            direct_work: 1 << 22,
        }
    }
}

impl SizeCaps {
    pub fn allows(&self, method: Method, level: &MeshLevel) -> bool {
        match method {
            Method::Dense | Method::Cg => level.n_time.saturating_sub(1) <= self.dense_unknowns,
            Method::Direct => {
                let m = level.m_space.max(1);
                m.saturating_mul(level.n_time).saturating_mul(level.n_time) <= self.direct_work
            }
            Method::Fast => true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    /// Manufactured problem, 1..4.
    pub example: u8,
    pub gammas: Vec<f64>,
    pub ladder: Vec<MeshLevel>,
    pub methods: Vec<Method>,
    /// `None` picks [`default_config`] per mesh.
    pub cfg: Option<SolverConfig>,
    pub caps: SizeCaps,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl ExperimentPlan {
    pub fn new(example: u8, gammas: Vec<f64>, ladder: Vec<MeshLevel>, methods: Vec<Method>) -> Self {
        Self {
            example,
            gammas,
            ladder,
            methods,
            cfg: None,
            caps: SizeCaps::default(),
            format: OutputFormat::Csv,
            output: None,
        }
    }

    pub fn scheme(&self) -> Result<SchemeKind> {
        example_scheme(self.example)
    }

    pub fn validate(&self) -> Result<()> {
        let scheme = self.scheme()?;
        if self.gammas.is_empty() {
            return Err(Error::Config("plan has no gamma values".into()));
        }
        if self.ladder.is_empty() {
            return Err(Error::Config("plan has an empty mesh ladder".into()));
        }
        if self.ladder.windows(2).any(|w| w[1].exp <= w[0].exp) {
            return Err(Error::Config("mesh ladder must be strictly increasing".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("plan needs at least one method".into()));
        }
        if let Some(m) = self.methods.iter().find(|m| !m.supports(scheme)) {
            return Err(Error::Config(format!("method '{m}' is not available for scheme '{scheme}'")));
        }
        if let Some(cfg) = &self.cfg {
            cfg.validate()?;
        }
        Ok(())
    }

    fn config_for(&self, scheme: SchemeKind, level: &MeshLevel) -> SolverConfig {
        self.cfg.unwrap_or_else(|| default_config(scheme, level.n_time))
    }
}

/// Solver settings used when a plan does not fix its own.
///
/// The diffusion-wave history matrix needs (close to) full-memory GMRES:
/// restarted GMRES(20) stagnates for `gamma >= 1.5`, so the restart length
/// follows the number of time steps.
pub fn default_config(scheme: SchemeKind, n_time: usize) -> SolverConfig {
    let base = SolverConfig::default();
    match scheme {
        SchemeKind::Ode2Sided | SchemeKind::Hyperbolic => base,
        SchemeKind::DiffusionWave => base.with_restart(n_time.max(base.restart)),
        SchemeKind::Diffusion => base.with_restart(50),
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub mesh_exp: u32,
    /// Space step; empty for the ODE.
    pub h: Option<f64>,
    pub tau: f64,
    pub l2_error: f64,
    /// `log2(previous error / this error)`; empty on the first row of a series.
    pub rate: Option<f64>,
    pub iterations: usize,
    pub wall_seconds: f64,
    pub method: Method,
    pub gamma: f64,
    pub scheme: SchemeKind,
}

/// Solves `spec` and measures the error against `spec.exact`.
pub fn run_problem(spec: &ProblemSpec, mesh_exp: u32, method: Method, cfg: &SolverConfig) -> Result<ConvergenceRow> {
    let exact = spec
        .exact
        .clone()
        .ok_or_else(|| Error::Config("problem has no exact solution attached".into()))?;
    let (grid, report) = solve(spec, method, cfg)?;
    Ok(ConvergenceRow {
        mesh_exp,
        h: grid.h,
        tau: grid.tau,
        l2_error: grid.l2_error(&*exact),
        rate: None,
        iterations: report.iterations,
        wall_seconds: report.wall_seconds,
        method,
        gamma: spec.gamma,
        scheme: spec.scheme,
    })
}

/// Runs example `id` on one mesh. `cfg = None` uses [`default_config`].
pub fn run_example(
    id: u8,
    gamma: f64,
    mesh: MeshLevel,
    method: Method,
    cfg: Option<&SolverConfig>,
) -> Result<ConvergenceRow> {
    let spec = example_problem(id, gamma, mesh.n_time, mesh.m_space)?;
    let cfg = cfg.copied().unwrap_or_else(|| default_config(spec.scheme, mesh.n_time));
    run_problem(&spec, mesh.exp, method, &cfg)
}

/// Fills `rate` between consecutive rows of the same `(gamma, method)` series.
pub fn fill_rates(rows: &mut [ConvergenceRow]) {
    for i in 0..rows.len() {
        rows[i].rate = None;
        if i == 0 {
            continue;
        }
        let (prev, cur) = (&rows[i - 1], &rows[i]);
        if prev.gamma == cur.gamma && prev.method == cur.method && prev.mesh_exp < cur.mesh_exp {
            let rate = (prev.l2_error / cur.l2_error).log2();
            rows[i].rate = Some(rate);
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| Error::Config(e.to_string()))
}

/// Runs every `(gamma, method, mesh)` combination of the plan, rows in
/// parallel. Output is grouped by gamma, then method, ordered by mesh, with
/// rates filled in. Rows over the size caps are left out.
pub fn run_convergence(plan: &ExperimentPlan) -> Result<Vec<ConvergenceRow>> {
    plan.validate()?;
    let scheme = plan.scheme()?;
    let jobs: Vec<(f64, Method, MeshLevel)> = plan
        .gammas
        .iter()
        .flat_map(|&g| {
            plan.methods
                .iter()
                .flat_map(move |&m| plan.ladder.iter().map(move |&l| (g, m, l)))
        })
        .filter(|(_, m, l)| plan.caps.allows(*m, l))
        .collect();
    let pool = thread_pool()?;
    let mut rows = pool.install(|| {
        jobs.par_iter()
            .map(|&(g, m, l)| {
                let cfg = plan.config_for(scheme, &l);
                run_example(plan.example, g, l, m, Some(&cfg))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    fill_rates(&mut rows);
    Ok(rows)
}

/// One row of a timing table; `None` timing fields mean the run was skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub mesh_exp: u32,
    pub n_time: usize,
    pub m_space: usize,
    pub method: Method,
    pub gamma: f64,
    pub wall_seconds: Option<f64>,
    pub iterations: Option<usize>,
}

impl TimingRow {
    pub fn skipped(&self) -> bool {
        self.wall_seconds.is_none()
    }
}

/// Sequential timing: one discarded warm-up, then the median of three runs.
pub fn run_timing(plan: &ExperimentPlan) -> Result<Vec<TimingRow>> {
    plan.validate()?;
    let scheme = plan.scheme()?;
    let mut out = Vec::new();
    for &gamma in &plan.gammas {
        for &method in &plan.methods {
            for level in &plan.ladder {
                let mut row = TimingRow {
                    mesh_exp: level.exp,
                    n_time: level.n_time,
                    m_space: level.m_space,
                    method,
                    gamma,
                    wall_seconds: None,
                    iterations: None,
                };
                if plan.caps.allows(method, level) {
                    let spec = example_problem(plan.example, gamma, level.n_time, level.m_space)?;
                    let cfg = plan.config_for(scheme, level);
                    let (_, warm) = solve(&spec, method, &cfg)?;
                    let mut times = Vec::with_capacity(3);
                    for _ in 0..3 {
                        let start = Instant::now();
                        solve(&spec, method, &cfg)?;
                        times.push(start.elapsed().as_secs_f64());
                    }
                    times.sort_by(f64::total_cmp);
                    row.wall_seconds = Some(times[1]);
                    row.iterations = Some(warm.iterations);
                }
                out.push(row);
            }
        }
    }
    Ok(out)
}
