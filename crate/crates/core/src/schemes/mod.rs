//! The four finite-difference discretizations and their solvers.
//!
//! | kind            | equation                                  | fast path                         |
//! |-----------------|-------------------------------------------|-----------------------------------|
//! | `Ode2Sided`     | left + right Caputo + u = f, `0<g<1`      | CG on a symmetric Toeplitz system |
//! | `Hyperbolic`    | Caputo + u_x = f, `0<g<1`                 | space-ordered GMRES, Toeplitz     |
//! | `DiffusionWave` | Caputo + u_x = f, `1<g<2`                 | space-ordered GMRES, Toeplitz     |
//! | `Diffusion`     | Caputo = u_xx + f, `0<g<1`                | GMRES on block-tridiagonal system |
//!
//! Every scheme also has a reference path (dense LU for the ODE, time
//! marching for the PDEs) so that the fast path can be checked against it.

mod caputo;
mod diffusion;
mod hyperbolic;
mod ode;
mod wave;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma as gamma_fn;

pub use caputo::{caputo_left_apply, caputo_right_apply};
pub use diffusion::{assemble_scheme4, solve_scheme4};
pub use hyperbolic::{assemble_scheme2_reordered, solve_scheme2};
pub use ode::{assemble_scheme1, solve_scheme1};
pub use wave::{assemble_scheme3_reordered, solve_scheme3};

use crate::error::{Error, Result};
use crate::krylov::SolverConfig;

/// Function of `(x, t)`.
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Function of `x`.
pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    /// Two-sided fractional ODE on `(0, T)` with homogeneous end values.
    Ode2Sided,
    /// Fractional transport with `0 < gamma < 1`, inflow boundary at `x = 0`.
    Hyperbolic,
    /// Fractional transport with `1 < gamma < 2` (diffusion-wave order).
    #[serde(rename = "wave", alias = "diffusionwave")]
    DiffusionWave,
    /// Time-fractional diffusion with homogeneous Dirichlet boundaries.
    Diffusion,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Ode2Sided => "ode2sided",
            SchemeKind::Hyperbolic => "hyperbolic",
            SchemeKind::DiffusionWave => "wave",
            SchemeKind::Diffusion => "diffusion",
        }
    }

    pub fn gamma_interval(self) -> (f64, f64, &'static str) {
        match self {
            SchemeKind::DiffusionWave => (1.0, 2.0, "(1, 2)"),
            _ => (0.0, 1.0, "(0, 1)"),
        }
    }

    pub fn is_pde(self) -> bool {
        self != SchemeKind::Ode2Sided
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ode2sided" | "ode" => Ok(SchemeKind::Ode2Sided),
            "hyperbolic" => Ok(SchemeKind::Hyperbolic),
            "wave" | "diffusionwave" | "diffusion-wave" => Ok(SchemeKind::DiffusionWave),
            "diffusion" => Ok(SchemeKind::Diffusion),
            other => Err(Error::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

/// How a discretized problem is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Assemble the full matrix and use Gaussian elimination (ODE only).
    Dense,
    /// Conjugate gradients with a direct `O(n^2)` matrix-vector product (ODE only).
    Cg,
    /// Time marching in the natural time order (PDEs only).
    Direct,
    /// Structured Toeplitz operators with FFT products inside CG or GMRES.
    Fast,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dense => "dense",
            Method::Cg => "cg",
            Method::Direct => "direct",
            Method::Fast => "fast",
        }
    }

    pub fn supports(self, scheme: SchemeKind) -> bool {
        match self {
            Method::Dense | Method::Cg => !scheme.is_pde(),
            Method::Direct => scheme.is_pde(),
            Method::Fast => true,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dense" | "gauss" => Ok(Method::Dense),
            "cg" => Ok(Method::Cg),
            "direct" => Ok(Method::Direct),
            "fast" | "fcg" | "fgmres" => Ok(Method::Fast),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

/// A fully specified discrete problem.
///
/// Boundary values are homogeneous. For the ODE the `x` argument of the
/// forcing is unused and passed as `0`.
#[derive(Clone)]
pub struct ProblemSpec {
    pub scheme: SchemeKind,
    pub gamma: f64,
    /// Number of time steps; `tau = t_end / n_time`.
    pub n_time: usize,
    /// Number of space cells; `h = length / m_space`. Unused by the ODE.
    pub m_space: usize,
    pub t_end: f64,
    pub length: f64,
    pub forcing: SpaceTimeFn,
    pub initial_u0: SpaceFn,
    /// Initial velocity `u_t(x, 0)`; only read by the diffusion-wave scheme.
    pub initial_phi: SpaceFn,
    pub exact: Option<SpaceTimeFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("scheme", &self.scheme)
            .field("gamma", &self.gamma)
            .field("n_time", &self.n_time)
            .field("m_space", &self.m_space)
            .field("t_end", &self.t_end)
            .field("length", &self.length)
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// A problem on the unit domain with zero forcing and zero initial data.
    pub fn new(scheme: SchemeKind, gamma: f64, n_time: usize, m_space: usize) -> Self {
        Self {
            scheme,
            gamma,
            n_time,
            m_space,
            t_end: 1.0,
            length: 1.0,
            forcing: Arc::new(|_, _| 0.0),
            initial_u0: Arc::new(|_| 0.0),
            initial_phi: Arc::new(|_| 0.0),
            exact: None,
        }
    }

    pub fn with_forcing(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.forcing = Arc::new(f);
        self
    }

    pub fn with_initial(mut self, u0: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.initial_u0 = Arc::new(u0);
        self
    }

    pub fn with_velocity(mut self, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.initial_phi = Arc::new(phi);
        self
    }

    pub fn with_exact(mut self, u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(u));
        self
    }

    pub fn with_domain(mut self, t_end: f64, length: f64) -> Self {
        self.t_end = t_end;
        self.length = length;
        self
    }

    pub fn tau(&self) -> f64 {
        self.t_end / self.n_time as f64
    }

    pub fn h(&self) -> f64 {
        self.length / self.m_space as f64
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi, interval) = self.scheme.gamma_interval();
        if !(self.gamma > lo && self.gamma < hi) {
            return Err(Error::Domain {
                name: "gamma",
                value: self.gamma,
                interval,
            });
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.scheme.is_pde() {
            if self.n_time < 1 {
                return Err(Error::Config("need at least one time step".into()));
            }
            if self.m_space < 2 {
                return Err(Error::Config(format!(
                    "need at least 2 space cells, got {}",
                    self.m_space
                )));
            }
            if !(self.length > 0.0 && self.length.is_finite()) {
                return Err(Error::Config(format!(
                    "length must be positive, got {}",
                    self.length
                )));
            }
        } else if self.n_time < 2 {
            return Err(Error::Config(format!(
                "the two-sided ODE needs at least 2 time steps, got {}",
                self.n_time
            )));
        }
        Ok(())
    }

    fn expect(&self, kind: SchemeKind) -> Result<()> {
        if self.scheme != kind {
            return Err(Error::Config(format!(
                "problem is '{}' but this solver handles '{}'",
                self.scheme, kind
            )));
        }
        self.validate()
    }
}

/// Scaling constants recomputed from `tau` and `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConstants {
    /// `tau^-gamma / Gamma(2 - gamma)`.
    pub mu: f64,
    /// The scheme's history coefficient: `mu` for the ODE and diffusion
    /// schemes, `mu / 2` for the hyperbolic scheme and
    /// `tau^-gamma / Gamma(3 - gamma)` for the diffusion-wave scheme.
    pub c: f64,
}

impl SchemeConstants {
    pub fn new(scheme: SchemeKind, gamma: f64, tau: f64) -> Self {
        let scale = tau.powf(-gamma);
        let mu = scale / gamma_fn(2.0 - gamma);
        let c = match scheme {
            SchemeKind::Ode2Sided | SchemeKind::Diffusion => mu,
            SchemeKind::Hyperbolic => scale / (2.0 * gamma_fn(2.0 - gamma)),
            SchemeKind::DiffusionWave => scale / gamma_fn(3.0 - gamma),
        };
        Self { mu, c }
    }

    pub fn for_spec(spec: &ProblemSpec) -> Self {
        Self::new(spec.scheme, spec.gamma, spec.tau())
    }
}

/// Discrete solution. Boundary values are zero and never stored.
///
/// For the ODE the grid holds `u_1..u_{N-1}`. For the PDEs it holds `U_i^n`
/// for `i = 1..M-1`, `n = 1..N`, stored node by node (all time levels of
/// node 1, then node 2, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionGrid {
    pub scheme: SchemeKind,
    pub tau: f64,
    /// Space step; `None` for the ODE.
    pub h: Option<f64>,
    nodes: usize,
    levels: usize,
    values: Vec<f64>,
}

impl SolutionGrid {
    pub(crate) fn ode(tau: f64, values: Vec<f64>) -> Self {
        Self {
            scheme: SchemeKind::Ode2Sided,
            tau,
            h: None,
            nodes: 1,
            levels: values.len(),
            values,
        }
    }

    pub(crate) fn pde(scheme: SchemeKind, tau: f64, h: f64, nodes: usize, levels: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), nodes * levels);
        Self {
            scheme,
            tau,
            h: Some(h),
            nodes,
            levels,
            values,
        }
    }

    /// Interior spatial nodes (1 for the ODE).
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Stored time levels.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `U_i^n` with 1-based `i` and `n`; boundary and initial indices are not stored.
    pub fn value(&self, i: usize, n: usize) -> f64 {
        assert!(i >= 1 && i <= self.nodes && n >= 1 && n <= self.levels);
        self.values[(i - 1) * self.levels + (n - 1)]
    }

    /// Time series at interior node `i` (1-based).
    pub fn node_series(&self, i: usize) -> &[f64] {
        &self.values[(i - 1) * self.levels..i * self.levels]
    }

    /// `U_1^N, ..., U_{M-1}^N`; for the ODE, all stored values.
    pub fn final_slice(&self) -> Vec<f64> {
        if self.h.is_none() {
            return self.values.clone();
        }
        (1..=self.nodes).map(|i| self.value(i, self.levels)).collect()
    }

    pub fn max_abs_diff(&self, other: &SolutionGrid) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "grids have different shapes");
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete L2 error against `exact(x, t)`.
    ///
    /// ODE: `sqrt(sum_n tau e_n^2)` over the interior time nodes. PDEs: the
    /// final-time spatial norm `sqrt(sum_i h (e_i^N)^2)`.
    pub fn l2_error(&self, exact: &dyn Fn(f64, f64) -> f64) -> f64 {
        match self.h {
            None => {
                let tau = self.tau;
                let s: f64 = self
                    .values
                    .iter()
                    .enumerate()
                    .map(|(k, u)| {
                        let t = (k + 1) as f64 * tau;
                        (u - exact(0.0, t)).powi(2)
                    })
                    .sum();
                (tau * s).sqrt()
            }
            Some(h) => {
                let t_end = self.levels as f64 * self.tau;
                let s: f64 = (1..=self.nodes)
                    .map(|i| (self.value(i, self.levels) - exact(i as f64 * h, t_end)).powi(2))
                    .sum();
                (h * s).sqrt()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    /// Total Krylov steps (summed over nodes for the space-ordered paths).
    pub iterations: usize,
    /// Worst final relative residual among the Krylov solves; zero for direct paths.
    pub residual: f64,
    pub wall_seconds: f64,
    pub converged: bool,
}

/// Dispatches to the solver for `spec.scheme`.
pub fn solve(spec: &ProblemSpec, method: Method, cfg: &SolverConfig) -> Result<(SolutionGrid, SolveReport)> {
    match spec.scheme {
        SchemeKind::Ode2Sided => solve_scheme1(spec, method, cfg),
        SchemeKind::Hyperbolic => solve_scheme2(spec, method, cfg),
        SchemeKind::DiffusionWave => solve_scheme3(spec, method, cfg),
        SchemeKind::Diffusion => solve_scheme4(spec, method, cfg),
    }
}

pub(crate) fn unsupported(scheme: SchemeKind, method: Method) -> Error {
    Error::Config(format!("method '{method}' is not available for scheme '{scheme}'"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!("wave".parse::<SchemeKind>().unwrap(), SchemeKind::DiffusionWave);
        assert_eq!("ode2sided".parse::<SchemeKind>().unwrap(), SchemeKind::Ode2Sided);
        assert!("heat".parse::<SchemeKind>().is_err());
        assert_eq!("fast".parse::<Method>().unwrap(), Method::Fast);
        assert!("lu".parse::<Method>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(ProblemSpec::new(SchemeKind::Ode2Sided, 0.5, 1, 0).validate().is_err());
        assert!(ProblemSpec::new(SchemeKind::Ode2Sided, 0.5, 2, 0).validate().is_ok());
        assert!(ProblemSpec::new(SchemeKind::Hyperbolic, 1.5, 4, 4).validate().is_err());
        assert!(ProblemSpec::new(SchemeKind::DiffusionWave, 0.5, 4, 4).validate().is_err());
        assert!(ProblemSpec::new(SchemeKind::Diffusion, 0.5, 4, 1).validate().is_err());
        assert!(ProblemSpec::new(SchemeKind::Diffusion, 0.5, 1, 2).validate().is_ok());
    }

    #[test]
    fn constants() {
        let k = SchemeConstants::new(SchemeKind::Ode2Sided, 0.5, 0.25);
        assert!((k.mu - 2.0 / gamma_fn(1.5)).abs() < 1e-14);
        let h = SchemeConstants::new(SchemeKind::Hyperbolic, 0.5, 0.25);
        assert!((h.c - k.mu / 2.0).abs() < 1e-14);
        let w = SchemeConstants::new(SchemeKind::DiffusionWave, 1.5, 0.25);
        assert!((w.c - 0.25f64.powf(-1.5) / gamma_fn(1.5)).abs() < 1e-12);
    }
}
