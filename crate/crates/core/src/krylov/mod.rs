//! Unpreconditioned Krylov solvers over [`LinearOperator`](crate::LinearOperator),
//! and the dense direct solvers used as oracles.

mod cg;
mod dense;
mod gmres;

pub use cg::cg_solve;
pub use dense::{dense_solve, tridiagonal_solve, DenseMatrix};
pub use gmres::gmres_solve;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop once `||r|| / ||b|| <= tol`.
    pub tol: f64,
    /// Cap on Krylov steps (one operator application each).
    pub max_iter: usize,
    /// GMRES restart length; ignored by CG.
    pub restart: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
            restart: 20,
        }
    }
}

impl SolverConfig {
    pub fn new(tol: f64, max_iter: usize, restart: usize) -> Result<Self> {
        let cfg = Self {
            tol,
            max_iter,
            restart,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The looser tolerance used for timing runs.
    pub fn timing() -> Self {
        Self {
            tol: 1e-8,
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_restart(mut self, restart: usize) -> Self {
        self.restart = restart;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if self.restart == 0 {
            return Err(Error::Config("restart must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrylovResult {
    pub solution: Vec<f64>,
    /// Krylov steps taken, i.e. operator applications inside the iteration.
    pub iterations: usize,
    /// Final relative residual `||b - A x|| / ||b||`.
    pub residual: f64,
    pub converged: bool,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn check_dims(dim: usize, b: &[f64], x0: Option<&[f64]>) -> Result<()> {
    if b.len() != dim {
        return Err(Error::Size(format!(
            "right-hand side has length {} but operator has dimension {dim}",
            b.len()
        )));
    }
    if let Some(x0) = x0 {
        if x0.len() != dim {
            return Err(Error::Size(format!(
                "initial guess has length {} but operator has dimension {dim}",
                x0.len()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(0.0, 10, 5).is_err());
        assert!(SolverConfig::new(1e-8, 0, 5).is_err());
        assert!(SolverConfig::new(1e-8, 10, 0).is_err());
        assert!(SolverConfig::new(f64::NAN, 10, 5).is_err());
        let cfg = SolverConfig::default();
        assert_eq!((cfg.tol, cfg.restart), (1e-10, 20));
        assert_eq!(SolverConfig::timing().tol, 1e-8);
    }
}
