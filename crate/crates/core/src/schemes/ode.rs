//! Two-sided fractional ODE: left + right Caputo derivative plus identity.

use std::time::Instant;

use super::{unsupported, Method, ProblemSpec, SchemeConstants, SchemeKind, SolutionGrid, SolveReport};
use crate::error::{Error, Result};
use crate::krylov::{cg_solve, dense_solve, SolverConfig};
use crate::toeplitz::ToeplitzOperator;
use crate::weights::g_weights;

/// Symmetric Toeplitz stiffness matrix and load vector for `u_1..u_{N-1}`.
///
/// The diagonal is `1 + 2 mu`; the `k`-th off-diagonal is
/// `mu (G_k - G_{k-1}) < 0`. Each row is strictly diagonally dominant with
/// margin `1 + mu G_{i-1} + mu G_{N-i-1}`.
pub fn assemble_scheme1(spec: &ProblemSpec) -> Result<(ToeplitzOperator, Vec<f64>)> {
    spec.expect(SchemeKind::Ode2Sided)?;
    let n = spec.n_time - 1;
    let mu = SchemeConstants::for_spec(spec).mu;
    let g = g_weights(spec.gamma, n.max(1))?;

    let mut col = Vec::with_capacity(n);
    col.push(1.0 + 2.0 * mu);
    for k in 1..n {
        col.push(mu * (g[k] - g[k - 1]));
    }
    let tau = spec.tau();
    let rhs = (1..=n).map(|k| (spec.forcing)(0.0, k as f64 * tau)).collect();
    Ok((ToeplitzOperator::symmetric(col)?, rhs))
}

/// Solves the ODE with Gaussian elimination, plain CG, or FFT-accelerated CG.
pub fn solve_scheme1(
    spec: &ProblemSpec,
    method: Method,
    cfg: &SolverConfig,
) -> Result<(SolutionGrid, SolveReport)> {
    let start = Instant::now();
    let (op, rhs) = assemble_scheme1(spec)?;
    let (solution, iterations, residual, converged) = match method {
        Method::Dense => (dense_solve(&op.to_dense(), &rhs)?, 0, 0.0, true),
        Method::Cg => {
            let r = cg_solve(&op, &rhs, cfg, None)?;
            (r.solution, r.iterations, r.residual, r.converged)
        }
        Method::Fast => {
            let r = cg_solve(&op.spectrum(), &rhs, cfg, None)?;
            (r.solution, r.iterations, r.residual, r.converged)
        }
        Method::Direct => return Err(unsupported(spec.scheme, method)),
    };
    if !converged {
        return Err(Error::NotConverged(format!(
            "CG stopped after {iterations} iterations at relative residual {residual:e}"
        )));
    }
    let report = SolveReport {
        method,
        iterations,
        residual,
        wall_seconds: start.elapsed().as_secs_f64(),
        converged,
    };
    Ok((SolutionGrid::ode(spec.tau(), solution), report))
}
