//! Time-fractional hyperbolic equation `D_t^gamma u + u_x = f`, `0 < gamma < 1`,
//! discretized with a box scheme centred at `x_{i-1/2}`.
//!
//! Ordering the unknowns by space turns the global system into a block
//! lower-bidiagonal one: node `i` satisfies `A U_i = B U_{i-1} + F_{i-1/2}`
//! with two lower-triangular Toeplitz matrices and `A + B = (2/h) I`.

use std::time::Instant;

use super::{unsupported, Method, ProblemSpec, SchemeConstants, SchemeKind, SolutionGrid, SolveReport};
use crate::error::{Error, Result};
use crate::krylov::{gmres_solve, SolverConfig};
use crate::operator::LinearOperator;
use crate::toeplitz::{lower_toeplitz_forward_solve, ToeplitzOperator};
use crate::weights::g_weights;

/// Returns `(A, B)` for the space-ordered system.
pub fn assemble_scheme2_reordered(spec: &ProblemSpec) -> Result<(ToeplitzOperator, ToeplitzOperator)> {
    spec.expect(SchemeKind::Hyperbolic)?;
    let n = spec.n_time;
    let h = spec.h();
    let c = SchemeConstants::for_spec(spec).c;
    let g = g_weights(spec.gamma, n)?;

    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    a.push(1.0 / h + c * g[0]);
    b.push(1.0 / h - c * g[0]);
    for k in 1..n {
        a.push(c * (g[k] - g[k - 1]));
        b.push(c * (g[k - 1] - g[k]));
    }
    Ok((ToeplitzOperator::lower_triangular(a)?, ToeplitzOperator::lower_triangular(b)?))
}

/// Forcing at the cell midpoints plus the initial-data contribution
/// `c G_{n-1} (u0_i + u0_{i-1})`.
fn node_load(spec: &ProblemSpec, i: usize, c: f64, g: &[f64]) -> Vec<f64> {
    let h = spec.h();
    let tau = spec.tau();
    let xm = (i as f64 - 0.5) * h;
    let left = if i == 1 { 0.0 } else { (spec.initial_u0)((i - 1) as f64 * h) };
    let u0 = (spec.initial_u0)(i as f64 * h) + left;
    (1..=spec.n_time)
        .map(|n| (spec.forcing)(xm, n as f64 * tau) + c * g[n - 1] * u0)
        .collect()
}

/// Marches node by node from the inflow boundary. `Direct` uses forward
/// substitution, `Fast` uses GMRES with FFT matrix-vector products, warm
/// started from the previous node.
pub fn solve_scheme2(
    spec: &ProblemSpec,
    method: Method,
    cfg: &SolverConfig,
) -> Result<(SolutionGrid, SolveReport)> {
    if !matches!(method, Method::Direct | Method::Fast) {
        return Err(unsupported(spec.scheme, method));
    }
    let start = Instant::now();
    let (a, b) = assemble_scheme2_reordered(spec)?;
    let n = spec.n_time;
    let nodes = spec.m_space - 1;
    let two_over_h = 2.0 / spec.h();
    let c = SchemeConstants::for_spec(spec).c;
    let g = g_weights(spec.gamma, n)?;
    let spectrum = (method == Method::Fast).then(|| a.spectrum());

    let mut values = Vec::with_capacity(nodes * n);
    let mut prev = vec![0.0; n];
    let mut bprev = vec![0.0; n];
    let (mut iterations, mut residual) = (0, 0.0f64);
    for i in 1..=nodes {
        let mut rhs = node_load(spec, i, c, g.values());
        let current = match &spectrum {
            None => {
                b.apply_into(&prev, &mut bprev);
                for (r, v) in rhs.iter_mut().zip(&bprev) {
                    *r += v;
                }
                lower_toeplitz_forward_solve(&a, &rhs)?
            }
            Some(op) => {
                // B v = (2/h) v - A v
                op.apply_into(&prev, &mut bprev);
                for ((r, v), p) in rhs.iter_mut().zip(&bprev).zip(&prev) {
                    *r += two_over_h * p - v;
                }
                let warm = (i > 1).then_some(prev.as_slice());
                let out = gmres_solve(op, &rhs, cfg, warm)?;
                if !out.converged {
                    return Err(Error::NotConverged(format!(
                        "GMRES at node {i} stopped after {} iterations at relative residual {:e}",
                        out.iterations, out.residual
                    )));
                }
                iterations += out.iterations;
                residual = residual.max(out.residual);
                out.solution
            }
        };
        values.extend_from_slice(&current);
        prev = current;
    }
    let report = SolveReport {
        method,
        iterations,
        residual,
        wall_seconds: start.elapsed().as_secs_f64(),
        converged: true,
    };
    let grid = SolutionGrid::pde(spec.scheme, spec.tau(), spec.h(), nodes, n, values);
    Ok((grid, report))
}
