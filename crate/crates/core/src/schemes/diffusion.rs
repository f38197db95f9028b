//! Time-fractional diffusion equation `D_t^gamma u - u_xx = f`, `0 < gamma < 1`,
//! with homogeneous Dirichlet boundaries.
//!
//! Ordered by space the unknowns form an `(M-1) x (M-1)` block tridiagonal
//! system: diagonal blocks are one lower-triangular Toeplitz matrix of size
//! `N`, off-diagonal blocks are `-1/h^2 I`.

use std::time::Instant;

use super::{unsupported, Method, ProblemSpec, SchemeConstants, SchemeKind, SolutionGrid, SolveReport};
use crate::error::{Error, Result};
use crate::krylov::{gmres_solve, tridiagonal_solve, SolverConfig};
use crate::toeplitz::{BlockTridiagonalToeplitz, ToeplitzOperator};
use crate::weights::g_weights;

/// Block operator and right-hand side in node-major order.
///
/// `rhs_i^n = f(x_i, t_n) + c G_{n-1} u0(x_i)`.
pub fn assemble_scheme4(spec: &ProblemSpec) -> Result<(BlockTridiagonalToeplitz, Vec<f64>)> {
    spec.expect(SchemeKind::Diffusion)?;
    let n = spec.n_time;
    let h2 = spec.h() * spec.h();
    let c = SchemeConstants::for_spec(spec).c;
    let g = g_weights(spec.gamma, n)?;

    let mut col = Vec::with_capacity(n);
    col.push(2.0 / h2 + c * g[0]);
    for k in 1..n {
        col.push(c * (g[k] - g[k - 1]));
    }
    let nodes = spec.m_space - 1;
    let op = BlockTridiagonalToeplitz::new(nodes, ToeplitzOperator::lower_triangular(col)?, -1.0 / h2)?;
    Ok((op, load(spec, c, g.values())))
}

fn load(spec: &ProblemSpec, c: f64, g: &[f64]) -> Vec<f64> {
    let (h, tau) = (spec.h(), spec.tau());
    let mut rhs = Vec::with_capacity((spec.m_space - 1) * spec.n_time);
    for i in 1..spec.m_space {
        let x = i as f64 * h;
        let u0 = (spec.initial_u0)(x);
        rhs.extend((1..=spec.n_time).map(|n| (spec.forcing)(x, n as f64 * tau) + c * g[n - 1] * u0));
    }
    rhs
}

/// `Direct` marches in time with one tridiagonal solve per level. `Fast`
/// solves the whole space-time system at once with GMRES.
pub fn solve_scheme4(
    spec: &ProblemSpec,
    method: Method,
    cfg: &SolverConfig,
) -> Result<(SolutionGrid, SolveReport)> {
    let start = Instant::now();
    let (values, iterations, residual) = match method {
        Method::Direct => (march(spec)?, 0, 0.0),
        Method::Fast => {
            let (op, rhs) = assemble_scheme4(spec)?;
            let out = gmres_solve(&op, &rhs, cfg, None)?;
            if !out.converged {
                return Err(Error::NotConverged(format!(
                    "GMRES stopped after {} iterations at relative residual {:e}",
                    out.iterations, out.residual
                )));
            }
            (out.solution, out.iterations, out.residual)
        }
        _ => return Err(unsupported(spec.scheme, method)),
    };
    let report = SolveReport {
        method,
        iterations,
        residual,
        wall_seconds: start.elapsed().as_secs_f64(),
        converged: true,
    };
    let grid = SolutionGrid::pde(spec.scheme, spec.tau(), spec.h(), spec.m_space - 1, spec.n_time, values);
    Ok((grid, report))
}

fn march(spec: &ProblemSpec) -> Result<Vec<f64>> {
    spec.expect(SchemeKind::Diffusion)?;
    let n = spec.n_time;
    let nodes = spec.m_space - 1;
    let h2 = spec.h() * spec.h();
    let c = SchemeConstants::for_spec(spec).c;
    let g = g_weights(spec.gamma, n)?;
    let rhs = load(spec, c, g.values());

    let diag = vec![2.0 / h2 + c * g[0]; nodes];
    let off = vec![-1.0 / h2; nodes - 1];
    // time-major while marching
    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut b = vec![0.0; nodes];
    for step in 1..=n {
        for (i, bi) in b.iter_mut().enumerate() {
            *bi = rhs[i * n + step - 1];
        }
        for (k, level) in levels.iter().enumerate() {
            let w = c * (g[step - k - 2] - g[step - k - 1]);
            for (bi, u) in b.iter_mut().zip(level) {
                *bi += w * u;
            }
        }
        levels.push(tridiagonal_solve(&off, &diag, &off, &b)?);
    }
    let mut out = vec![0.0; nodes * n];
    for (step, level) in levels.iter().enumerate() {
        for (i, u) in level.iter().enumerate() {
            out[i * n + step] = *u;
        }
    }
    Ok(out)
}
