//! Time-fractional diffusion-wave type equation `D_t^gamma u + u_x = f`,
//! `1 < gamma < 2`, with `u(x, 0) = u0(x)` and `u_t(x, 0) = phi(x)`.
//!
//! The Caputo derivative is discretized at `t_{n-1/2}` from the second
//! weights `M_k`, the space derivative by a backward difference at `x_i`.
//! Node `i` satisfies `A U_i = U_{i-1} / h + F_i`.

use std::time::Instant;

use super::{unsupported, Method, ProblemSpec, SchemeConstants, SchemeKind, SolutionGrid, SolveReport};
use crate::error::{Error, Result};
use crate::krylov::{gmres_solve, SolverConfig};
use crate::toeplitz::{lower_toeplitz_forward_solve, ToeplitzOperator};
use crate::weights::m_weights;

/// Lower-triangular Toeplitz matrix `A` for the space-ordered system.
///
/// Diagonal `1/h + c M_0`, first sub-diagonal `c (M_1 - 2 M_0)`, and
/// `c (M_{j-2} - 2 M_{j-1} + M_j)` on sub-diagonal `j >= 2`.
pub fn assemble_scheme3_reordered(spec: &ProblemSpec) -> Result<ToeplitzOperator> {
    spec.expect(SchemeKind::DiffusionWave)?;
    let n = spec.n_time;
    let c = SchemeConstants::for_spec(spec).c;
    let m = m_weights(spec.gamma, n.max(2))?;
    let mut col = Vec::with_capacity(n);
    col.push(1.0 / spec.h() + c * m[0]);
    if n > 1 {
        col.push(c * (m[1] - 2.0 * m[0]));
    }
    for j in 2..n {
        col.push(c * (m[j - 2] - 2.0 * m[j - 1] + m[j]));
    }
    ToeplitzOperator::lower_triangular(col)
}

/// `f(x_i, t_{n-1/2}) + c tau M_{n-1} phi_i - c (M_{n-2} - M_{n-1}) u0_i`
/// with `M_{-1} = 0`.
fn node_load(spec: &ProblemSpec, i: usize, c: f64, m: &[f64]) -> Vec<f64> {
    let tau = spec.tau();
    let x = i as f64 * spec.h();
    let (u0, phi) = ((spec.initial_u0)(x), (spec.initial_phi)(x));
    (1..=spec.n_time)
        .map(|n| {
            let before = if n >= 2 { m[n - 2] } else { 0.0 };
            (spec.forcing)(x, (n as f64 - 0.5) * tau) + c * tau * m[n - 1] * phi - c * (before - m[n - 1]) * u0
        })
        .collect()
}

/// Marches node by node. `Fast` runs GMRES with FFT products; the history
/// matrix is far from normal for `gamma` near 2, so restarted GMRES can
/// stall unless `cfg.restart` is close to the number of time steps.
pub fn solve_scheme3(
    spec: &ProblemSpec,
    method: Method,
    cfg: &SolverConfig,
) -> Result<(SolutionGrid, SolveReport)> {
    if !matches!(method, Method::Direct | Method::Fast) {
        return Err(unsupported(spec.scheme, method));
    }
    let start = Instant::now();
    let a = assemble_scheme3_reordered(spec)?;
    let n = spec.n_time;
    let nodes = spec.m_space - 1;
    let inv_h = 1.0 / spec.h();
    let c = SchemeConstants::for_spec(spec).c;
    let m = m_weights(spec.gamma, n.max(2))?;
    let spectrum = (method == Method::Fast).then(|| a.spectrum());

    let mut values = Vec::with_capacity(nodes * n);
    let mut prev = vec![0.0; n];
    let (mut iterations, mut residual) = (0, 0.0f64);
    for i in 1..=nodes {
        let mut rhs = node_load(spec, i, c, m.values());
        for (r, p) in rhs.iter_mut().zip(&prev) {
            *r += inv_h * p;
        }
        let current = match &spectrum {
            None => lower_toeplitz_forward_solve(&a, &rhs)?,
            Some(op) => {
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
