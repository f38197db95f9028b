use super::{axpy, check_dims, dot, norm2, KrylovResult, SolverConfig};
use crate::error::{Error, Result};
use crate::operator::LinearOperator;

/// Conjugate gradients for a symmetric positive definite operator.
///
/// Follows the textbook recurrence: step length `kappa = r'r / w'Aw`, new
/// direction `w = r + (r'r / r_old'r_old) w`. Stops at the first iterate whose
/// relative residual is at most `cfg.tol`, or after `cfg.max_iter` steps.
pub fn cg_solve<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[f64],
    cfg: &SolverConfig,
    x0: Option<&[f64]>,
) -> Result<KrylovResult> {
    cfg.validate()?;
    let n = op.dim();
    check_dims(n, b, x0)?;

    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Ok(KrylovResult {
            solution: vec![0.0; n],
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }

    let mut x = x0.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    let mut r = b.to_vec();
    if x0.is_some() {
        let ax = op.apply(&x);
        axpy(-1.0, &ax, &mut r);
    }

    let mut rr = dot(&r, &r);
    let mut residual = rr.sqrt() / bnorm;
    if residual <= cfg.tol {
        return Ok(KrylovResult {
            solution: x,
            iterations: 0,
            residual,
            converged: true,
        });
    }

    let mut w = r.clone();
    let mut aw = vec![0.0; n];
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        op.apply_into(&w, &mut aw);
        iterations += 1;
        let curvature = dot(&w, &aw);
        // also rejects NaN
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(curvature > 0.0) {
            return Err(Error::Definiteness {
                iteration: iterations,
                curvature,
            });
        }
        let kappa = rr / curvature;
        axpy(kappa, &w, &mut x);
        axpy(-kappa, &aw, &mut r);

        let rr_new = dot(&r, &r);
        residual = rr_new.sqrt() / bnorm;
        if residual <= cfg.tol {
            return Ok(KrylovResult {
                solution: x,
                iterations,
                residual,
                converged: true,
            });
        }
        let ratio = rr_new / rr;
        rr = rr_new;
        for (wi, ri) in w.iter_mut().zip(&r) {
            *wi = ri + ratio * *wi;
        }
    }

    Ok(KrylovResult {
        solution: x,
        iterations,
        residual,
        converged: false,
    })
}
