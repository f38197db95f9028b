use super::{axpy, check_dims, dot, norm2, KrylovResult, SolverConfig};
use crate::error::Result;
use crate::operator::LinearOperator;

/// Restarted GMRES(m) with modified Gram-Schmidt Arnoldi.
///
/// The Hessenberg least-squares problem `min ||beta e1 - H y||` is reduced
/// incrementally with Givens rotations, so the residual norm of every inner
/// step is known without forming the iterate. An exactly zero subdiagonal
/// `h(j+1, j)` ends the cycle early with the exact solution of the
/// current Krylov space.
///
/// A restart cycle that fails to lower the true residual ends the solve with
/// `converged = false`; so does exhausting `cfg.max_iter`.
pub fn gmres_solve<A: LinearOperator + ?Sized>(
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
    let mut beta = norm2(&r);
    let mut residual = beta / bnorm;
    let mut iterations = 0;

    let m = cfg.restart;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    // Column j of the Hessenberg matrix holds h(0..=j+1, j).
    let mut hess: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];
    let mut w = vec![0.0; n];

    while residual > cfg.tol && iterations < cfg.max_iter {
        basis.clear();
        hess.clear();
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;
        basis.push(r.iter().map(|v| v / beta).collect());

        let mut k = 0;
        for j in 0..m {
            op.apply_into(&basis[j], &mut w);
            iterations += 1;
            let wnorm_in = norm2(&w);

            let mut col = vec![0.0; j + 2];
            for (i, v) in basis.iter().enumerate() {
                let h = dot(&w, v);
                col[i] = h;
                axpy(-h, v, &mut w);
            }
            let h_next = norm2(&w);
            col[j + 1] = h_next;

            for i in 0..j {
                let t = cs[i] * col[i] + sn[i] * col[i + 1];
                col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
                col[i] = t;
            }
            let d = col[j].hypot(col[j + 1]);
            let (c, s) = if d == 0.0 { (1.0, 0.0) } else { (col[j] / d, col[j + 1] / d) };
            cs[j] = c;
            sn[j] = s;
            col[j] = d;
            col[j + 1] = 0.0;
            g[j + 1] = -s * g[j];
            g[j] *= c;
            hess.push(col);
            k = j + 1;

            let breakdown = h_next == 0.0 || h_next <= f64::EPSILON * wnorm_in;
            if breakdown || g[j + 1].abs() / bnorm <= cfg.tol || iterations >= cfg.max_iter {
                break;
            }
            basis.push(w.iter().map(|v| v / h_next).collect());
        }

        // Back substitution on the rotated triangle.
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for (jj, yj) in y.iter().enumerate().take(k).skip(i + 1) {
                acc -= hess[jj][i] * yj;
            }
            y[i] = if hess[i][i] == 0.0 { 0.0 } else { acc / hess[i][i] };
        }
        for (yi, v) in y.iter().zip(&basis) {
            axpy(*yi, v, &mut x);
        }

        r.copy_from_slice(b);
        let ax = op.apply(&x);
        axpy(-1.0, &ax, &mut r);
        let new_beta = norm2(&r);
        let new_residual = new_beta / bnorm;
        if new_residual > cfg.tol && new_residual >= residual {
            // Stagnation: a whole cycle without progress.
            residual = new_residual.min(residual);
            break;
        }
        beta = new_beta;
        residual = new_residual;
    }

    Ok(KrylovResult {
        solution: x,
        iterations,
        residual,
        converged: residual <= cfg.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::DenseMatrix;
    use crate::operator::Identity;
    use crate::toeplitz::ToeplitzOperator;
    use crate::Error;

    #[test]
    fn identity_in_one_step() {
        let b = [3.0, -1.0, 4.0, 1.5];
        let res = gmres_solve(&Identity(4), &b, &SolverConfig::default(), None).unwrap();
        assert_eq!(res.iterations, 1);
        assert!(res.converged);
        for (a, e) in res.solution.iter().zip(b) {
            assert!((a - e).abs() < 1e-15);
        }
    }

    #[test]
    fn two_by_two_lower_toeplitz() {
        let t = ToeplitzOperator::lower_triangular(vec![1.0, 1.0]).unwrap().spectrum();
        let res = gmres_solve(&t, &[1.0, 2.0], &SolverConfig::default(), None).unwrap();
        assert!(res.converged);
        assert!((res.solution[0] - 1.0).abs() < 1e-12);
        assert!((res.solution[1] - 1.0).abs() < 1e-12);
        assert!(res.iterations <= 2);
    }

    #[test]
    fn nonsymmetric_dense_with_restart() {
        let n = 40;
        let a = DenseMatrix::from_fn(n, |i, j| {
            if i == j {
                4.0
            } else if j == i + 1 {
                1.5
            } else if i == j + 1 {
                -0.7
            } else {
                0.0
            }
        });
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let cfg = SolverConfig::default().with_restart(5);
        let res = gmres_solve(&a, &b, &cfg, None).unwrap();
        assert!(res.converged);
        let r = a.matvec(&res.solution);
        let err: f64 = r.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        assert!(err / norm2(&b) <= 1e-10);
    }

    #[test]
    fn stagnation_is_reported_not_raised() {
        // Cyclic shift: GMRES(1) makes no progress on e_1.
        let n = 6;
        let a = DenseMatrix::from_fn(n, |i, j| if (j + 1) % n == i { 1.0 } else { 0.0 });
        let mut b = vec![0.0; n];
        b[0] = 1.0;
        let cfg = SolverConfig::default().with_restart(1);
        let res = gmres_solve(&a, &b, &cfg, None).unwrap();
        assert!(!res.converged);
        assert!(res.iterations < 10);
    }

    #[test]
    fn warm_start_at_solution_takes_no_steps() {
        let res =
            gmres_solve(&Identity(2), &[1.0, 2.0], &SolverConfig::default(), Some(&[1.0, 2.0]))
                .unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.converged);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            gmres_solve(&Identity(3), &[1.0], &SolverConfig::default(), None),
            Err(Error::Size(_))
        ));
    }
}
