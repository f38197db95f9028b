use fractime_core::harness::example_problem;
use fractime_core::krylov::{cg_solve, dense_solve, gmres_solve, DenseMatrix, SolverConfig};
use fractime_core::schemes::assemble_scheme1;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cg_on_ode_systems(gamma in 0.01f64..0.99, n in 2usize..=256) {
        let spec = example_problem(1, gamma, n, 0).unwrap();
        let (op, rhs) = assemble_scheme1(&spec).unwrap();
        let cfg = SolverConfig::default();
        let dense = dense_solve(&op.to_dense(), &rhs).unwrap();
        let plain = cg_solve(&op, &rhs, &cfg, None).unwrap();
        let fast = cg_solve(&op.spectrum(), &rhs, &cfg, None).unwrap();
        let via_dense = cg_solve(&op.to_dense(), &rhs, &cfg, None).unwrap();
        prop_assert!(fast.converged && fast.residual <= 1e-10);
        prop_assert!(max_diff(&fast.solution, &dense) <= 1e-8);
        prop_assert!(max_diff(&fast.solution, &via_dense.solution) <= 1e-10);
        prop_assert_eq!(fast.iterations, plain.iterations);
    }

    #[test]
    fn full_gmres_finishes_in_n_steps(seed in any::<u64>()) {
        let n = 20;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DenseMatrix::from_fn(n, |i, j| {
            let noise = rng.gen_range(-1.0..1.0) / n as f64;
            if i == j { 2.0 + noise } else { noise }
        });
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let cfg = SolverConfig::default().with_restart(n).with_max_iter(n);
        let out = gmres_solve(&a, &b, &cfg, None).unwrap();
        prop_assert!(out.converged && out.iterations <= n);
        prop_assert!(max_diff(&out.solution, &dense_solve(&a, &b).unwrap()) <= 1e-9);
    }
}
