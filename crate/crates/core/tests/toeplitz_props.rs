use fractime_core::toeplitz::{embed_circulant, toeplitz_matvec, ToeplitzOperator};
use fractime_core::LinearOperator;
use proptest::prelude::*;

fn operator(kind: u8, col: Vec<f64>, mut row: Vec<f64>) -> ToeplitzOperator {
    match kind % 3 {
        0 => ToeplitzOperator::symmetric(col).unwrap(),
        1 => ToeplitzOperator::lower_triangular(col).unwrap(),
        _ => {
            row[0] = col[0];
            ToeplitzOperator::new(col, row).unwrap()
        }
    }
}

fn arb_case() -> impl Strategy<Value = (ToeplitzOperator, Vec<f64>, Vec<f64>)> {
    prop::sample::select(vec![1usize, 2, 3, 17, 64, 100]).prop_flat_map(|n| {
        let v = || prop::collection::vec(-10.0f64..10.0, n);
        (any::<u8>(), v(), v(), v(), v()).prop_map(|(k, c, r, x, y)| (operator(k, c, r), x, y))
    })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn fft_product_matches_dense((t, x, _) in arb_case()) {
        let fast = toeplitz_matvec(&t.spectrum(), &x).unwrap();
        prop_assert!(close(&fast, &t.to_dense().matvec(&x), 1e-12));
        prop_assert!(close(&t.apply(&x), &t.to_dense().matvec(&x), 1e-12));
    }

    #[test]
    fn linear((t, x, y) in arb_case(), alpha in -5.0f64..5.0) {
        let spec = t.spectrum();
        let scaled = toeplitz_matvec(&t.scaled(alpha).spectrum(), &x).unwrap();
        let base: Vec<f64> = toeplitz_matvec(&spec, &x).unwrap().iter().map(|v| alpha * v).collect();
        prop_assert!(close(&scaled, &base, 1e-12));

        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lhs = toeplitz_matvec(&spec, &sum).unwrap();
        let rhs: Vec<f64> = toeplitz_matvec(&spec, &x)
            .unwrap()
            .iter()
            .zip(toeplitz_matvec(&spec, &y).unwrap())
            .map(|(a, b)| a + b)
            .collect();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn circulant_leading_block_is_t((t, _, _) in arb_case()) {
        // the circulant's first column, read back by an inverse transform,
        // places the entries of t exactly
        let c = fractime_core::toeplitz::embedding_column(&t);
        let n = t.dim();
        let l = c.len();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(c[(i + l - j) % l], t.entry(i, j));
            }
        }
        prop_assert_eq!(embed_circulant(&t).len(), l);
    }
}
