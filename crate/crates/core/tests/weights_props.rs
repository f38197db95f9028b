use fractime_core::weights::{first_difference, g_weights, m_weights, second_difference};
use proptest::prelude::*;

#[test]
fn g_grid_tail_bound() {
    let k = 10_000;
    for i in 1..20 {
        let gamma = 0.05 * i as f64;
        let g = g_weights(gamma, k + 1).unwrap();
        let v = g.values();
        assert!(v.iter().all(|&x| x > 0.0));
        assert!(v.windows(2).all(|w| w[1] < w[0]));
        let bound = (k as f64).powf(-gamma) / (1.0 - gamma) * 2.0;
        assert!(v[k] < bound, "gamma {gamma}");
        // direct evaluation at the tail
        let direct = ((k + 1) as f64).powf(1.0 - gamma) - (k as f64).powf(1.0 - gamma);
        assert!((v[k] - direct).abs() <= 1e-12 * direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn m_is_shifted_g(gamma in 1.001f64..1.999, count in 1usize..2000) {
        let m = m_weights(gamma, count).unwrap();
        let g = g_weights(gamma - 1.0, count).unwrap();
        for (a, b) in m.values().iter().zip(g.values()) {
            prop_assert!((a - b).abs() <= 1e-15 * b.abs());
        }
    }

    #[test]
    fn differences_cumulate_back(gamma in 0.01f64..0.99, count in 2usize..3000) {
        let g = g_weights(gamma, count).unwrap();
        let d = first_difference(&g).unwrap();
        let mut acc = g.values()[0];
        for (k, dk) in d.iter().enumerate() {
            prop_assert!(*dk < 0.0);
            acc += dk;
            prop_assert!((acc - g.values()[k + 1]).abs() <= 1e-14);
        }
    }

    #[test]
    fn telescoping(gamma in 0.01f64..0.99, count in 1usize..5000) {
        let g = g_weights(gamma, count).unwrap();
        let sum: f64 = g.values().iter().sum();
        let target = (count as f64).powf(1.0 - gamma);
        prop_assert!((sum - target).abs() <= 1e-11 * target);
    }

    #[test]
    fn second_differences_positive(gamma in 1.01f64..1.99, count in 3usize..3000) {
        let m = m_weights(gamma, count).unwrap();
        prop_assert!(second_difference(&m).unwrap().iter().all(|&w| w > 0.0));
    }
}
