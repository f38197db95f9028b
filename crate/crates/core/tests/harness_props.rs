use fractime_core::harness::{
    convergence_markdown, fill_rates, ladder, read_convergence_csv, run_convergence, run_timing, write_convergence_csv,
    ConvergenceRow, ExperimentPlan, LadderStyle,
};
use fractime_core::schemes::{Method, SchemeKind};
use proptest::prelude::*;

fn arb_row() -> impl Strategy<Value = ConvergenceRow> {
    (
        0u32..30,
        prop::option::of(any::<f64>().prop_filter("finite", |v| v.is_finite())),
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        0.0f64..1.0,
        prop::option::of(-3.0f64..3.0),
        0usize..100_000,
        0.0f64..1e4,
        prop::sample::select(vec![Method::Dense, Method::Cg, Method::Direct, Method::Fast]),
        0.0f64..2.0,
        prop::sample::select(vec![
            SchemeKind::Ode2Sided,
            SchemeKind::Hyperbolic,
            SchemeKind::DiffusionWave,
            SchemeKind::Diffusion,
        ]),
    )
        .prop_map(|(mesh_exp, h, tau, l2_error, rate, iterations, wall_seconds, method, gamma, scheme)| {
            ConvergenceRow { mesh_exp, h, tau, l2_error, rate, iterations, wall_seconds, method, gamma, scheme }
        })
}

proptest! {
    #[test]
    fn csv_round_trip(rows in prop::collection::vec(arb_row(), 0..20)) {
        let mut buf = Vec::new();
        write_convergence_csv(&rows, &mut buf).unwrap();
        prop_assert_eq!(read_convergence_csv(buf.as_slice()).unwrap(), rows.clone());
        prop_assert_eq!(convergence_markdown(&rows).lines().count(), rows.len() + 2);
    }
}

#[test]
fn fast_and_direct_errors_agree() {
    for (example, gamma, style, exps) in [
        (2u8, 0.5, LadderStyle::FixedTime(256), 3..=5),
        (3, 1.5, LadderStyle::Uniform, 3..=6),
        (4, 0.5, LadderStyle::Uniform, 3..=6),
    ] {
        let plan = ExperimentPlan::new(example, vec![gamma], ladder(style, exps), vec![Method::Direct, Method::Fast]);
        let rows = run_convergence(&plan).unwrap();
        let (direct, fast) = rows.split_at(rows.len() / 2);
        for (d, f) in direct.iter().zip(fast) {
            assert_eq!((d.method, f.method), (Method::Direct, Method::Fast));
            assert!((d.l2_error - f.l2_error).abs() <= 5e-4 * d.l2_error, "example {example}");
        }
    }
}

#[test]
fn fill_rates_by_series() {
    let plan = ExperimentPlan::new(1, vec![0.5], ladder(LadderStyle::Time, 5..=7), vec![Method::Fast]);
    let mut rows = run_convergence(&plan).unwrap();
    let rates: Vec<_> = rows.iter().map(|r| r.rate).collect();
    fill_rates(&mut rows);
    assert_eq!(rates, rows.iter().map(|r| r.rate).collect::<Vec<_>>());
    assert!((rows[2].rate.unwrap() - 1.47).abs() < 0.05);
}

#[test]
fn fast_timings_grow_with_mesh() {
    let plan = ExperimentPlan::new(1, vec![0.5], ladder(LadderStyle::Time, [10, 14, 18]), vec![Method::Fast]);
    let rows = run_timing(&plan).unwrap();
    let times: Vec<f64> = rows.iter().map(|r| r.wall_seconds.unwrap()).collect();
    assert!(times.windows(2).all(|w| w[1] > w[0]), "{times:?}");
}
