//! Shared fixtures for the criterion benchmarks.

use fractime_core::schemes::{self, ProblemSpec, SchemeKind};
use fractime_core::ToeplitzOperator;

/// The two-sided ODE stiffness operator for `n_time` steps at order `gamma`.
pub fn ode_stiffness(gamma: f64, n_time: usize) -> ToeplitzOperator {
    let spec = ProblemSpec::new(SchemeKind::Ode2Sided, gamma, n_time, 0);
    schemes::assemble_scheme1(&spec)
        .expect("valid benchmark problem")
        .0
}

/// A deterministic vector with entries in `[-1, 1]`.
pub fn test_vector(n: usize) -> Vec<f64> {
    (0..n).map(|i| ((i as f64) * 0.618_033_988_75).fract() * 2.0 - 1.0).collect()
}
