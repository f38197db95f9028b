//! Power-difference weights for the L1-type Caputo discretizations.
//!
//! For an exponent `p` the weights are `w_k = (k+1)^p - k^p`. With
//! `p = 1 - gamma` (`0 < gamma < 1`) they are the `G_k` of the first-order
//! L1 formula; with `p = 2 - gamma` (`1 < gamma < 2`) they are the `M_k` used
//! by the diffusion-wave discretization. Both start at exactly one and
//! decrease strictly to zero.

use crate::error::{Error, Result};

/// Beyond this index `(k+1)^p - k^p` is evaluated through `log1p`/`expm1`.
const CANCELLATION_SWITCH: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    /// `G_k = (k+1)^(1-gamma) - k^(1-gamma)`, `0 < gamma < 1`.
    G,
    /// `M_k = (k+1)^(2-gamma) - k^(2-gamma)`, `1 < gamma < 2`.
    M,
}

impl WeightKind {
    fn exponent(self, gamma: f64) -> f64 {
        match self {
            WeightKind::G => 1.0 - gamma,
            WeightKind::M => 2.0 - gamma,
        }
    }
}

/// An immutable, precomputed weight sequence `w_0, ..., w_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    gamma: f64,
    kind: WeightKind,
    values: Vec<f64>,
}

impl WeightSequence {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `w_k`, or zero when `k` is past the end of the sequence.
    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }
}

impl std::ops::Index<usize> for WeightSequence {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.values[k]
    }
}

/// `(k+1)^p - k^p` for `0 < p < 1`, accurate in the far tail.
pub fn power_difference(k: usize, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let kf = k as f64;
    if k > CANCELLATION_SWITCH {
        // k^p * ((1 + 1/k)^p - 1)
        kf.powf(p) * (p * (1.0 / kf).ln_1p()).exp_m1()
    } else {
        (kf + 1.0).powf(p) - kf.powf(p)
    }
}

fn build(kind: WeightKind, gamma: f64, count: usize) -> Result<WeightSequence> {
    if count == 0 {
        return Err(Error::Size("weight sequence needs count >= 1".into()));
    }
    let p = kind.exponent(gamma);
    let values = (0..count).map(|k| power_difference(k, p)).collect();
    Ok(WeightSequence {
        gamma,
        kind,
        values,
    })
}

/// `G_0, ..., G_{count-1}` for `0 < gamma < 1`.
pub fn g_weights(gamma: f64, count: usize) -> Result<WeightSequence> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain {
            name: "gamma",
            value: gamma,
            interval: "(0, 1)",
        });
    }
    build(WeightKind::G, gamma, count)
}

/// `M_0, ..., M_{count-1}` for `1 < gamma < 2`.
pub fn m_weights(gamma: f64, count: usize) -> Result<WeightSequence> {
    if !(gamma > 1.0 && gamma < 2.0) {
        return Err(Error::Domain {
            name: "gamma",
            value: gamma,
            interval: "(1, 2)",
        });
    }
    build(WeightKind::M, gamma, count)
}

/// `W_k = w_k - w_{k-1}` for `k = 1..K`. Every entry is negative.
pub fn first_difference(seq: &WeightSequence) -> Result<Vec<f64>> {
    if seq.len() < 2 {
        return Err(Error::Size(format!(
            "first difference needs at least 2 weights, got {}",
            seq.len()
        )));
    }
    Ok(diff1(&seq.values))
}

/// `W_j = M_{j-2} - 2 M_{j-1} + M_j` for `j = 2..K`. Every entry is positive.
pub fn second_difference(seq: &WeightSequence) -> Result<Vec<f64>> {
    if seq.kind != WeightKind::M {
        return Err(Error::Config(
            "second differences are defined for M weights only".into(),
        ));
    }
    if seq.len() < 3 {
        return Err(Error::Size(format!(
            "second difference needs at least 3 weights, got {}",
            seq.len()
        )));
    }
    Ok(diff2(&seq.values))
}

/// Forward differences `v[k] - v[k-1]` of a raw slice.
pub fn diff1(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Second differences `v[j-2] - 2 v[j-1] + v[j]` of a raw slice.
pub fn diff2(v: &[f64]) -> Vec<f64> {
    v.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn g_single_weight_is_one() {
        assert_eq!(g_weights(0.5, 1).unwrap().values(), &[1.0]);
        assert_eq!(m_weights(1.5, 1).unwrap().values(), &[1.0]);
    }

    #[test]
    fn g_half_matches_square_roots() {
        let g = g_weights(0.5, 3).unwrap();
        assert_eq!(g[0], 1.0);
        assert_relative_eq!(g[1], 2f64.sqrt() - 1.0, max_relative = 1e-15);
        assert_relative_eq!(g[2], 3f64.sqrt() - 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(g[1], 0.41421356, epsilon = 1e-8);
        assert_relative_eq!(g[2], 0.31783724, epsilon = 1e-8);
    }

    #[test]
    fn g_and_m_spot_values() {
        let g = g_weights(0.9, 2).unwrap();
        assert_relative_eq!(g[1], 0.07177346, epsilon = 1e-8);
        let m = m_weights(1.1, 2).unwrap();
        assert_relative_eq!(m[1], 0.86606598, epsilon = 1e-8);
        let m = m_weights(1.5, 3).unwrap();
        assert_relative_eq!(m[1], 0.41421356, epsilon = 1e-8);
        assert_relative_eq!(m[2], 0.31783724, epsilon = 1e-8);
    }

    #[test]
    fn out_of_range_gamma_names_interval() {
        for bad in [0.0, 1.0, -0.3, f64::NAN] {
            match g_weights(bad, 4) {
                Err(Error::Domain { interval, .. }) => assert_eq!(interval, "(0, 1)"),
                other => panic!("expected domain error, got {other:?}"),
            }
        }
        for bad in [1.0, 2.0, 0.5] {
            match m_weights(bad, 4) {
                Err(Error::Domain { interval, .. }) => assert_eq!(interval, "(1, 2)"),
                other => panic!("expected domain error, got {other:?}"),
            }
        }
        assert!(matches!(g_weights(0.5, 0), Err(Error::Size(_))));
    }

    #[test]
    fn first_difference_values() {
        let g = g_weights(0.5, 3).unwrap();
        let d = first_difference(&g).unwrap();
        assert_relative_eq!(d[0], -0.58578644, epsilon = 1e-8);
        assert_relative_eq!(d[1], -0.09637631, epsilon = 1e-8);

        let m = m_weights(1.5, 3).unwrap();
        assert_eq!(first_difference(&m).unwrap(), d);

        let g2 = g_weights(0.3, 2).unwrap();
        assert_eq!(first_difference(&g2).unwrap(), vec![g2[1] - 1.0]);
        assert!(first_difference(&g_weights(0.3, 1).unwrap()).is_err());
    }

    #[test]
    fn second_difference_values() {
        let m = m_weights(1.5, 3).unwrap();
        let w = second_difference(&m).unwrap();
        assert_eq!(w.len(), 1);
        assert_relative_eq!(w[0], 0.48941013, epsilon = 1e-8);

        let near_two = m_weights(1.99, 64).unwrap();
        assert!(second_difference(&near_two).unwrap().iter().all(|&x| x > 0.0));

        assert_eq!(diff2(&[1.0, 1.0, 1.0]), vec![0.0]);
        assert!(second_difference(&m_weights(1.5, 2).unwrap()).is_err());
        assert!(second_difference(&g_weights(0.5, 8).unwrap()).is_err());
    }

    #[test]
    fn far_tail_uses_stable_form() {
        // Past the switch the naive difference loses most digits; compare the
        // stable form to a series expansion p k^(p-1) (1 + (p-1)/(2k)).
        let p = 0.3;
        let k = 5_000_000usize;
        let kf = k as f64;
        let series = p * kf.powf(p - 1.0) * (1.0 + (p - 1.0) / (2.0 * kf));
        assert_relative_eq!(power_difference(k, p), series, max_relative = 1e-12);
    }
}
