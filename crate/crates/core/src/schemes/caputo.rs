//! Discrete left- and right-sided Caputo derivatives of order `0 < gamma < 1`
//! on a uniform grid (L1 formula).

use statrs::function::gamma::gamma as gamma_fn;

use crate::error::Result;
use crate::weights::g_weights;

/// Left Caputo derivative at `t_n` from samples `u_0, ..., u_n`:
///
/// `mu [G_0 u_n - sum_{k=1}^{n-1} (G_{n-k-1} - G_{n-k}) u_k - G_{n-1} u_0]`
///
/// with `mu = tau^-gamma / Gamma(2 - gamma)`. The bracket weights sum to zero,
/// so constants are annihilated.
pub fn caputo_left_apply(gamma: f64, u: &[f64], tau: f64) -> Result<f64> {
    let g = g_weights(gamma, u.len().max(1))?;
    if u.len() < 2 {
        return Ok(0.0);
    }
    let n = u.len() - 1;
    let mu = tau.powf(-gamma) / gamma_fn(2.0 - gamma);
    let mut acc = g[0] * u[n];
    for k in 1..n {
        acc -= (g[n - k - 1] - g[n - k]) * u[k];
    }
    acc -= g[n - 1] * u[0];
    Ok(mu * acc)
}

/// Right Caputo derivative at `t_n` from samples `u_n, ..., u_N`:
///
/// `mu [G_0 u_n - sum_{m=n+1}^{N-1} (G_{m-n-1} - G_{m-n}) u_m - G_{N-n-1} u_N]`.
pub fn caputo_right_apply(gamma: f64, u: &[f64], tau: f64) -> Result<f64> {
    let g = g_weights(gamma, u.len().max(1))?;
    if u.len() < 2 {
        return Ok(0.0);
    }
    let last = u.len() - 1;
    let mu = tau.powf(-gamma) / gamma_fn(2.0 - gamma);
    let mut acc = g[0] * u[0];
    for j in 1..last {
        acc -= (g[j - 1] - g[j]) * u[j];
    }
    acc -= g[last - 1] * u[last];
    Ok(mu * acc)
}
