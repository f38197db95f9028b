//! Manufactured problems with closed-form solutions.

use std::f64::consts::PI;

use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{Error, Result};
use crate::schemes::{ProblemSpec, SchemeKind};

/// Scheme exercised by example `id`.
pub fn example_scheme(id: u8) -> Result<SchemeKind> {
    match id {
        1 => Ok(SchemeKind::Ode2Sided),
        2 => Ok(SchemeKind::Hyperbolic),
        3 => Ok(SchemeKind::DiffusionWave),
        4 => Ok(SchemeKind::Diffusion),
        _ => Err(Error::Config(format!("unknown example {id}, expected 1..4"))),
    }
}

/// Exact solution `u(x, t)` of example `id`.
pub fn example_exact(id: u8) -> Result<fn(f64, f64) -> f64> {
    example_scheme(id)?;
    Ok(match id {
        1 => |_, t| t * (1.0 - t),
        2 => |x, t| t * (PI * x).sin(),
        3 => |x, t| t.powi(3) * x * (1.0 - x),
        _ => |x, t| t.powi(3) * (PI * x).sin(),
    })
}

/// Example `id` on a unit domain with `n_time` steps and `m_space` cells
/// (ignored for the ODE), with forcing and exact solution attached.
pub fn example_problem(id: u8, gamma: f64, n_time: usize, m_space: usize) -> Result<ProblemSpec> {
    let scheme = example_scheme(id)?;
    let exact = example_exact(id)?;
    let g2 = gamma_fn(2.0 - gamma);
    let g3 = gamma_fn(3.0 - gamma);
    let g4 = gamma_fn(4.0 - gamma);
    let spec = ProblemSpec::new(scheme, gamma, n_time, m_space).with_exact(exact);
    let spec = match id {
        1 => {
            // left and right Caputo derivatives of t(1-t) mirror each other
            let side = move |s: f64| s.powf(1.0 - gamma) / g2 - 2.0 * s.powf(2.0 - gamma) / g3;
            spec.with_forcing(move |_, t| side(t) + side(1.0 - t) + t * (1.0 - t))
        }
        2 => spec.with_forcing(move |x, t| {
            t.powf(1.0 - gamma) / g2 * (PI * x).sin() + PI * t * (PI * x).cos()
        }),
        3 => spec.with_forcing(move |x, t| {
            6.0 * t.powf(3.0 - gamma) / g4 * (x - x * x) + t.powi(3) * (1.0 - 2.0 * x)
        }),
        _ => spec.with_forcing(move |x, t| {
            6.0 * t.powf(3.0 - gamma) / g4 * (PI * x).sin() + PI * PI * t.powi(3) * (PI * x).sin()
        }),
    };
    spec.validate()?;
    Ok(spec)
}
