//! Fast finite-difference solvers for differential equations with a Caputo
//! fractional derivative in time.
//!
//! The crate is organised bottom-up:
//!
//! - [`weights`]: the power-difference coefficient sequences `G_k` and `M_k`
//!   that every discretization is built from.
//! - [`toeplitz`]: Toeplitz and block-Toeplitz operators with circulant
//!   embedding and an in-house radix-2 FFT, giving `O(n log n)` products.
//! - [`krylov`]: CG and restarted GMRES over the [`LinearOperator`] contract,
//!   plus dense LU and tridiagonal oracles.
//! - [`schemes`]: assembly and solution of the four discretizations, each with
//!   a reference path and a fast structured path.
//! - [`harness`]: manufactured problems, convergence and timing drivers, CSV
//!   and Markdown emitters.

pub mod error;
pub mod harness;
pub mod krylov;
pub mod operator;
pub mod schemes;
pub mod toeplitz;
pub mod weights;

pub use error::{Error, Result};
pub use krylov::{
    cg_solve, dense_solve, gmres_solve, tridiagonal_solve, DenseMatrix, KrylovResult,
    SolverConfig,
};
pub use operator::LinearOperator;
pub use schemes::{
    Method, ProblemSpec, SchemeConstants, SchemeKind, SolutionGrid, SolveReport,
};
pub use toeplitz::{
    BlockTridiagonalToeplitz, CirculantSpectrum, Direction, Fft, Structure, ToeplitzOperator,
};
pub use weights::{WeightKind, WeightSequence};
