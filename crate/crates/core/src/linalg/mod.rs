//! Dense real linear algebra: factorizations, the real Schur form, symmetric
//! eigenproblems and the Bartels–Stewart Lyapunov solver.
//!
//! Everything here is a pure function of its inputs.

mod eigen;
mod lyapunov;
mod matrix;
mod schur;
mod solve;

use thiserror::Error;

pub use eigen::{generalized_sym_eigen, sym_eigen, SymEigen};
pub use lyapunov::{lyapunov_residual, solve_lyapunov, solve_lyapunov_schur};
pub use matrix::{dot, norm2, Matrix};
pub use schur::{hessenberg, real_schur, SchurBlock, SchurForm};
pub use solve::{cholesky_solve, lu_solve, Cholesky, Lu};

/// Absolute floor for relative tolerances on (near) zero matrices.
pub const NORM_FLOOR: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not symmetric positive definite (pivot {pivot} = {value:e})")]
    NotSpd { pivot: usize, value: f64 },
    #[error("matrix is singular to working precision (pivot {pivot})")]
    Singular { pivot: usize },
    #[error("QR iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("Lyapunov operator is not stable (spectral abscissa {abscissa:e})")]
    UnstableA { abscissa: f64 },
    #[error("{op}: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        op: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix has non-finite entries")]
    NonFinite,
}
