//! Algebraic and differential Riccati equations.

mod care;
mod dre;

use thiserror::Error;

use crate::linalg::LinalgError;

pub use care::{
    care_oracle, care_residual, solve_care, CareOptions, CareProblem, CareSolution, DEFAULT_CARE_TOL,
    DEFAULT_MAX_ITER,
};
pub use dre::{dre_solve, DreConfig, DreTrajectory, DEFAULT_STEP_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiccatiError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{0}")]
    Dimension(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("closed loop not stable at Newton step {iteration} (abscissa {abscissa:e})")]
    NotStabilizing { iteration: usize, abscissa: f64 },
    #[error("Newton did not converge in {iterations} steps (relative residual {relative_residual:e})")]
    MaxIterExceeded { iterations: usize, relative_residual: f64 },
    #[error("no stationary point reached within horizon {horizon}")]
    HorizonExceeded { horizon: f64 },
    #[error("implicit step {step} rejected (relative residual {relative_residual:e})")]
    StepRejected { step: usize, relative_residual: f64 },
}
