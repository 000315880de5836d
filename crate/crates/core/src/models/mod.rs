//! The scalar, heat and damped-wave control systems, their functional gains
//! and high-resolution references.

mod gain;
mod modal;
mod profiles;
mod scalar;
mod spec;
mod statespace;
mod wave_balanced;

use thiserror::Error;

use crate::fem::FemError;
use crate::linalg::LinalgError;
use crate::riccati::RiccatiError;

pub use gain::{gain_from_care, gain_trajectory, GainFunction, GainTrajectory};
pub use modal::{thermal2d_gain_modal, ModalSolution, Thermal2dParams};
pub use profiles::{bump1d, bump2d, gaussian2d, Profile};
pub use scalar::{default_eps_grid, log_grid, scalar_sigma, scalar_study, ScalarSystem};
pub use spec::{reference_1d, ModelSpec, Thermal1dParams, MAX_REFERENCE_ORDER, MODAL_MODE_CAP};
pub use wave_balanced::wave_gain_balanced;
pub use statespace::{thermal1d_model, thermal2d_model, wave_model, ModelKind, StateSpace, WaveParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown profile '{0}'")]
    UnknownProfile(String),
    #[error("{0}")]
    Dimension(String),
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Riccati(#[from] RiccatiError),
}
