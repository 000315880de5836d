//! Convergence studies: gain errors against references, rate fits, and
//! CSV/SVG output.

mod config;
mod fit;
mod norms;
mod output;
mod run;

use thiserror::Error;

use crate::fem::FemError;
use crate::models::ModelError;

pub use config::{Case, ReferenceSpec, StudyConfig};
pub use fit::{fit_rate, DEFAULT_FLOOR};
pub use norms::{gain_error, ErrorNorm, ERROR_GAUSS_POINTS, ERROR_SUBINTERVALS_1D};
pub use output::{parse_csv, rate_table, to_csv, to_svg, write_csv, write_svg, CSV_HEADER};
pub use run::{run_study, with_thread_cap, CellFailure, StudyResult, StudyRow, THREADS_ENV};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StudyError {
    #[error("gains live on different domains")]
    DomainMismatch,
    #[error("rate fit needs two points above the floor, got {retained}")]
    InsufficientPoints { retained: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Fem(#[from] FemError),
}
