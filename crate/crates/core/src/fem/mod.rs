//! Arbitrary-order Lagrange finite elements on uniform 1D meshes and their
//! tensor products on the unit square.

mod assemble;
mod field;
mod lagrange;
mod quadrature;
mod space;

use thiserror::Error;

pub use assemble::{
    assemble_functional, assemble_mass, assemble_stiffness, line_mass, line_stiffness, Load,
};
pub use field::{Evaluation, FemField};
pub use lagrange::{lagrange_eval, BasisTable, LagrangeBasis};
pub use quadrature::{quad_rule, QuadKind, QuadRule};
pub use space::{build_space, BoundaryCondition, DimKind, Domain, FemSpace, LineSpace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("{kind:?} rule cannot have {count} points")]
    InvalidCount { kind: QuadKind, count: usize },
    #[error("node set is empty")]
    EmptyNodes,
    #[error("duplicate interpolation node at index {index}")]
    DuplicateNodes { index: usize },
    #[error("polynomial order must be >= 1, got {0}")]
    InvalidOrder(usize),
    #[error("element count must be >= 1, got {0}")]
    InvalidElementCount(usize),
    #[error("invalid interval ({a}, {b})")]
    InvalidDomain { a: f64, b: f64 },
    #[error("domain does not match the space dimension")]
    DomainKindMismatch,
    #[error("point {point:?} lies outside the domain")]
    PointOutsideDomain { point: Vec<f64> },
    #[error("expected {expected}-dimensional point, got {found}")]
    PointDimension { expected: usize, found: usize },
    #[error("expected {expected} coefficients, got {found}")]
    CoefficientCount { expected: usize, found: usize },
}
