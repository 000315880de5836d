use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ModelError, Profile};
use crate::fem::{
    assemble_mass, assemble_stiffness, build_space, BoundaryCondition, DimKind, Domain, FemSpace,
};
use crate::linalg::{cholesky_solve, Cholesky, Matrix};
use crate::riccati::CareProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Thermal1d,
    Thermal2d,
    Wave,
}

/// `M ż = K z + b u`, `y = C z`, written as `ż = A z + B u`.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub kind: ModelKind,
    /// Mass matrix (block diagonal for the wave model).
    pub mass: Matrix,
    /// `M⁻¹K`.
    pub a: Matrix,
    /// `M⁻¹b` as an `n × 1` matrix.
    pub b: Matrix,
    /// Observation rows acting on coefficients.
    pub c: Matrix,
    pub r: Matrix,
    /// One space per state component.
    pub spaces: Vec<Arc<FemSpace>>,
    pub(crate) mass_chol: Cholesky,
}

impl StateSpace {
    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn care_problem(&self) -> Result<CareProblem, ModelError> {
        Ok(CareProblem::from_lqr(&self.a, &self.b, &self.c, &self.r)?)
    }

    /// Size of one state component.
    pub fn component_len(&self) -> usize {
        self.dim() / self.spaces.len()
    }
}

fn positive(name: &str, v: f64) -> Result<(), ModelError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn thermal_on_space(
    kind: ModelKind,
    space: FemSpace,
    alpha: f64,
    beta: f64,
    b: Profile,
    q: Profile,
    r_weight: f64,
) -> Result<StateSpace, ModelError> {
    positive("alpha", alpha)?;
    positive("beta", beta)?;
    positive("r", r_weight)?;
    let mass = assemble_mass(&space);
    let mut k_model = assemble_stiffness(&space).scale(-alpha);
    k_model.axpy(-beta, &mass);
    let mass_chol = Cholesky::new(&mass)?;
    let a = mass_chol.solve(&k_model);
    let b_vec = mass_chol.solve_vec(&b.load(&space)?);
    let c = Matrix::row(&q.load(&space)?);
    Ok(StateSpace {
        kind,
        mass,
        a,
        b: Matrix::column(&b_vec),
        c,
        r: Matrix::from_rows(&[vec![r_weight]]),
        spaces: vec![Arc::new(space)],
        mass_chol,
    })
}

/// Neumann heat equation `z_t = α z_xx − β z + b u` on `(−1, 1)` with `R = 1`.
pub fn thermal1d_model(
    n: usize,
    k: usize,
    alpha: f64,
    beta: f64,
    b: Profile,
    q: Profile,
) -> Result<StateSpace, ModelError> {
    let space = build_space(DimKind::OneD, k, n, Domain::Interval(-1.0, 1.0), BoundaryCondition::Neumann)?;
    thermal_on_space(ModelKind::Thermal1d, space, alpha, beta, b, q, 1.0)
}

/// Neumann heat equation on the unit square with tensor elements.
pub fn thermal2d_model(
    n: usize,
    k: usize,
    alpha: f64,
    beta: f64,
    b: Profile,
    q: Profile,
    r_weight: f64,
) -> Result<StateSpace, ModelError> {
    let space = build_space(DimKind::TwoDTensor, k, n, Domain::UnitSquare, BoundaryCondition::Neumann)?;
    thermal_on_space(ModelKind::Thermal2d, space, alpha, beta, b, q, r_weight)
}

/// Parameters of the damped wave model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub c: f64,
    pub gamma: f64,
    pub b1: Profile,
    pub b2: Profile,
    pub q1: Profile,
    pub q2: Profile,
    pub beta_weight: f64,
}

/// `v_t = w + b₁u`, `w_t = c² v_xx − γw + b₂u` on `(−1, 1)` with
/// homogeneous Dirichlet conditions; state `(v, w)`.
pub fn wave_model(n: usize, k: usize, p: &WaveParams) -> Result<StateSpace, ModelError> {
    positive("c", p.c)?;
    positive("gamma", p.gamma)?;
    positive("beta_weight", p.beta_weight)?;
    let space = build_space(DimKind::OneD, k, n, Domain::Interval(-1.0, 1.0), BoundaryCondition::Dirichlet)?;
    let m = assemble_mass(&space);
    let kg = assemble_stiffness(&space);
    let nf = space.n_free();
    let mk = cholesky_solve(&m, &kg)?;
    let mut a = Matrix::zeros(2 * nf, 2 * nf);
    for i in 0..nf {
        a[(i, nf + i)] = 1.0;
        a[(nf + i, nf + i)] = -p.gamma;
        for j in 0..nf {
            a[(nf + i, j)] = -p.c * p.c * mk[(i, j)];
        }
    }
    let mut mass = Matrix::zeros(2 * nf, 2 * nf);
    for i in 0..nf {
        for j in 0..nf {
            mass[(i, j)] = m[(i, j)];
            mass[(nf + i, nf + j)] = m[(i, j)];
        }
    }
    let mass_chol = Cholesky::new(&mass)?;
    let mut load = p.b1.load(&space)?;
    load.extend(p.b2.load(&space)?);
    let b = mass_chol.solve_vec(&load);
    let mut c = Matrix::zeros(2, 2 * nf);
    for (i, v) in p.q1.load(&space)?.into_iter().enumerate() {
        c[(0, i)] = v;
    }
    for (i, v) in p.q2.load(&space)?.into_iter().enumerate() {
        c[(1, nf + i)] = v;
    }
    let space = Arc::new(space);
    Ok(StateSpace {
        kind: ModelKind::Wave,
        mass,
        a,
        b: Matrix::column(&b),
        c,
        r: Matrix::from_rows(&[vec![p.beta_weight]]),
        spaces: vec![space.clone(), space],
        mass_chol,
    })
}
