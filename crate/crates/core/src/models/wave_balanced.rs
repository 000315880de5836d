//! Damped-wave CARE in balanced modal coordinates.
//!
//! With `KV = MVΛ`, `VᵀMV = I` and `ωᵢ = c√λᵢ`, the change of variables
//! `v = V diag(1/ω) ξ`, `w = V η` turns each mode into the normal block
//! `[[0, ω], [−ω, −γ]]`. The physical block `[[0, 1], [−ω², −γ]]` is badly
//! scaled once ω reaches the thousands (single high-order element), which
//! wrecks the small Bartels–Stewart solves.

use super::{GainFunction, ModelError, WaveParams};
use crate::fem::{assemble_mass, assemble_stiffness, build_space, BoundaryCondition, DimKind, Domain, FemField};
use crate::linalg::{generalized_sym_eigen, Matrix};
use crate::riccati::{solve_care, CareOptions, CareProblem};
use std::sync::Arc;

/// Infinite-horizon wave gain `κ̂ = R⁻¹BᵀPM⁻¹`, solved in balanced modal
/// coordinates and mapped back to the nodal basis.
pub fn wave_gain_balanced(n: usize, k: usize, p: &WaveParams, opts: &CareOptions) -> Result<GainFunction, ModelError> {
    for (name, v) in [("c", p.c), ("gamma", p.gamma), ("beta_weight", p.beta_weight)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ModelError::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    let space = Arc::new(build_space(DimKind::OneD, k, n, Domain::Interval(-1.0, 1.0), BoundaryCondition::Dirichlet)?);
    let eig = generalized_sym_eigen(&assemble_stiffness(&space), &assemble_mass(&space))?;
    let v = &eig.vectors;
    let m = space.n_free();
    let omega: Vec<f64> = eig.values.iter().map(|l| p.c * l.max(0.0).sqrt()).collect();

    let mut a = Matrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        a[(i, m + i)] = omega[i];
        a[(m + i, i)] = -omega[i];
        a[(m + i, m + i)] = -p.gamma;
    }
    let b1 = v.t_matvec(&p.b1.load(&space)?);
    let b2 = v.t_matvec(&p.b2.load(&space)?);
    let mut b = Matrix::zeros(2 * m, 1);
    for i in 0..m {
        b[(i, 0)] = omega[i] * b1[i];
        b[(m + i, 0)] = b2[i];
    }
    let q1 = v.t_matvec(&p.q1.load(&space)?);
    let q2 = v.t_matvec(&p.q2.load(&space)?);
    let mut c = Matrix::zeros(2, 2 * m);
    for i in 0..m {
        c[(0, i)] = q1[i] / omega[i];
        c[(1, m + i)] = q2[i];
    }
    let r = Matrix::from_rows(&[vec![p.beta_weight]]);
    let problem = CareProblem::from_lqr(&a, &b, &c, &r)?;
    let sol = solve_care(&problem, opts)?;

    let pb = sol.p.matvec(&b.col_vec(0));
    let xi: Vec<f64> = (0..m).map(|i| omega[i] * pb[i] / p.beta_weight).collect();
    let eta: Vec<f64> = (0..m).map(|i| pb[m + i] / p.beta_weight).collect();
    let k1 = v.matvec(&xi);
    let k2 = v.matvec(&eta);
    GainFunction::new(vec![FemField::new(space.clone(), k1)?, FemField::new(space, k2)?])
}
