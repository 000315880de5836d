//! Mass, stiffness and load assembly.
//!
//! Every element integral uses the `(k+2)`-point Gauss-Legendre rule. 2D
//! matrices are Kronecker products of the 1D factors.

use super::space::{DimKind, FemSpace, LineSpace};
use super::{quad_rule, FemError, QuadKind};
use crate::linalg::Matrix;

/// Right-hand side of a load assembly.
pub enum Load<'a> {
    /// `b_i = ∫ f φ_i`; `f` receives the point coordinates.
    Density(&'a dyn Fn(&[f64]) -> f64),
    /// `b_i = φ_i(x₀)`.
    PointMass(&'a [f64]),
}

fn element_rule(line: &LineSpace) -> (Vec<f64>, Vec<f64>) {
    let rule = quad_rule(QuadKind::GaussLegendre, line.order() + 2)
        .expect("order + 2 >= 1 is always a valid Gauss count");
    (rule.points, rule.weights)
}

/// Unrestricted 1D (mass, stiffness) matrices over all nodes.
fn line_matrices(line: &LineSpace) -> (Matrix, Matrix) {
    let n = line.n_global();
    let k = line.order();
    let (xi, w) = element_rule(line);
    let table = line.basis().table(&xi);
    let h = line.h();
    let jac = 0.5 * h;
    let mut loc_m = Matrix::zeros(k + 1, k + 1);
    let mut loc_k = Matrix::zeros(k + 1, k + 1);
    for i in 0..=k {
        for j in 0..=k {
            let mut m = 0.0;
            let mut s = 0.0;
            for q in 0..xi.len() {
                m += w[q] * table.values[i][q] * table.values[j][q];
                s += w[q] * table.derivatives[i][q] * table.derivatives[j][q];
            }
            loc_m[(i, j)] = m * jac;
            loc_k[(i, j)] = s / jac;
        }
    }
    let mut mass = Matrix::zeros(n, n);
    let mut stiff = Matrix::zeros(n, n);
    for e in 0..line.n_elem() {
        for i in 0..=k {
            let gi = line.global_index(e, i);
            for j in 0..=k {
                let gj = line.global_index(e, j);
                mass[(gi, gj)] += loc_m[(i, j)];
                stiff[(gi, gj)] += loc_k[(i, j)];
            }
        }
    }
    (mass, stiff)
}

fn restrict(line: &LineSpace, full: &Matrix) -> Matrix {
    full.submatrix(line.free_dofs(), line.free_dofs())
}

/// 1D mass matrix on the free dofs of `line`.
pub fn line_mass(line: &LineSpace) -> Matrix {
    restrict(line, &line_matrices(line).0)
}

/// 1D gradient stiffness matrix on the free dofs of `line`.
pub fn line_stiffness(line: &LineSpace) -> Matrix {
    restrict(line, &line_matrices(line).1)
}

/// `M_ij = ∫ φ_i φ_j` on the free dofs.
pub fn assemble_mass(space: &FemSpace) -> Matrix {
    let m1 = line_mass(space.line());
    match space.dim() {
        DimKind::OneD => m1,
        DimKind::TwoDTensor => m1.kron(&m1),
    }
}

/// `K_ij = ∫ ∇φ_i · ∇φ_j` on the free dofs.
pub fn assemble_stiffness(space: &FemSpace) -> Matrix {
    let (m_full, k_full) = line_matrices(space.line());
    let m1 = restrict(space.line(), &m_full);
    let k1 = restrict(space.line(), &k_full);
    match space.dim() {
        DimKind::OneD => k1,
        DimKind::TwoDTensor => {
            let mut k2 = k1.kron(&m1);
            k2.axpy(1.0, &m1.kron(&k1));
            k2
        }
    }
}

/// Load vector on the free dofs.
pub fn assemble_functional(space: &FemSpace, load: &Load<'_>) -> Result<Vec<f64>, FemError> {
    match load {
        Load::Density(f) => Ok(density_load(space, *f)),
        Load::PointMass(x0) => point_load(space, x0),
    }
}

fn density_load(space: &FemSpace, f: &dyn Fn(&[f64]) -> f64) -> Vec<f64> {
    let line = space.line();
    let k = line.order();
    let (xi, w) = element_rule(line);
    let table = line.basis().table(&xi);
    let jac = 0.5 * line.h();
    let n1 = line.n_global();
    match space.dim() {
        DimKind::OneD => {
            let mut full = vec![0.0; n1];
            for e in 0..line.n_elem() {
                let (x0, x1) = line.element_bounds(e);
                let mid = 0.5 * (x0 + x1);
                let fq: Vec<f64> = xi.iter().map(|t| f(&[mid + jac * t])).collect();
                for i in 0..=k {
                    let s: f64 = (0..xi.len()).map(|q| w[q] * fq[q] * table.values[i][q]).sum();
                    full[line.global_index(e, i)] += s * jac;
                }
            }
            line.free_dofs().iter().map(|&g| full[g]).collect()
        }
        DimKind::TwoDTensor => {
            let mut full = vec![0.0; n1 * n1];
            let nq = xi.len();
            let mut fq = vec![0.0; nq * nq];
            for ey in 0..line.n_elem() {
                let (y0, y1) = line.element_bounds(ey);
                let ym = 0.5 * (y0 + y1);
                for ex in 0..line.n_elem() {
                    let (x0, x1) = line.element_bounds(ex);
                    let xm = 0.5 * (x0 + x1);
                    for qy in 0..nq {
                        for qx in 0..nq {
                            fq[qy * nq + qx] =
                                w[qx] * w[qy] * f(&[xm + jac * xi[qx], ym + jac * xi[qy]]);
                        }
                    }
                    for iy in 0..=k {
                        for ix in 0..=k {
                            let mut s = 0.0;
                            for qy in 0..nq {
                                let vy = table.values[iy][qy];
                                for qx in 0..nq {
                                    s += fq[qy * nq + qx] * table.values[ix][qx] * vy;
                                }
                            }
                            let g = line.global_index(ey, iy) * n1 + line.global_index(ex, ix);
                            full[g] += s * jac * jac;
                        }
                    }
                }
            }
            restrict_tensor_vec(line, &full)
        }
    }
}

fn restrict_tensor_vec(line: &LineSpace, full: &[f64]) -> Vec<f64> {
    let n1 = line.n_global();
    let mut out = Vec::with_capacity(line.n_free().pow(2));
    for &gy in line.free_dofs() {
        for &gx in line.free_dofs() {
            out.push(full[gy * n1 + gx]);
        }
    }
    out
}

fn line_point_values(line: &LineSpace, x: f64) -> Result<Vec<f64>, FemError> {
    let (e, xi) = line.locate(x)?;
    let k = line.order();
    let mut v = vec![0.0; k + 1];
    let mut d = vec![0.0; k + 1];
    line.basis().eval_into(xi, &mut v, &mut d);
    let mut full = vec![0.0; line.n_global()];
    for i in 0..=k {
        full[line.global_index(e, i)] = v[i];
    }
    Ok(full)
}

fn point_load(space: &FemSpace, x0: &[f64]) -> Result<Vec<f64>, FemError> {
    let line = space.line();
    let expected = match space.dim() {
        DimKind::OneD => 1,
        DimKind::TwoDTensor => 2,
    };
    if x0.len() != expected {
        return Err(FemError::PointDimension {
            expected,
            found: x0.len(),
        });
    }
    let outside = || FemError::PointOutsideDomain { point: x0.to_vec() };
    match space.dim() {
        DimKind::OneD => {
            let full = line_point_values(line, x0[0]).map_err(|_| outside())?;
            Ok(line.free_dofs().iter().map(|&g| full[g]).collect())
        }
        DimKind::TwoDTensor => {
            let vx = line_point_values(line, x0[0]).map_err(|_| outside())?;
            let vy = line_point_values(line, x0[1]).map_err(|_| outside())?;
            let n1 = line.n_global();
            let mut full = vec![0.0; n1 * n1];
            for (gy, y) in vy.iter().enumerate() {
                for (gx, x) in vx.iter().enumerate() {
                    full[gy * n1 + gx] = x * y;
                }
            }
            Ok(restrict_tensor_vec(line, &full))
        }
    }
}
