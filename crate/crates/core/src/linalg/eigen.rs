//! Symmetric eigenproblems by cyclic Jacobi rotations.

use super::{Cholesky, LinalgError, Matrix, NORM_FLOOR};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

pub fn sym_eigen(a: &Matrix) -> Result<SymEigen, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch {
            op: "sym_eigen",
            expected: (a.rows(), a.rows()),
            found: (a.rows(), a.cols()),
        });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.rows();
    let mut w = a.symmetrized();
    let mut v = Matrix::identity(n);
    let scale = w.frobenius_norm().max(NORM_FLOOR);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| w[(i, j)] * w[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-16 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (w[(q, q)] - w[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut w, &mut v, p, q, c, s);
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].total_cmp(&w[(j, j)]));
    let values = order.iter().map(|&i| w[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SymEigen { values, vectors })
}

// Applies the (p, q) rotation J: W <- JᵀWJ, V <- VJ.
fn rotate(w: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = w.rows();
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = c * wkp - s * wkq;
        w[(k, q)] = s * wkp + c * wkq;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = c * wpk - s * wqk;
        w[(q, k)] = s * wpk + c * wqk;
    }
    w[(p, q)] = 0.0;
    w[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Solves `K v = λ M v` for symmetric `K` and SPD `M`; eigenvectors are
/// `M`-orthonormal (`VᵀMV = I`, `VᵀKV = diag(λ)`).
pub fn generalized_sym_eigen(k: &Matrix, m: &Matrix) -> Result<SymEigen, LinalgError> {
    if k.rows() != m.rows() || k.cols() != m.cols() {
        return Err(LinalgError::DimensionMismatch {
            op: "generalized_sym_eigen",
            expected: (m.rows(), m.cols()),
            found: (k.rows(), k.cols()),
        });
    }
    let chol = Cholesky::new(m)?;
    let l = chol.factor();
    // C = L⁻¹ K L⁻ᵀ = L⁻¹ (L⁻¹ K)ᵀ
    let y = forward_solve(l, &k.symmetrized());
    let c = forward_solve(l, &y.transpose()).symmetrized();
    let eig = sym_eigen(&c)?;
    let vectors = backward_solve_t(l, &eig.vectors);
    Ok(SymEigen {
        values: eig.values,
        vectors,
    })
}

// L X = B for lower-triangular L.
fn forward_solve(l: &Matrix, b: &Matrix) -> Matrix {
    let n = l.rows();
    let mut x = b.clone();
    for i in 0..n {
        for k in 0..i {
            let lik = l[(i, k)];
            if lik != 0.0 {
                for j in 0..x.cols() {
                    let v = x[(k, j)];
                    x[(i, j)] -= lik * v;
                }
            }
        }
        let d = l[(i, i)];
        for j in 0..x.cols() {
            x[(i, j)] /= d;
        }
    }
    x
}

// Lᵀ X = B for lower-triangular L.
fn backward_solve_t(l: &Matrix, b: &Matrix) -> Matrix {
    let n = l.rows();
    let mut x = b.clone();
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let lki = l[(k, i)];
            if lki != 0.0 {
                for j in 0..x.cols() {
                    let v = x[(k, j)];
                    x[(i, j)] -= lki * v;
                }
            }
        }
        let d = l[(i, i)];
        for j in 0..x.cols() {
            x[(i, j)] /= d;
        }
    }
    x
}
