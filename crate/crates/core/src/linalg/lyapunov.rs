//! Bartels–Stewart solver for the continuous Lyapunov equation
//! `AᵀX + XA + Q = 0`.

use super::schur::{real_schur, SchurBlock, SchurForm};
use super::{lu_solve, LinalgError, Matrix};

/// Eigenvalues with real part at or above this are rejected.
const STABILITY_MARGIN: f64 = -1e-12;

/// Solves `AᵀX + XA + Q = 0` for stable `A` and symmetric `Q`.
pub fn solve_lyapunov(a: &Matrix, q: &Matrix) -> Result<Matrix, LinalgError> {
    let schur = real_schur(a)?;
    solve_lyapunov_schur(&schur, q)
}

/// Same as [`solve_lyapunov`] with a precomputed Schur form of `A`.
pub fn solve_lyapunov_schur(schur: &SchurForm, q: &Matrix) -> Result<Matrix, LinalgError> {
    let n = schur.t.rows();
    if q.rows() != n || q.cols() != n {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_lyapunov",
            expected: (n, n),
            found: (q.rows(), q.cols()),
        });
    }
    let abscissa = schur.spectral_abscissa();
    if n > 0 && abscissa >= STABILITY_MARGIN {
        return Err(LinalgError::UnstableA { abscissa });
    }

    let u = &schur.q;
    let t = &schur.t;
    // Tᵀ Y + Y T + C = 0 with C = Uᵀ Q U, Y = Uᵀ X U
    let c = u.t_matmul(&q.matmul(u));
    let blocks = schur.blocks();
    let mut y = Matrix::zeros(n, n);

    for (jb, bj) in blocks.iter().enumerate() {
        for bi in blocks.iter().take(jb + 1) {
            let rhs = block_rhs(t, &c, &y, bi, bj);
            let sol = solve_small(t, bi, bj, &rhs)?;
            for p in 0..bi.size {
                for r in 0..bj.size {
                    let v = sol[p * bj.size + r];
                    y[(bi.start + p, bj.start + r)] = v;
                    y[(bj.start + r, bi.start + p)] = v;
                }
            }
        }
    }

    let x = u.matmul(&y).matmul(&u.transpose());
    Ok(x.symmetrized())
}

/// `-C_IJ - Σ_{k<I} T_kIᵀ Y_kJ - Σ_{k<J} Y_Ik T_kJ`, row-major `size_i x size_j`.
fn block_rhs(t: &Matrix, c: &Matrix, y: &Matrix, bi: &SchurBlock, bj: &SchurBlock) -> Vec<f64> {
    let mut out = vec![0.0; bi.size * bj.size];
    for p in 0..bi.size {
        let row = bi.start + p;
        for r in 0..bj.size {
            let col = bj.start + r;
            let mut s = -c[(row, col)];
            for k in 0..bi.start {
                s -= t[(k, row)] * y[(k, col)];
            }
            for k in 0..bj.start {
                s -= y[(row, k)] * t[(k, col)];
            }
            out[p * bj.size + r] = s;
        }
    }
    out
}

/// Solves `T_IIᵀ Z + Z T_JJ = R` for the small block `Z`.
fn solve_small(
    t: &Matrix,
    bi: &SchurBlock,
    bj: &SchurBlock,
    rhs: &[f64],
) -> Result<Vec<f64>, LinalgError> {
    let (p, q) = (bi.size, bj.size);
    if p == 1 && q == 1 {
        let d = t[(bi.start, bi.start)] + t[(bj.start, bj.start)];
        if d == 0.0 {
            return Err(LinalgError::Singular { pivot: bi.start });
        }
        return Ok(vec![rhs[0] / d]);
    }
    // unknown z[a*q + b] = Z[a][b]
    let m = p * q;
    let mut k = Matrix::zeros(m, m);
    for a in 0..p {
        for b in 0..q {
            let row = a * q + b;
            // (T_IIᵀ Z)[a][b] = Σ_c T_II[c][a] Z[c][b]
            for cc in 0..p {
                k[(row, cc * q + b)] += t[(bi.start + cc, bi.start + a)];
            }
            // (Z T_JJ)[a][b] = Σ_d Z[a][d] T_JJ[d][b]
            for d in 0..q {
                k[(row, a * q + d)] += t[(bj.start + d, bj.start + b)];
            }
        }
    }
    let z = lu_solve(&k, &Matrix::column(rhs))?;
    Ok(z.into_vec())
}

/// Residual `‖AᵀX + XA + Q‖_F`.
pub fn lyapunov_residual(a: &Matrix, x: &Matrix, q: &Matrix) -> f64 {
    let ax = x.matmul(a);
    let mut r = ax.transpose();
    r.axpy(1.0, &ax);
    r.axpy(1.0, q);
    r.frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar() {
        let x = solve_lyapunov(&Matrix::from_rows(&[vec![-1.0]]), &Matrix::from_rows(&[vec![2.0]]))
            .unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_decouples() {
        let a = Matrix::diag(&[-1.0, -2.0]);
        let x = solve_lyapunov(&a, &Matrix::identity(2)).unwrap();
        let expected = Matrix::diag(&[0.5, 0.25]);
        assert!((&x - &expected).frobenius_norm() < 1e-15);
    }

    #[test]
    fn complex_pair_block() {
        let a = Matrix::from_rows(&[vec![-0.5, 2.0], vec![-2.0, -0.5]]);
        let q = Matrix::from_rows(&[vec![1.0, 0.3], vec![0.3, 2.0]]);
        let x = solve_lyapunov(&a, &q).unwrap();
        assert!(lyapunov_residual(&a, &x, &q) < 1e-13);
    }

    #[test]
    fn unstable_is_rejected() {
        let a = Matrix::diag(&[-1.0, 0.5]);
        assert!(matches!(
            solve_lyapunov(&a, &Matrix::identity(2)),
            Err(LinalgError::UnstableA { .. })
        ));
        let marginal = Matrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        assert!(solve_lyapunov(&marginal, &Matrix::identity(2)).is_err());
    }
}
