//! Cholesky and partially pivoted LU factorizations.

use super::{LinalgError, Matrix, NORM_FLOOR};

/// Relative pivot threshold shared by both factorizations.
const PIVOT_TOL: f64 = 1e-14;

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    pub fn new(a: &Matrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::DimensionMismatch {
                op: "cholesky",
                expected: (a.rows(), a.rows()),
                found: (a.rows(), a.cols()),
            });
        }
        let n = a.rows();
        let tol = PIVOT_TOL * a.frobenius_norm().max(NORM_FLOOR);
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let lj = l.row_slice(j)[..j].to_vec();
            let d = a[(j, j)] - lj.iter().map(|v| v * v).sum::<f64>();
            if !(d > tol) {
                return Err(LinalgError::NotSpd { pivot: j, value: d });
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in (j + 1)..n {
                let li = &l.row_slice(i)[..j];
                let s: f64 = li.iter().zip(&lj).map(|(x, y)| x * y).sum();
                l[(i, j)] = (a[(i, j)] - s) / djj;
            }
        }
        Ok(Self { l })
    }

    pub fn factor(&self) -> &Matrix {
        &self.l
    }

    pub fn smallest_pivot(&self) -> f64 {
        self.l.diagonal().into_iter().map(|d| d * d).fold(f64::INFINITY, f64::min)
    }

    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.rows();
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let row = self.l.row_slice(i);
            let s: f64 = row[..i].iter().zip(&y[..i]).map(|(a, v)| a * v).sum();
            y[i] = (y[i] - s) / row[i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.l[(k, i)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        y
    }

    pub fn solve(&self, b: &Matrix) -> Matrix {
        let n = self.l.rows();
        assert_eq!(b.rows(), n);
        let m = b.cols();
        let mut x = b.clone();
        // forward: L Y = B, rows updated in place
        for i in 0..n {
            for k in 0..i {
                let lik = self.l[(i, k)];
                if lik == 0.0 {
                    continue;
                }
                let (head, tail) = x.as_mut_slice().split_at_mut(i * m);
                let src = &head[k * m..(k + 1) * m];
                for (d, s) in tail[..m].iter_mut().zip(src) {
                    *d -= lik * s;
                }
            }
            let inv = 1.0 / self.l[(i, i)];
            for v in &mut x.as_mut_slice()[i * m..(i + 1) * m] {
                *v *= inv;
            }
        }
        // backward: Lᵀ X = Y
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let lki = self.l[(k, i)];
                if lki == 0.0 {
                    continue;
                }
                let (head, tail) = x.as_mut_slice().split_at_mut(k * m);
                let dst = &mut head[i * m..(i + 1) * m];
                for (d, s) in dst.iter_mut().zip(&tail[..m]) {
                    *d -= lki * s;
                }
            }
            let inv = 1.0 / self.l[(i, i)];
            for v in &mut x.as_mut_slice()[i * m..(i + 1) * m] {
                *v *= inv;
            }
        }
        x
    }
}

/// Solves `A X = B` for symmetric positive definite `A`.
pub fn cholesky_solve(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if b.rows() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "cholesky_solve",
            expected: (a.rows(), b.cols()),
            found: (b.rows(), b.cols()),
        });
    }
    Ok(Cholesky::new(a)?.solve(b))
}

/// `P A = L U` with unit-lower `L` and `U` packed into one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &Matrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::DimensionMismatch {
                op: "lu",
                expected: (a.rows(), a.rows()),
                found: (a.rows(), a.cols()),
            });
        }
        let n = a.rows();
        let tol = PIVOT_TOL * a.norm_inf().max(NORM_FLOOR);
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(pmax > tol) {
                return Err(LinalgError::Singular { pivot: k });
            }
            if p != k {
                perm.swap(p, k);
                let data = lu.as_mut_slice();
                for j in 0..n {
                    data.swap(k * n + j, p * n + j);
                }
            }
            let pivot = lu[(k, k)];
            let data = lu.as_mut_slice();
            let (head, tail) = data.split_at_mut((k + 1) * n);
            let prow = &head[k * n + k + 1..k * n + n];
            for row in tail.chunks_exact_mut(n) {
                let l = row[k] / pivot;
                row[k] = l;
                if l != 0.0 {
                    for (d, s) in row[k + 1..].iter_mut().zip(prow) {
                        *d -= l * s;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row_slice(i);
            let s: f64 = row[..i].iter().zip(&y[..i]).map(|(a, v)| a * v).sum();
            y[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row_slice(i);
            let s: f64 = row[i + 1..].iter().zip(&y[i + 1..]).map(|(a, v)| a * v).sum();
            y[i] = (y[i] - s) / row[i];
        }
        y
    }

    pub fn solve(&self, b: &Matrix) -> Matrix {
        let mut x = Matrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            x.set_col(j, &self.solve_vec(&b.col_vec(j)));
        }
        x
    }
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn lu_solve(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if b.rows() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "lu_solve",
            expected: (a.rows(), b.cols()),
            found: (b.rows(), b.cols()),
        });
    }
    Ok(Lu::new(a)?.solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    #[test]
    fn cholesky_identity_returns_rhs() {
        let b = Matrix::from_rows(&[vec![1.0, -2.0], vec![3.5, 0.25], vec![7.0, 1e-3]]);
        let x = cholesky_solve(&Matrix::identity(3), &b).unwrap();
        assert!(close(&x, &b, 0.0));
    }

    #[test]
    fn cholesky_two_by_two_inverse() {
        let a = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let x = cholesky_solve(&a, &Matrix::identity(2)).unwrap();
        let expected = Matrix::from_rows(&[vec![0.375, -0.25], vec![-0.25, 0.5]]);
        assert!(close(&x, &expected, 1e-15));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(
            cholesky_solve(&a, &Matrix::identity(2)),
            Err(LinalgError::NotSpd { pivot: 0, .. })
        ));
    }

    #[test]
    fn lu_cases() {
        let b = Matrix::column(&[3.0, -1.0, 2.0]);
        assert!(close(&lu_solve(&Matrix::identity(3), &b).unwrap(), &b, 0.0));

        let x = lu_solve(&Matrix::diag(&[2.0, 4.0]), &Matrix::column(&[2.0, 4.0])).unwrap();
        assert_eq!(x.col_vec(0), vec![1.0, 1.0]);

        let singular = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(matches!(
            lu_solve(&singular, &Matrix::column(&[1.0, 2.0])),
            Err(LinalgError::Singular { .. })
        ));
    }

    #[test]
    fn lu_needs_pivoting() {
        let a = Matrix::from_rows(&[vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]]);
        let b = Matrix::column(&[1.0, 2.0, 3.0]);
        let x = lu_solve(&a, &b).unwrap();
        assert!(close(&a.matmul(&x), &b, 1e-14));
    }
}
