//! Real Schur decomposition: Householder reduction to Hessenberg form, then
//! implicit Francis double-shift QR.

use super::{LinalgError, Matrix, NORM_FLOOR};

const DEFLATION_TOL: f64 = 1e-14;

/// `A = Q T Qᵀ` with `Q` orthogonal and `T` quasi-upper-triangular.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: Matrix,
    pub t: Matrix,
}

/// A diagonal block of `T`: its starting index and size (1 or 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchurBlock {
    pub start: usize,
    pub size: usize,
}

impl SchurForm {
    pub fn blocks(&self) -> Vec<SchurBlock> {
        let n = self.t.rows();
        let mut out = Vec::new();
        let mut i = 0;
        while i < n {
            if i + 1 < n && self.t[(i + 1, i)] != 0.0 {
                out.push(SchurBlock { start: i, size: 2 });
                i += 2;
            } else {
                out.push(SchurBlock { start: i, size: 1 });
                i += 1;
            }
        }
        out
    }

    /// Eigenvalues as `(re, im)` pairs, in block order.
    pub fn eigenvalues(&self) -> Vec<(f64, f64)> {
        let t = &self.t;
        let mut out = Vec::with_capacity(t.rows());
        for b in self.blocks() {
            let i = b.start;
            if b.size == 1 {
                out.push((t[(i, i)], 0.0));
            } else {
                let (a, bb, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
                let half_tr = 0.5 * (a + d);
                let p = 0.5 * (a - d);
                let disc = p * p + bb * c;
                if disc >= 0.0 {
                    let r = disc.sqrt();
                    out.push((half_tr + r, 0.0));
                    out.push((half_tr - r, 0.0));
                } else {
                    let im = (-disc).sqrt();
                    out.push((half_tr, im));
                    out.push((half_tr, -im));
                }
            }
        }
        out
    }

    /// Largest real part over the spectrum.
    pub fn spectral_abscissa(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .map(|(re, _)| re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Reflector `I - tau v vᵀ` with `v[0] = 1` mapping `x` onto `beta e₁`.
fn householder(x: &[f64]) -> (Vec<f64>, f64, f64) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut v = vec![0.0; x.len()];
    v[0] = 1.0;
    if norm == 0.0 {
        return (v, 0.0, 0.0);
    }
    let beta = if x[0] >= 0.0 { -norm } else { norm };
    let u0 = x[0] - beta;
    let mut vv = 1.0;
    for i in 1..x.len() {
        v[i] = x[i] / u0;
        vv += v[i] * v[i];
    }
    (v, 2.0 / vv, beta)
}

/// `rows[r0..r0+v.len()]` of `m`, columns `c0..c1`, multiplied on the left.
fn reflect_left(m: &mut Matrix, v: &[f64], tau: f64, r0: usize, c0: usize, c1: usize) {
    for j in c0..c1 {
        let mut s = 0.0;
        for (i, vi) in v.iter().enumerate() {
            s += vi * m[(r0 + i, j)];
        }
        s *= tau;
        for (i, vi) in v.iter().enumerate() {
            m[(r0 + i, j)] -= s * vi;
        }
    }
}

/// Columns `c0..c0+v.len()` of `m`, rows `r0..r1`, multiplied on the right.
fn reflect_right(m: &mut Matrix, v: &[f64], tau: f64, c0: usize, r0: usize, r1: usize) {
    for i in r0..r1 {
        let mut s = 0.0;
        for (j, vj) in v.iter().enumerate() {
            s += m[(i, c0 + j)] * vj;
        }
        s *= tau;
        for (j, vj) in v.iter().enumerate() {
            m[(i, c0 + j)] -= s * vj;
        }
    }
}

/// Reduces `a` to upper Hessenberg form `H = Qᵀ A Q`.
pub fn hessenberg(a: &Matrix) -> (Matrix, Matrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Matrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let (v, tau, beta) = householder(&x);
        if tau == 0.0 {
            continue;
        }
        reflect_left(&mut h, &v, tau, k + 1, k, n);
        reflect_right(&mut h, &v, tau, k + 1, 0, n);
        reflect_right(&mut q, &v, tau, k + 1, 0, n);
        h[(k + 1, k)] = beta;
        for i in (k + 2)..n {
            h[(i, k)] = 0.0;
        }
    }
    (h, q)
}

/// Computes the real Schur form of a square matrix.
pub fn real_schur(a: &Matrix) -> Result<SchurForm, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch {
            op: "real_schur",
            expected: (a.rows(), a.rows()),
            found: (a.rows(), a.cols()),
        });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.rows();
    let (mut t, mut q) = hessenberg(a);
    if n < 2 {
        return Ok(SchurForm { q, t });
    }
    let anorm = t.frobenius_norm().max(NORM_FLOOR);
    let max_sweeps = 50 * n;
    let mut sweeps = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;

    loop {
        // locate the active unreduced window [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let mut s = t[(lo - 1, lo - 1)].abs() + t[(lo, lo)].abs();
            if s == 0.0 {
                s = anorm;
            }
            if t[(lo, lo - 1)].abs() <= DEFLATION_TOL * s {
                t[(lo, lo - 1)] = 0.0;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            if hi == 0 {
                break;
            }
            hi -= 1;
            its = 0;
            continue;
        }
        if lo + 1 == hi {
            standardize_block(&mut t, &mut q, hi - 1);
            if hi < 2 {
                break;
            }
            hi -= 2;
            its = 0;
            continue;
        }

        sweeps += 1;
        its += 1;
        if sweeps > max_sweeps {
            return Err(LinalgError::NoConvergence { sweeps });
        }

        let (s, p) = if its % 10 == 0 {
            // ad hoc shift to break cycles
            let w = t[(hi, hi - 1)].abs() + t[(hi - 1, hi - 2)].abs();
            let h = 0.75 * w + t[(hi, hi)];
            (2.0 * h, h * h - 0.4375 * w * w)
        } else {
            let (a11, a12) = (t[(hi - 1, hi - 1)], t[(hi - 1, hi)]);
            let (a21, a22) = (t[(hi, hi - 1)], t[(hi, hi)]);
            (a11 + a22, a11 * a22 - a12 * a21)
        };

        let (h00, h01) = (t[(lo, lo)], t[(lo, lo + 1)]);
        let (h10, h11) = (t[(lo + 1, lo)], t[(lo + 1, lo + 1)]);
        let mut x = h00 * h00 + h01 * h10 - s * h00 + p;
        let mut y = h10 * (h00 + h11 - s);
        let mut z = h10 * t[(lo + 2, lo + 1)];

        for k in lo..hi {
            let nr = if k + 2 <= hi { 3 } else { 2 };
            if k > lo {
                x = t[(k, k - 1)];
                y = t[(k + 1, k - 1)];
                z = if nr == 3 { t[(k + 2, k - 1)] } else { 0.0 };
            }
            let xs = [x, y, z];
            let (v, tau, beta) = householder(&xs[..nr]);
            if tau == 0.0 {
                continue;
            }
            let c0 = if k > lo { k - 1 } else { lo };
            reflect_left(&mut t, &v, tau, k, c0, n);
            let r1 = (k + 4).min(hi + 1);
            reflect_right(&mut t, &v, tau, k, 0, r1);
            reflect_right(&mut q, &v, tau, k, 0, n);
            if k > lo {
                t[(k, k - 1)] = beta;
                t[(k + 1, k - 1)] = 0.0;
                if nr == 3 {
                    t[(k + 2, k - 1)] = 0.0;
                }
            }
        }
    }

    // everything below the first subdiagonal is structurally zero
    for i in 2..n {
        for j in 0..(i - 1) {
            t[(i, j)] = 0.0;
        }
    }
    Ok(SchurForm { q, t })
}

/// Splits a 2x2 diagonal block with real eigenvalues into two 1x1 blocks.
fn standardize_block(t: &mut Matrix, q: &mut Matrix, m: usize) {
    let n = t.rows();
    let (a, b, c, d) = (t[(m, m)], t[(m, m + 1)], t[(m + 1, m)], t[(m + 1, m + 1)]);
    if c == 0.0 {
        return;
    }
    let p = 0.5 * (a - d);
    let disc = p * p + b * c;
    if disc < 0.0 {
        return;
    }
    let r = disc.sqrt();
    let lambda = 0.5 * (a + d) + if p >= 0.0 { r } else { -r };
    // eigenvector of the block for `lambda`, pick the better conditioned form
    let (e0, e1) = {
        let u = (b, lambda - a);
        let w = (lambda - d, c);
        if u.0.hypot(u.1) >= w.0.hypot(w.1) {
            u
        } else {
            w
        }
    };
    let norm = e0.hypot(e1);
    if norm == 0.0 {
        return;
    }
    let (cs, sn) = (e0 / norm, e1 / norm);
    // G = [[cs, -sn], [sn, cs]]; T <- Gᵀ T G, Q <- Q G
    for j in m..n {
        let (t0, t1) = (t[(m, j)], t[(m + 1, j)]);
        t[(m, j)] = cs * t0 + sn * t1;
        t[(m + 1, j)] = -sn * t0 + cs * t1;
    }
    for i in 0..=(m + 1) {
        let (t0, t1) = (t[(i, m)], t[(i, m + 1)]);
        t[(i, m)] = cs * t0 + sn * t1;
        t[(i, m + 1)] = -sn * t0 + cs * t1;
    }
    for i in 0..n {
        let (q0, q1) = (q[(i, m)], q[(i, m + 1)]);
        q[(i, m)] = cs * q0 + sn * q1;
        q[(i, m + 1)] = -sn * q0 + cs * q1;
    }
    t[(m + 1, m)] = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_form(a: &Matrix, f: &SchurForm) {
        let n = a.rows();
        let orth = (&f.q.t_matmul(&f.q) - &Matrix::identity(n)).frobenius_norm();
        assert!(orth <= 1e-12 * n as f64, "orthogonality {orth}");
        let rec = (&f.q.matmul(&f.t).matmul(&f.q.transpose()) - a).frobenius_norm();
        assert!(rec <= 1e-11 * a.frobenius_norm().max(1e-300), "reconstruction {rec}");
        for b in f.blocks() {
            for i in (b.start + b.size)..n {
                for j in b.start..(b.start + b.size) {
                    assert_eq!(f.t[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn identity_is_fixed() {
        let a = Matrix::identity(4);
        let f = real_schur(&a).unwrap();
        assert_eq!(f.q, Matrix::identity(4));
        assert_eq!(f.t, Matrix::identity(4));
    }

    #[test]
    fn rotation_block() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let f = real_schur(&a).unwrap();
        check_form(&a, &f);
        assert_eq!(f.blocks(), vec![SchurBlock { start: 0, size: 2 }]);
        let t = &f.t;
        assert!((t[(0, 0)] + t[(1, 1)]).abs() < 1e-15);
        assert!((t[(0, 0)] * t[(1, 1)] - t[(0, 1)] * t[(1, 0)] - 1.0).abs() < 1e-15);
        let ev = f.eigenvalues();
        assert!(ev.iter().all(|(re, im)| re.abs() < 1e-15 && (im.abs() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn real_eigen_pair_is_split() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let f = real_schur(&a).unwrap();
        check_form(&a, &f);
        assert_eq!(f.blocks().len(), 2);
    }

    #[test]
    fn companion_matrix_roots() {
        // (x-1)(x-2)(x-3)(x-4)(x-5)
        let c = [-120.0, 274.0, -225.0, 85.0, -15.0];
        let n = c.len();
        let a = Matrix::from_fn(n, n, |i, j| {
            if i == 0 {
                -c[n - 1 - j]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let f = real_schur(&a).unwrap();
        check_form(&a, &f);
        let mut ev: Vec<f64> = f.eigenvalues().into_iter().map(|e| e.0).collect();
        ev.sort_by(f64::total_cmp);
        for (k, e) in ev.iter().enumerate() {
            assert!((e - (k + 1) as f64).abs() < 1e-8, "{ev:?}");
        }
    }

    #[test]
    fn zero_and_tiny_matrices() {
        let z = Matrix::zeros(3, 3);
        let f = real_schur(&z).unwrap();
        check_form(&z, &f);
        let one = Matrix::from_rows(&[vec![-3.0]]);
        let f = real_schur(&one).unwrap();
        assert_eq!(f.t[(0, 0)], -3.0);
    }
}
