use crate::linalg::{cholesky_solve, real_schur, solve_lyapunov_schur, LinalgError, Matrix, NORM_FLOOR};

use super::RiccatiError;

/// Default relative residual target for [`solve_care`].
pub const DEFAULT_CARE_TOL: f64 = 1e-11;
pub const DEFAULT_MAX_ITER: usize = 50;
/// Newton stops early once successive iterates agree to this relative level.
const STAGNATION_TOL: f64 = 1e-13;

/// `AᵀP + PA − PSP + Q = 0` with `S = B R⁻¹ Bᵀ` and `Q = CᵀC`.
#[derive(Debug, Clone)]
pub struct CareProblem {
    pub a: Matrix,
    pub s: Matrix,
    pub q: Matrix,
}

impl CareProblem {
    pub fn new(a: Matrix, s: Matrix, q: Matrix) -> Result<Self, RiccatiError> {
        let n = a.rows();
        for (name, m) in [("A", &a), ("S", &s), ("Q", &q)] {
            if m.rows() != n || m.cols() != n {
                return Err(RiccatiError::Dimension(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (name, m) in [("S", &s), ("Q", &q)] {
            if !m.is_symmetric(1e-12) {
                return Err(RiccatiError::Dimension(format!("{name} is not symmetric")));
            }
        }
        Ok(Self { a, s, q })
    }

    /// Builds the problem from LQR data `(A, B, C, R)`.
    pub fn from_lqr(a: &Matrix, b: &Matrix, c: &Matrix, r: &Matrix) -> Result<Self, RiccatiError> {
        if b.rows() != a.rows() || c.cols() != a.rows() || r.rows() != b.cols() {
            return Err(RiccatiError::Dimension(format!(
                "inconsistent LQR data: A {}x{}, B {}x{}, C {}x{}, R {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols(),
                r.rows(),
                r.cols()
            )));
        }
        let rinv_bt = cholesky_solve(r, &b.transpose())?;
        let s = b.matmul(&rinv_bt).symmetrized();
        let q = c.t_matmul(c).symmetrized();
        Self::new(a.clone(), s, q)
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// `AᵀP + PA − PSP + Q`.
    pub fn residual_matrix(&self, p: &Matrix) -> Matrix {
        let pa = p.matmul(&self.a);
        let mut r = pa.transpose();
        r.axpy(1.0, &pa);
        r.axpy(-1.0, &p.matmul(&self.s).matmul(p));
        r.axpy(1.0, &self.q);
        r
    }

    /// Residual scaled by the size of the terms that make it up.
    pub fn relative_residual(&self, p: &Matrix) -> f64 {
        let pn = p.frobenius_norm();
        let scale = self.q.frobenius_norm()
            + 2.0 * self.a.frobenius_norm() * pn
            + self.s.frobenius_norm() * pn * pn;
        care_residual(self, p) / scale.max(NORM_FLOOR)
    }
}

/// `‖AᵀP + PA − PSP + Q‖_F`.
pub fn care_residual(problem: &CareProblem, p: &Matrix) -> f64 {
    problem.residual_matrix(p).frobenius_norm()
}

#[derive(Debug, Clone)]
pub struct CareOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Stabilizing starting guess; zero when absent.
    pub initial: Option<Matrix>,
}

impl Default for CareOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_CARE_TOL,
            max_iter: DEFAULT_MAX_ITER,
            initial: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CareSolution {
    pub p: Matrix,
    /// `‖AᵀP + PA − PSP + Q‖_F`.
    pub residual: f64,
    pub relative_residual: f64,
    pub iterations: usize,
    /// Relative residual after each Newton step.
    pub history: Vec<f64>,
}

/// Newton–Kleinman iteration for the stabilizing CARE solution.
///
/// Each step solves `(A − SXⱼ)ᵀX + X(A − SXⱼ) + XⱼSXⱼ + Q = 0` with the
/// Bartels–Stewart solver.
pub fn solve_care(problem: &CareProblem, opts: &CareOptions) -> Result<CareSolution, RiccatiError> {
    let n = problem.dim();
    let mut x = match &opts.initial {
        Some(x0) if x0.rows() == n && x0.cols() == n => x0.clone(),
        Some(x0) => {
            return Err(RiccatiError::Dimension(format!(
                "initial guess is {}x{}, expected {n}x{n}",
                x0.rows(),
                x0.cols()
            )))
        }
        None => Matrix::zeros(n, n),
    };
    let mut history = Vec::new();
    for it in 1..=opts.max_iter {
        let sx = problem.s.matmul(&x);
        let mut closed = problem.a.clone();
        closed.axpy(-1.0, &sx);
        let schur = real_schur(&closed)?;
        let rhs = {
            let mut r = x.matmul(&sx);
            r.axpy(1.0, &problem.q);
            r.symmetrized()
        };
        let next = match solve_lyapunov_schur(&schur, &rhs) {
            Ok(v) => v,
            Err(LinalgError::UnstableA { abscissa }) => {
                return Err(RiccatiError::NotStabilizing {
                    iteration: it,
                    abscissa,
                })
            }
            Err(e) => return Err(e.into()),
        };
        let change = (&next - &x).frobenius_norm() / next.frobenius_norm().max(NORM_FLOOR);
        x = next;
        let rel = problem.relative_residual(&x);
        history.push(rel);
        if rel <= opts.tol || change <= STAGNATION_TOL {
            return Ok(CareSolution {
                residual: care_residual(problem, &x),
                relative_residual: rel,
                p: x,
                iterations: it,
                history,
            });
        }
    }
    Err(RiccatiError::MaxIterExceeded {
        iterations: opts.max_iter,
        relative_residual: history.last().copied().unwrap_or(f64::NAN),
    })
}

/// Independent CARE check: integrates `dP/ds = AᵀP + PA − PSP + Q` from
/// `P(0) = 0` with classical RK4 until `‖dP/ds‖_F ≤ 1e-10`.
pub fn care_oracle(problem: &CareProblem, step: f64, horizon: f64) -> Result<Matrix, RiccatiError> {
    const STATIONARY: f64 = 1e-10;
    if !(step > 0.0) || !(horizon > 0.0) {
        return Err(RiccatiError::InvalidConfig(format!(
            "oracle step {step} and horizon {horizon} must be positive"
        )));
    }
    let n = problem.dim();
    let mut p = Matrix::zeros(n, n);
    let mut s = 0.0;
    loop {
        let k1 = problem.residual_matrix(&p);
        if k1.frobenius_norm() <= STATIONARY {
            return Ok(p.symmetrized());
        }
        if s >= horizon {
            return Err(RiccatiError::HorizonExceeded { horizon });
        }
        let stage = |k: &Matrix, c: f64| {
            let mut y = p.clone();
            y.axpy(c * step, k);
            y
        };
        let k2 = problem.residual_matrix(&stage(&k1, 0.5));
        let k3 = problem.residual_matrix(&stage(&k2, 0.5));
        let k4 = problem.residual_matrix(&stage(&k3, 1.0));
        let mut incr = k1;
        incr.axpy(2.0, &k2);
        incr.axpy(2.0, &k3);
        incr.axpy(1.0, &k4);
        p.axpy(step / 6.0, &incr);
        if !p.is_finite() {
            return Err(RiccatiError::HorizonExceeded { horizon });
        }
        s += step;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(a: f64, s: f64, q: f64) -> CareProblem {
        CareProblem::new(
            Matrix::from_rows(&[vec![a]]),
            Matrix::from_rows(&[vec![s]]),
            Matrix::from_rows(&[vec![q]]),
        )
        .unwrap()
    }

    #[test]
    fn residual_values() {
        let pr = scalar(-1.0, 1.0, 1.0);
        assert!((care_residual(&pr, &Matrix::from_rows(&[vec![0.5]])) - 0.25).abs() < 1e-15);
        assert_eq!(care_residual(&pr, &Matrix::zeros(1, 1)), 1.0);
    }

    #[test]
    fn scalar_solution() {
        let pr = scalar(-1.0, 1.0, 1.0);
        let sol = solve_care(&pr, &CareOptions::default()).unwrap();
        assert!((sol.p[(0, 0)] - (2f64.sqrt() - 1.0)).abs() < 1e-10);
        assert!(sol.residual <= 1e-10);
        assert!(sol.iterations < 10);
    }

    #[test]
    fn zero_weight_gives_zero() {
        let a = Matrix::from_rows(&[vec![-1.0, 0.3], vec![0.0, -2.0]]);
        let pr = CareProblem::new(a, Matrix::identity(2), Matrix::zeros(2, 2)).unwrap();
        let sol = solve_care(&pr, &CareOptions::default()).unwrap();
        assert_eq!(sol.p.frobenius_norm(), 0.0);
    }

    #[test]
    fn decoupled_diagonal() {
        let pr = CareProblem::new(Matrix::diag(&[-1.0, -2.0]), Matrix::identity(2), Matrix::identity(2))
            .unwrap();
        let sol = solve_care(&pr, &CareOptions::default()).unwrap();
        let expected = Matrix::diag(&[2f64.sqrt() - 1.0, 5f64.sqrt() - 2.0]);
        assert!((&sol.p - &expected).frobenius_norm() < 1e-10);
    }

    #[test]
    fn unstable_start_is_reported() {
        let pr = scalar(1.0, 1.0, 1.0);
        assert!(matches!(
            solve_care(&pr, &CareOptions::default()),
            Err(RiccatiError::NotStabilizing { iteration: 1, .. })
        ));
        // a stabilizing warm start recovers p = 1 + sqrt(2)
        let opts = CareOptions {
            initial: Some(Matrix::from_rows(&[vec![3.0]])),
            ..CareOptions::default()
        };
        let sol = solve_care(&pr, &opts).unwrap();
        assert!((sol.p[(0, 0)] - (1.0 + 2f64.sqrt())).abs() < 1e-10);
    }

    #[test]
    fn max_iter_exceeded() {
        let pr = CareProblem::new(Matrix::diag(&[-1e-3]), Matrix::identity(1), Matrix::identity(1))
            .unwrap();
        let opts = CareOptions {
            max_iter: 2,
            ..CareOptions::default()
        };
        assert!(matches!(
            solve_care(&pr, &opts),
            Err(RiccatiError::MaxIterExceeded { iterations: 2, .. })
        ));
    }

    #[test]
    fn oracle_scalar_and_zero() {
        let p = care_oracle(&scalar(-1.0, 1.0, 1.0), 0.01, 100.0).unwrap();
        assert!((p[(0, 0)] - 0.41421356).abs() < 1e-8);
        let p = care_oracle(&scalar(-1.0, 1.0, 0.0), 0.01, 100.0).unwrap();
        assert_eq!(p[(0, 0)], 0.0);
        assert!(matches!(
            care_oracle(&scalar(-1.0, 1.0, 1.0), 0.01, 0.5),
            Err(RiccatiError::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn lqr_constructor() {
        let a = Matrix::diag(&[-1.0, -2.0]);
        let b = Matrix::column(&[1.0, 2.0]);
        let c = Matrix::row(&[1.0, 0.0]);
        let r = Matrix::from_rows(&[vec![4.0]]);
        let pr = CareProblem::from_lqr(&a, &b, &c, &r).unwrap();
        assert!((pr.s[(1, 1)] - 1.0).abs() < 1e-15);
        assert!((pr.s[(0, 1)] - 0.5).abs() < 1e-15);
        assert_eq!(pr.q[(0, 0)], 1.0);
        assert!(CareProblem::from_lqr(&a, &Matrix::column(&[1.0]), &c, &r).is_err());
    }
}
