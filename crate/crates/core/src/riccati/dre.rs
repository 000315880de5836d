use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;

use super::care::{solve_care, CareOptions, CareProblem};
use super::RiccatiError;

/// Relative residual accepted for each implicit step.
pub const DEFAULT_STEP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DreConfig {
    /// Horizon length.
    pub tau: f64,
    pub dt: f64,
    /// `P(τ)`.
    pub terminal: Matrix,
    /// Keep every m-th step in addition to `t = τ` and `t = 0`.
    pub sample_every: Option<usize>,
    pub step_tol: f64,
}

impl DreConfig {
    pub fn new(tau: f64, dt: f64, terminal: Matrix) -> Self {
        Self {
            tau,
            dt,
            terminal,
            sample_every: None,
            step_tol: DEFAULT_STEP_TOL,
        }
    }

    /// Number of steps; `dt` is shrunk slightly if it does not divide `tau`.
    pub fn n_steps(&self) -> usize {
        ((self.tau / self.dt) - 1e-9).ceil().max(1.0) as usize
    }

    fn validate(&self, n: usize) -> Result<(), RiccatiError> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(RiccatiError::InvalidConfig(format!("tau = {} must be positive", self.tau)));
        }
        if !(self.dt > 0.0) || self.dt > self.tau * (1.0 + 1e-12) {
            return Err(RiccatiError::InvalidConfig(format!(
                "dt = {} must lie in (0, tau = {}]",
                self.dt, self.tau
            )));
        }
        if self.terminal.rows() != n || self.terminal.cols() != n {
            return Err(RiccatiError::Dimension(format!(
                "terminal is {}x{}, expected {n}x{n}",
                self.terminal.rows(),
                self.terminal.cols()
            )));
        }
        if self.sample_every == Some(0) {
            return Err(RiccatiError::InvalidConfig("sample_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// `(t, P(t))` samples ordered from `t = τ` down to `t = 0`.
#[derive(Debug, Clone)]
pub struct DreTrajectory {
    pub samples: Vec<(f64, Matrix)>,
    /// Newton iterations per step.
    pub newton_steps: Vec<usize>,
}

impl DreTrajectory {
    /// `P(0)`.
    pub fn initial(&self) -> &Matrix {
        &self.samples.last().expect("trajectory always holds t = 0").1
    }
}

/// Integrates `-dP/dt = AᵀP + PA − PSP + Q`, `P(τ) = P_τ`, backwards with the
/// implicit trapezoidal rule in `s = τ − t`.
///
/// Each step `P⁺ − (Δt/2)F(P⁺) = P + (Δt/2)F(P)` is the CARE with
/// `Â = (Δt/2)A − I/2`, `Ŝ = (Δt/2)S`, `Q̂ = (Δt/2)Q + P + (Δt/2)F(P)`.
pub fn dre_solve(problem: &CareProblem, config: &DreConfig) -> Result<DreTrajectory, RiccatiError> {
    let n = problem.dim();
    config.validate(n)?;
    let steps = config.n_steps();
    let dt = config.tau / steps as f64;
    let half = 0.5 * dt;

    let mut a_hat = problem.a.scale(half);
    for i in 0..n {
        a_hat[(i, i)] -= 0.5;
    }
    let s_hat = problem.s.scale(half);
    let q_half = problem.q.scale(half);

    let mut p = config.terminal.symmetrized();
    let mut samples = vec![(config.tau, p.clone())];
    let mut newton_steps = Vec::with_capacity(steps);
    for j in 1..=steps {
        let mut q_hat = problem.residual_matrix(&p).scale(half);
        q_hat.axpy(1.0, &p);
        q_hat.axpy(1.0, &q_half);
        let step_problem = CareProblem {
            a: a_hat.clone(),
            s: s_hat.clone(),
            q: q_hat.symmetrized(),
        };
        let opts = CareOptions {
            initial: Some(p.clone()),
            ..CareOptions::default()
        };
        let sol = solve_care(&step_problem, &opts)?;
        if !(sol.relative_residual <= config.step_tol) {
            return Err(RiccatiError::StepRejected {
                step: j,
                relative_residual: sol.relative_residual,
            });
        }
        newton_steps.push(sol.iterations);
        p = sol.p;
        let t = if j == steps { 0.0 } else { config.tau - j as f64 * dt };
        let keep = j == steps || config.sample_every.is_some_and(|m| j % m == 0);
        if keep {
            samples.push((t, p.clone()));
        }
    }
    Ok(DreTrajectory {
        samples,
        newton_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar() -> CareProblem {
        let one = Matrix::from_rows(&[vec![1.0]]);
        CareProblem::new(Matrix::from_rows(&[vec![-1.0]]), one.clone(), one).unwrap()
    }

    // root of p - (dt/2)(1 - 2p - p^2) - rhs on [0, 1]
    fn bisect_step(p0: f64, dt: f64) -> f64 {
        let f = |p: f64| 1.0 - 2.0 * p - p * p;
        let rhs = p0 + 0.5 * dt * f(p0);
        let g = |p: f64| p - 0.5 * dt * f(p) - rhs;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn one_step_matches_bisection() {
        let cfg = DreConfig::new(0.1, 0.1, Matrix::zeros(1, 1));
        let traj = dre_solve(&scalar(), &cfg).unwrap();
        assert_eq!(traj.samples.len(), 2);
        assert_eq!(traj.samples[1].0, 0.0);
        assert!((traj.initial()[(0, 0)] - bisect_step(0.0, 0.1)).abs() < 1e-13);
    }

    #[test]
    fn long_horizon_reaches_steady_state() {
        let cfg = DreConfig::new(20.0, 0.05, Matrix::zeros(1, 1));
        let traj = dre_solve(&scalar(), &cfg).unwrap();
        assert!((traj.initial()[(0, 0)] - (2f64.sqrt() - 1.0)).abs() < 1e-10);
        assert!(traj.newton_steps.iter().all(|&k| k <= 4));
    }

    #[test]
    fn sampling() {
        let mut cfg = DreConfig::new(1.0, 0.1, Matrix::zeros(1, 1));
        cfg.sample_every = Some(5);
        let traj = dre_solve(&scalar(), &cfg).unwrap();
        let ts: Vec<f64> = traj.samples.iter().map(|s| s.0).collect();
        assert_eq!(ts.len(), 3);
        assert_eq!(ts[0], 1.0);
        assert!((ts[1] - 0.5).abs() < 1e-12);
        assert_eq!(ts[2], 0.0);
    }

    #[test]
    fn invalid_config() {
        let pr = scalar();
        assert!(dre_solve(&pr, &DreConfig::new(0.0, 0.1, Matrix::zeros(1, 1))).is_err());
        assert!(dre_solve(&pr, &DreConfig::new(1.0, 2.0, Matrix::zeros(1, 1))).is_err());
        assert!(dre_solve(&pr, &DreConfig::new(1.0, 0.1, Matrix::zeros(2, 2))).is_err());
    }
}
