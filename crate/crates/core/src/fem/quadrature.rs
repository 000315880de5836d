use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::FemError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadKind {
    GaussLegendre,
    GaussLobatto,
}

/// Quadrature rule on the reference interval `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub kind: QuadKind,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        let m = self.points.len();
        match self.kind {
            QuadKind::GaussLegendre => 2 * m - 1,
            QuadKind::GaussLobatto => 2 * m - 3,
        }
    }

    /// Points and weights mapped affinely onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        (
            self.points.iter().map(|x| mid + half * x).collect(),
            self.weights.iter().map(|w| half * w).collect(),
        )
    }
}

/// Legendre polynomial `P_n(x)` together with `P_{n-1}(x)`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// `P_n'(x)` from the pair, valid for |x| < 1.
fn legendre_derivative(n: usize, x: f64, p: f64, p_prev: f64) -> f64 {
    n as f64 * (x * p - p_prev) / (x * x - 1.0)
}

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX: usize = 100;

fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut points = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        // Chebyshev-like initial guess, descending in x
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..NEWTON_MAX {
            let (p, pp) = legendre_pair(m, x);
            let dp = legendre_derivative(m, x, p, pp);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        let (p, pp) = legendre_pair(m, x);
        let dp = legendre_derivative(m, x, p, pp);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x;
        points[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        points[m / 2] = 0.0;
    }
    (points, weights)
}

fn gauss_lobatto(m: usize) -> (Vec<f64>, Vec<f64>) {
    // interior nodes are the roots of P'_{m-1}
    let n = m - 1;
    let nf = n as f64;
    let mut points = vec![0.0; m];
    let mut weights = vec![0.0; m];
    points[0] = -1.0;
    points[n] = 1.0;
    let end_w = 2.0 / (nf * (nf + 1.0));
    weights[0] = end_w;
    weights[n] = end_w;
    for i in 1..m.div_ceil(2) {
        let mut x = (PI * i as f64 / nf).cos();
        for _ in 0..NEWTON_MAX {
            let (p, pp) = legendre_pair(n, x);
            let dp = legendre_derivative(n, x, p, pp);
            // P_n'' from the Legendre ODE: (1-x²)P'' = 2xP' - n(n+1)P
            let d2p = (2.0 * x * dp - nf * (nf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / d2p;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        let (p, _) = legendre_pair(n, x);
        let w = end_w / (p * p);
        points[i] = -x;
        points[n - i] = x;
        weights[i] = w;
        weights[n - i] = w;
    }
    if m % 2 == 1 {
        points[n / 2] = 0.0;
        let (p, _) = legendre_pair(n, 0.0);
        weights[n / 2] = end_w / (p * p);
    }
    (points, weights)
}

/// Builds an `m`-point rule of the requested kind.
pub fn quad_rule(kind: QuadKind, m: usize) -> Result<QuadRule, FemError> {
    let (points, weights) = match kind {
        QuadKind::GaussLegendre if m >= 1 => gauss_legendre(m),
        QuadKind::GaussLobatto if m >= 2 => gauss_lobatto(m),
        _ => return Err(FemError::InvalidCount { kind, count: m }),
    };
    Ok(QuadRule {
        kind,
        points,
        weights,
    })
}
