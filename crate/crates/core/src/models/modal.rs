//! Structured CARE solver for the 2D Neumann heat model.
//!
//! With `K₁V = M₁VΛ`, `VᵀM₁V = I`, the tensor modes `W = V ⊗ V` diagonalize
//! the 2D pencil, so the plant becomes `ẏ = D y + s u`, `D = −(α(λᵢ+λⱼ)+β)`,
//! with `s = Wᵀb` and observation `c = Wᵀq`. Only `h = Ps/r` is needed for
//! the gain (`κ̂ = W h`), and each Newton–Kleinman step reduces to an
//! `N × N` linear system in `h`.

use std::sync::Arc;

use super::{GainFunction, ModelError, Profile};
use crate::fem::{
    build_space, line_mass, line_stiffness, BoundaryCondition, DimKind, Domain, FemField,
};
use crate::linalg::{generalized_sym_eigen, norm2, Lu, Matrix, NORM_FLOOR};

const MAX_NEWTON: usize = 60;
const NEWTON_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct ModalSolution {
    pub gain: GainFunction,
    /// Modal gain coordinates `h`, indexed `l·n₁ + m`.
    pub h: Vec<f64>,
    pub modes_total: usize,
    pub modes_solved: usize,
    pub newton_iterations: usize,
    /// `‖h‖` over the modes filled in after the solve.
    pub tail_norm: f64,
}

/// Parameters of the 2D heat model.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Thermal2dParams {
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub b: Profile,
    pub q: Profile,
}

/// Infinite-horizon gain of the 2D heat model on an `n × n` mesh of order
/// `k`. At most `max_modes` modes enter the Newton solve (the ones with the
/// largest actuator/observation weight); the rest are filled in from the
/// converged coupling terms.
pub fn thermal2d_gain_modal(
    n: usize,
    k: usize,
    params: &Thermal2dParams,
    max_modes: usize,
) -> Result<ModalSolution, ModelError> {
    for (name, v) in [("alpha", params.alpha), ("beta", params.beta), ("r", params.r)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ModelError::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    if max_modes == 0 {
        return Err(ModelError::InvalidParameter("max_modes must be >= 1".into()));
    }
    let space = Arc::new(build_space(DimKind::TwoDTensor, k, n, Domain::UnitSquare, BoundaryCondition::Neumann)?);
    let line = space.line();
    let eig = generalized_sym_eigen(&line_stiffness(line), &line_mass(line))?;
    let v = &eig.vectors;
    let n1 = line.n_free();
    let nmodes = n1 * n1;

    let to_modal = |load: Vec<f64>| -> Vec<f64> {
        let l = Matrix::from_vec(n1, n1, load);
        v.t_matmul(&l).matmul(v).into_vec()
    };
    let s = to_modal(params.b.load(&space)?);
    let c = to_modal(params.q.load(&space)?);
    let d: Vec<f64> = (0..nmodes)
        .map(|i| -(params.alpha * (eig.values[i / n1] + eig.values[i % n1]) + params.beta))
        .collect();

    let kept = select_modes(&s, &c, max_modes);
    let ks: Vec<f64> = kept.iter().map(|&i| s[i]).collect();
    let kc: Vec<f64> = kept.iter().map(|&i| c[i]).collect();
    let kd: Vec<f64> = kept.iter().map(|&i| d[i]).collect();
    let (kh, iterations) = newton(&kd, &ks, &kc, params.r)?;

    let mut h = vec![0.0; nmodes];
    for (j, &i) in kept.iter().enumerate() {
        h[i] = kh[j];
    }
    let mut tail = 0.0;
    if kept.len() < nmodes {
        let mut is_kept = vec![false; nmodes];
        for &i in &kept {
            is_kept[i] = true;
        }
        let cs: Vec<f64> = (0..nmodes).map(|j| c[j] * s[j]).collect();
        for i in (0..nmodes).filter(|&i| !is_kept[i]) {
            // row i of h∘(1 − C(h∘s)) = −c∘C(c∘s)/r, couplings through kept modes
            let sigma: f64 = kept.iter().enumerate().map(|(j, &m)| kh[j] * ks[j] / (d[i] + d[m])).sum();
            let gamma: f64 = (0..nmodes).map(|j| cs[j] / (d[i] + d[j])).sum();
            h[i] = -c[i] * gamma / (params.r * (1.0 - sigma));
            tail += h[i] * h[i];
        }
    }

    let hm = Matrix::from_vec(n1, n1, h.clone());
    let coeffs = v.matmul(&hm).matmul(&v.transpose()).into_vec();
    let gain = GainFunction::new(vec![FemField::new(space.clone(), coeffs)?])?;
    Ok(ModalSolution {
        gain,
        h,
        modes_total: nmodes,
        modes_solved: kept.len(),
        newton_iterations: iterations,
        tail_norm: tail.sqrt(),
    })
}

fn select_modes(s: &[f64], c: &[f64], max_modes: usize) -> Vec<usize> {
    let n = s.len();
    if n <= max_modes {
        return (0..n).collect();
    }
    let smax = s.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(NORM_FLOOR);
    let cmax = c.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(NORM_FLOOR);
    let weight = |i: usize| s[i].abs() / smax + c[i].abs() / cmax;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weight(b).total_cmp(&weight(a)).then(a.cmp(&b)));
    order.truncate(max_modes);
    order.sort_unstable();
    order
}

/// Newton–Kleinman from `X₀ = 0` for `DX + XD − XssᵀX/r + ccᵀ = 0`, tracking
/// only `h = Xs/r`.
fn newton(d: &[f64], s: &[f64], c: &[f64], r: f64) -> Result<(Vec<f64>, usize), ModelError> {
    let n = d.len();
    let cm = Matrix::from_fn(n, n, |i, j| 1.0 / (d[i] + d[j]));
    let cs: Vec<f64> = c.iter().zip(s).map(|(a, b)| a * b).collect();
    let gamma = cm.matvec(&cs);
    let forcing: Vec<f64> = c.iter().zip(&gamma).map(|(a, g)| a * g).collect();
    let mut h = vec![0.0; n];
    for it in 1..=MAX_NEWTON {
        let hs: Vec<f64> = h.iter().zip(s).map(|(a, b)| a * b).collect();
        let g = cm.matvec(&hs);
        let mut jac = Matrix::from_fn(n, n, |i, j| -h[i] * cm[(i, j)] * s[j]);
        for i in 0..n {
            jac[(i, i)] += 1.0 - g[i];
        }
        let rhs: Vec<f64> = (0..n).map(|i| -r * h[i] * g[i] - forcing[i]).collect();
        let y = Lu::new(&jac)?.solve_vec(&rhs);
        let next: Vec<f64> = y.iter().map(|v| v / r).collect();
        let diff: Vec<f64> = next.iter().zip(&h).map(|(a, b)| a - b).collect();
        let change = norm2(&diff) / norm2(&next).max(NORM_FLOOR);
        h = next;
        if change <= NEWTON_TOL {
            return Ok((h, it));
        }
    }
    Err(ModelError::Riccati(crate::riccati::RiccatiError::MaxIterExceeded {
        iterations: MAX_NEWTON,
        relative_residual: f64::NAN,
    }))
}
