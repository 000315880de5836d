use std::sync::Arc;

use super::space::{DimKind, FemSpace, LineSpace};
use super::FemError;

/// A finite-element function: one coefficient per free dof.
#[derive(Debug, Clone)]
pub struct FemField {
    space: Arc<FemSpace>,
    coeffs: Vec<f64>,
}

/// Field values and first derivatives (`grads[p][d]`, one entry per direction).
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub values: Vec<f64>,
    pub grads: Vec<Vec<f64>>,
}

impl FemField {
    pub fn new(space: Arc<FemSpace>, coeffs: Vec<f64>) -> Result<Self, FemError> {
        if coeffs.len() != space.n_free() {
            return Err(FemError::CoefficientCount {
                expected: space.n_free(),
                found: coeffs.len(),
            });
        }
        Ok(Self { space, coeffs })
    }

    pub fn zeros(space: Arc<FemSpace>) -> Self {
        let n = space.n_free();
        Self {
            space,
            coeffs: vec![0.0; n],
        }
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(space: Arc<FemSpace>, f: impl Fn(&[f64]) -> f64) -> Self {
        let coeffs = space.dof_coords().iter().map(|x| f(x)).collect();
        Self { space, coeffs }
    }

    pub fn space(&self) -> &Arc<FemSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients over every node, zero on restricted dofs.
    fn full_coeffs(&self) -> Vec<f64> {
        let line = self.space.line();
        match self.space.dim() {
            DimKind::OneD => {
                let mut full = vec![0.0; line.n_global()];
                for (f, &g) in line.free_dofs().iter().enumerate() {
                    full[g] = self.coeffs[f];
                }
                full
            }
            DimKind::TwoDTensor => {
                let n1 = line.n_global();
                let nf = line.n_free();
                let mut full = vec![0.0; n1 * n1];
                for (fy, &gy) in line.free_dofs().iter().enumerate() {
                    for (fx, &gx) in line.free_dofs().iter().enumerate() {
                        full[gy * n1 + gx] = self.coeffs[fy * nf + fx];
                    }
                }
                full
            }
        }
    }

    /// Evaluates the field at `points`, each a slice of length 1 (1D) or 2 (2D).
    pub fn evaluate(&self, points: &[Vec<f64>]) -> Result<Evaluation, FemError> {
        let full = self.full_coeffs();
        let mut ev = Evaluator::new(self.space.line());
        let mut values = Vec::with_capacity(points.len());
        let mut grads = Vec::with_capacity(points.len());
        for p in points {
            let (v, g) = match self.space.dim() {
                DimKind::OneD => {
                    check_dim(p, 1)?;
                    let (v, d) = ev.eval_1d(&full, p[0]).map_err(|_| outside(p))?;
                    (v, vec![d])
                }
                DimKind::TwoDTensor => {
                    check_dim(p, 2)?;
                    let (v, gx, gy) = ev.eval_2d(&full, p[0], p[1]).map_err(|_| outside(p))?;
                    (v, vec![gx, gy])
                }
            };
            values.push(v);
            grads.push(g);
        }
        Ok(Evaluation { values, grads })
    }

    /// 1D convenience wrapper returning `(values, derivatives)`.
    pub fn evaluate_line(&self, xs: &[f64]) -> Result<(Vec<f64>, Vec<f64>), FemError> {
        if self.space.dim() != DimKind::OneD {
            return Err(FemError::PointDimension {
                expected: 2,
                found: 1,
            });
        }
        let full = self.full_coeffs();
        let mut ev = Evaluator::new(self.space.line());
        let mut vals = Vec::with_capacity(xs.len());
        let mut ders = Vec::with_capacity(xs.len());
        for &x in xs {
            let (v, d) = ev.eval_1d(&full, x)?;
            vals.push(v);
            ders.push(d);
        }
        Ok((vals, ders))
    }
}

fn check_dim(p: &[f64], expected: usize) -> Result<(), FemError> {
    if p.len() == expected {
        Ok(())
    } else {
        Err(FemError::PointDimension {
            expected,
            found: p.len(),
        })
    }
}

fn outside(p: &[f64]) -> FemError {
    FemError::PointOutsideDomain { point: p.to_vec() }
}

/// Scratch buffers for repeated local basis evaluation.
struct Evaluator<'a> {
    line: &'a LineSpace,
    vx: Vec<f64>,
    dx: Vec<f64>,
    vy: Vec<f64>,
    dy: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    fn new(line: &'a LineSpace) -> Self {
        let n = line.order() + 1;
        Self {
            line,
            vx: vec![0.0; n],
            dx: vec![0.0; n],
            vy: vec![0.0; n],
            dy: vec![0.0; n],
        }
    }

    fn eval_1d(&mut self, full: &[f64], x: f64) -> Result<(f64, f64), FemError> {
        let (e, xi) = self.line.locate(x)?;
        self.line.basis().eval_into(xi, &mut self.vx, &mut self.dx);
        let scale = 2.0 / self.line.h();
        let mut v = 0.0;
        let mut d = 0.0;
        for i in 0..self.vx.len() {
            let c = full[self.line.global_index(e, i)];
            v += c * self.vx[i];
            d += c * self.dx[i];
        }
        Ok((v, d * scale))
    }

    fn eval_2d(&mut self, full: &[f64], x: f64, y: f64) -> Result<(f64, f64, f64), FemError> {
        let (ex, xi) = self.line.locate(x)?;
        let (ey, eta) = self.line.locate(y)?;
        self.line.basis().eval_into(xi, &mut self.vx, &mut self.dx);
        self.line.basis().eval_into(eta, &mut self.vy, &mut self.dy);
        let n1 = self.line.n_global();
        let scale = 2.0 / self.line.h();
        let (mut v, mut gx, mut gy) = (0.0, 0.0, 0.0);
        for iy in 0..self.vy.len() {
            let row = self.line.global_index(ey, iy) * n1;
            for ix in 0..self.vx.len() {
                let c = full[row + self.line.global_index(ex, ix)];
                v += c * self.vx[ix] * self.vy[iy];
                gx += c * self.dx[ix] * self.vy[iy];
                gy += c * self.vx[ix] * self.dy[iy];
            }
        }
        Ok((v, gx * scale, gy * scale))
    }
}
