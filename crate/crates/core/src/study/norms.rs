use serde::{Deserialize, Serialize};

use super::StudyError;
use crate::fem::{quad_rule, DimKind, FemField, QuadKind};
use crate::models::GainFunction;

/// Subintervals of the composite rule used for 1D errors.
pub const ERROR_SUBINTERVALS_1D: usize = 256;
/// Gauss points per subinterval (per direction in 2D).
pub const ERROR_GAUSS_POINTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorNorm {
    /// Sum of the component `L²` norms.
    L2,
    /// `‖e₁‖_{H¹} + ‖e₂‖_{L²}` with the full `H¹` norm on the first
    /// component.
    H1xL2,
}

/// Composite tensor Gauss rule on a uniform partition of the domain.
struct ErrorRule {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

fn error_rule(field: &FemField, cells: usize) -> ErrorRule {
    let g = quad_rule(QuadKind::GaussLegendre, ERROR_GAUSS_POINTS).expect("valid Gauss count");
    let (a, b) = field.space().line().bounds();
    let h = (b - a) / cells as f64;
    let mut xs = Vec::with_capacity(cells * g.len());
    let mut ws = Vec::with_capacity(cells * g.len());
    for c in 0..cells {
        let x0 = a + c as f64 * h;
        for (t, w) in g.points.iter().zip(&g.weights) {
            xs.push(x0 + 0.5 * (t + 1.0) * h);
            ws.push(0.5 * h * w);
        }
    }
    match field.space().dim() {
        DimKind::OneD => ErrorRule {
            points: xs.iter().map(|&x| vec![x]).collect(),
            weights: ws,
        },
        DimKind::TwoDTensor => {
            let mut points = Vec::with_capacity(xs.len() * xs.len());
            let mut weights = Vec::with_capacity(xs.len() * xs.len());
            for (y, wy) in xs.iter().zip(&ws) {
                for (x, wx) in xs.iter().zip(&ws) {
                    points.push(vec![*x, *y]);
                    weights.push(wx * wy);
                }
            }
            ErrorRule { points, weights }
        }
    }
}

/// `(‖e‖²_{L²}, |e|²_{H¹})` for the difference of two fields.
fn squared_norms(a: &FemField, b: &FemField, rule: &ErrorRule) -> Result<(f64, f64), StudyError> {
    let ea = a.evaluate(&rule.points)?;
    let eb = b.evaluate(&rule.points)?;
    let mut l2 = 0.0;
    let mut semi = 0.0;
    for (q, w) in rule.weights.iter().enumerate() {
        let dv = ea.values[q] - eb.values[q];
        l2 += w * dv * dv;
        for (ga, gb) in ea.grads[q].iter().zip(&eb.grads[q]) {
            semi += w * (ga - gb) * (ga - gb);
        }
    }
    Ok((l2, semi))
}

/// Error between a coarse gain and a reference gain on the same domain.
///
/// 1D gains are compared with a 256-cell composite 6-point Gauss rule; 2D
/// gains use the same rule on each cell of the reference mesh.
pub fn gain_error(coarse: &GainFunction, reference: &GainFunction, norm: ErrorNorm) -> Result<f64, StudyError> {
    if coarse.components.len() != reference.components.len() {
        return Err(StudyError::DomainMismatch);
    }
    let mut total = 0.0;
    for (i, (a, b)) in coarse.components.iter().zip(&reference.components).enumerate() {
        if !a.space().same_domain(b.space()) {
            return Err(StudyError::DomainMismatch);
        }
        let cells = match b.space().dim() {
            DimKind::OneD => ERROR_SUBINTERVALS_1D,
            DimKind::TwoDTensor => b.space().n_elem().max(a.space().n_elem()),
        };
        let (l2, semi) = squared_norms(a, b, &error_rule(b, cells))?;
        total += match (norm, i) {
            (ErrorNorm::H1xL2, 0) => (l2 + semi).sqrt(),
            _ => l2.sqrt(),
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{build_space, BoundaryCondition, Domain};
    use std::sync::Arc;

    fn gain(k: usize, n: usize, f: impl Fn(f64) -> f64) -> GainFunction {
        let s = Arc::new(
            build_space(DimKind::OneD, k, n, Domain::Interval(-1.0, 1.0), BoundaryCondition::Neumann).unwrap(),
        );
        GainFunction::new(vec![FemField::interpolate(s, |x| f(x[0]))]).unwrap()
    }

    #[test]
    fn identical_is_zero() {
        let g = gain(2, 4, |x| x * x);
        assert_eq!(gain_error(&g, &g, ErrorNorm::L2).unwrap(), 0.0);
    }

    #[test]
    fn polynomial_difference() {
        // e = x on (−1, 1): ‖e‖² = 2/3, |e|²_{H¹} = 2
        let a = gain(1, 2, |x| x);
        let b = gain(3, 1, |_| 0.0);
        assert!((gain_error(&a, &b, ErrorNorm::L2).unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!((gain_error(&a, &b, ErrorNorm::H1xL2).unwrap() - (8.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn component_mismatch() {
        let a = gain(1, 2, |x| x);
        let b = GainFunction::new(vec![a.components[0].clone(), a.components[0].clone()]).unwrap();
        assert!(matches!(gain_error(&a, &b, ErrorNorm::L2), Err(StudyError::DomainMismatch)));
    }
}
