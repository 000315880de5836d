//! Lagrange interpolation basis in barycentric form.

use super::FemError;

/// Basis values and first derivatives, indexed `[basis][point]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTable {
    pub values: Vec<Vec<f64>>,
    pub derivatives: Vec<Vec<f64>>,
}

/// Precomputed barycentric weights for a fixed node set.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(nodes: &[f64]) -> Result<Self, FemError> {
        let n = nodes.len();
        if n == 0 {
            return Err(FemError::EmptyNodes);
        }
        let mut weights = vec![1.0; n];
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    let d = nodes[j] - nodes[k];
                    if d == 0.0 {
                        return Err(FemError::DuplicateNodes { index: j.max(k) });
                    }
                    weights[j] /= d;
                }
            }
        }
        Ok(Self {
            nodes: nodes.to_vec(),
            weights,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Writes all basis values and derivatives at `x` into the two slices.
    pub fn eval_into(&self, x: f64, values: &mut [f64], derivs: &mut [f64]) {
        let n = self.nodes.len();
        debug_assert!(values.len() == n && derivs.len() == n);
        if n == 1 {
            values[0] = 1.0;
            derivs[0] = 0.0;
            return;
        }
        let (nearest, gap) = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, xi)| (i, (x - xi).abs()))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });

        if gap == 0.0 {
            let m = nearest;
            let xm = self.nodes[m];
            for j in 0..n {
                values[j] = if j == m { 1.0 } else { 0.0 };
                derivs[j] = if j == m {
                    0.0
                } else {
                    self.weights[j] / self.weights[m] / (xm - self.nodes[j])
                };
            }
        } else {
            let mut s = 0.0;
            let mut s2 = 0.0;
            for j in 0..n {
                let inv = 1.0 / (x - self.nodes[j]);
                let t = self.weights[j] * inv;
                values[j] = t;
                s += t;
                s2 += t * inv;
            }
            let ratio = s2 / s;
            for j in 0..n {
                values[j] /= s;
                derivs[j] = if j == nearest {
                    0.0
                } else {
                    values[j] * (ratio - 1.0 / (x - self.nodes[j]))
                };
            }
        }
        // derivatives of a partition of unity sum to zero; this fixes the
        // one entry that would otherwise suffer cancellation
        let others: f64 = derivs.iter().sum();
        derivs[nearest] = -others;
    }

    pub fn table(&self, xs: &[f64]) -> BasisTable {
        let n = self.nodes.len();
        let mut values = vec![vec![0.0; xs.len()]; n];
        let mut derivatives = vec![vec![0.0; xs.len()]; n];
        let mut v = vec![0.0; n];
        let mut d = vec![0.0; n];
        for (p, &x) in xs.iter().enumerate() {
            self.eval_into(x, &mut v, &mut d);
            for j in 0..n {
                values[j][p] = v[j];
                derivatives[j][p] = d[j];
            }
        }
        BasisTable {
            values,
            derivatives,
        }
    }
}

/// Values and derivatives of the Lagrange basis on `nodes` at each of `xs`.
pub fn lagrange_eval(nodes: &[f64], xs: &[f64]) -> Result<BasisTable, FemError> {
    Ok(LagrangeBasis::new(nodes)?.table(xs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{quad_rule, QuadKind};

    #[test]
    fn linear_hats() {
        let t = lagrange_eval(&[-1.0, 1.0], &[0.0, -0.3, 1.0]).unwrap();
        assert_eq!(t.values[0][0], 0.5);
        assert_eq!(t.values[1][0], 0.5);
        for p in 0..3 {
            assert!((t.derivatives[0][p] + 0.5).abs() < 1e-15);
            assert!((t.derivatives[1][p] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn duplicate_nodes_rejected() {
        assert!(matches!(
            lagrange_eval(&[0.0, 0.5, 0.5], &[0.1]),
            Err(FemError::DuplicateNodes { .. })
        ));
    }

    #[test]
    fn kronecker_property_and_partition_of_unity() {
        let nodes = quad_rule(QuadKind::GaussLobatto, 9).unwrap().points;
        let t = lagrange_eval(&nodes, &nodes).unwrap();
        for i in 0..nodes.len() {
            for j in 0..nodes.len() {
                assert_eq!(t.values[i][j], if i == j { 1.0 } else { 0.0 });
            }
        }
        let xs = [-0.99, -0.37, 0.0001, 0.5, 0.87];
        let t = lagrange_eval(&nodes, &xs).unwrap();
        for p in 0..xs.len() {
            let s: f64 = t.values.iter().map(|row| row[p]).sum();
            let ds: f64 = t.derivatives.iter().map(|row| row[p]).sum();
            assert!((s - 1.0).abs() < 1e-14);
            assert!(ds.abs() < 1e-12);
        }
    }

    #[test]
    fn reproduces_cubic_and_its_derivative() {
        let nodes = quad_rule(QuadKind::GaussLobatto, 5).unwrap().points;
        let f = |x: f64| 2.0 * x * x * x - x + 0.5;
        let df = |x: f64| 6.0 * x * x - 1.0;
        let xs = [-0.8, -0.1, 0.3, 0.6547, 0.6548];
        let t = lagrange_eval(&nodes, &xs).unwrap();
        for (p, &x) in xs.iter().enumerate() {
            let v: f64 = (0..nodes.len()).map(|j| f(nodes[j]) * t.values[j][p]).sum();
            let d: f64 = (0..nodes.len()).map(|j| f(nodes[j]) * t.derivatives[j][p]).sum();
            assert!((v - f(x)).abs() < 1e-13);
            assert!((d - df(x)).abs() < 1e-11, "x={x} d={d}");
        }
    }
}
