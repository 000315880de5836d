use serde::{Deserialize, Serialize};

use super::ModelError;

/// `σ' = −2aσ − gσ² + f` with the decay rate perturbed to `a + ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarSystem {
    pub a: f64,
    /// State weight `c²`.
    pub f: f64,
    /// Control weight `b²`.
    pub g: f64,
    pub eps: f64,
}

impl ScalarSystem {
    pub fn new(a: f64, f: f64, g: f64, eps: f64) -> Result<Self, ModelError> {
        let sys = Self { a, f, g, eps };
        sys.validate()?;
        Ok(sys)
    }

    fn validate(&self) -> Result<(), ModelError> {
        if !(self.a > 0.0 && self.g > 0.0 && self.f >= 0.0 && self.a + self.eps > 0.0) {
            return Err(ModelError::InvalidParameter(format!(
                "scalar system needs a > 0, g > 0, f >= 0, a + eps > 0 (got a={}, f={}, g={}, eps={})",
                self.a, self.f, self.g, self.eps
            )));
        }
        Ok(())
    }

    pub fn sigma(&self) -> f64 {
        sigma_unchecked(self.a, self.f, self.g)
    }

    pub fn sigma_eps(&self) -> f64 {
        sigma_unchecked(self.a + self.eps, self.f, self.g)
    }
}

// (−a + √(a² + gf))/g written without cancellation for large a.
fn sigma_unchecked(a: f64, f: f64, g: f64) -> f64 {
    f / (a + (a * a + g * f).sqrt())
}

/// Nonnegative root of `−2aσ − gσ² + f = 0`.
pub fn scalar_sigma(a: f64, f: f64, g: f64) -> Result<f64, ModelError> {
    Ok(ScalarSystem::new(a, f, g, 0.0)?.sigma())
}

/// `(ε, |σ − σ_ε|)` for every ε in the grid.
pub fn scalar_study(a: f64, f: f64, g: f64, eps_grid: &[f64]) -> Result<Vec<(f64, f64)>, ModelError> {
    eps_grid
        .iter()
        .map(|&eps| {
            let sys = ScalarSystem::new(a, f, g, eps)?;
            Ok((eps, (sys.sigma() - sys.sigma_eps()).abs()))
        })
        .collect()
}

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (l0, l1) = (lo.log10(), hi.log10());
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        hi
                    } else {
                        10f64.powf(l0 + (l1 - l0) * i as f64 / (count - 1) as f64)
                    }
                })
                .collect()
        }
    }
}

/// Default ε grid: 16 points in `[1e-4, 1]`.
pub fn default_eps_grid() -> Vec<f64> {
    log_grid(1e-4, 1.0, 16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((scalar_sigma(1.0, 1.0, 1.0).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((scalar_sigma(2.0, 1.0, 1.0).unwrap() - (5f64.sqrt() - 2.0)).abs() < 1e-15);
        assert_eq!(scalar_sigma(1.0, 0.0, 1.0).unwrap(), 0.0);
        assert!(scalar_sigma(0.0, 1.0, 1.0).is_err());
        assert!(scalar_sigma(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn riccati_identity() {
        for (a, f, g) in [(1.0, 1.0, 1.0), (0.3, 2.0, 5.0), (10.0, 0.1, 0.01)] {
            let s = scalar_sigma(a, f, g).unwrap();
            assert!((-2.0 * a * s - g * s * s + f).abs() < 1e-14);
        }
    }

    #[test]
    fn study_values() {
        let rows = scalar_study(1.0, 1.0, 1.0, &[0.0, 0.1]).unwrap();
        assert_eq!(rows[0].1, 0.0);
        let expected = (2f64.sqrt() - 1.0) - (-1.1 + 2.21f64.sqrt());
        assert!((rows[1].1 - expected).abs() < 1e-15);
        assert!((rows[1].1 - 0.027607).abs() < 1e-6);
    }

    #[test]
    fn grid() {
        let g = default_eps_grid();
        assert_eq!(g.len(), 16);
        assert!((g[0] - 1e-4).abs() < 1e-18);
        assert_eq!(g[15], 1.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
