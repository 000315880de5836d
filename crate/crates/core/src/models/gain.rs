use crate::fem::FemField;
use crate::linalg::Matrix;
use crate::riccati::{dre_solve, DreConfig, DreTrajectory};

use super::{ModelError, StateSpace};

/// Functional gain `κ`, one field per state component.
#[derive(Debug, Clone)]
pub struct GainFunction {
    pub components: Vec<FemField>,
}

impl GainFunction {
    pub fn new(components: Vec<FemField>) -> Result<Self, ModelError> {
        if components.is_empty() {
            return Err(ModelError::Dimension("gain needs at least one component".into()));
        }
        if components.iter().any(|f| f.coeffs().iter().any(|c| !c.is_finite())) {
            return Err(ModelError::Dimension("gain coefficients are not finite".into()));
        }
        Ok(Self { components })
    }

    /// All coefficients, component by component.
    pub fn coeffs(&self) -> Vec<f64> {
        self.components.iter().flat_map(|f| f.coeffs().iter().copied()).collect()
    }
}

/// `κ̂ = R⁻¹BᵀPM⁻¹`, split into the model's state components.
pub fn gain_from_care(model: &StateSpace, p: &Matrix) -> Result<GainFunction, ModelError> {
    let n = model.dim();
    if p.rows() != n || p.cols() != n {
        return Err(ModelError::Dimension(format!(
            "P is {}x{}, model has {n} states",
            p.rows(),
            p.cols()
        )));
    }
    // κ̂ᵀ = M⁻¹ P B R⁻¹ since M and P are symmetric
    let pb = p.matvec(&model.b.col_vec(0));
    let r = model.r[(0, 0)];
    let scaled: Vec<f64> = pb.iter().map(|v| v / r).collect();
    let kappa = model.mass_chol.solve_vec(&scaled);
    let len = model.component_len();
    let components = model
        .spaces
        .iter()
        .enumerate()
        .map(|(i, space)| FemField::new(space.clone(), kappa[i * len..(i + 1) * len].to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    GainFunction::new(components)
}

/// Gain at `t = 0` together with gains at every stored DRE sample.
#[derive(Debug, Clone)]
pub struct GainTrajectory {
    pub initial: GainFunction,
    /// `(t, κ(t))` from `t = τ` down to `t = 0`.
    pub samples: Vec<(f64, GainFunction)>,
    pub trajectory: DreTrajectory,
}

/// Solves the DRE backwards from `P(τ)` and forms the gain at `t = 0`.
pub fn gain_trajectory(model: &StateSpace, config: &DreConfig) -> Result<GainTrajectory, ModelError> {
    let problem = model.care_problem()?;
    let trajectory = dre_solve(&problem, config)?;
    let initial = gain_from_care(model, trajectory.initial())?;
    let samples = if config.sample_every.is_some() {
        trajectory
            .samples
            .iter()
            .map(|(t, p)| Ok((*t, gain_from_care(model, p)?)))
            .collect::<Result<Vec<_>, ModelError>>()?
    } else {
        Vec::new()
    };
    Ok(GainTrajectory {
        initial,
        samples,
        trajectory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{thermal1d_model, Profile};
    use crate::riccati::{solve_care, CareOptions};

    #[test]
    fn zero_riccati_gives_zero_gain() {
        let m = thermal1d_model(4, 2, 1.0, 1.0, Profile::Bump1d, Profile::Bump1d).unwrap();
        let g = gain_from_care(&m, &Matrix::zeros(m.dim(), m.dim())).unwrap();
        assert!(g.coeffs().iter().all(|&c| c == 0.0));
        assert!(gain_from_care(&m, &Matrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn single_linear_element_matches_scalar_relation() {
        // With one P1 element and even profiles only the constant mode is
        // controlled and observed: ζ' = −βζ + ℓu, y = 2ℓζ, so κ̂ = σℓ/2 at
        // both nodes with σ the scalar Riccati root for (β, 4ℓ², ℓ²).
        let m = thermal1d_model(1, 1, 1.0, 1.0, Profile::Bump1d, Profile::Bump1d).unwrap();
        let ell = Profile::Bump1d.load(&m.spaces[0]).unwrap()[0];
        let sigma = crate::models::scalar_sigma(1.0, 4.0 * ell * ell, ell * ell).unwrap();
        let sol = solve_care(&m.care_problem().unwrap(), &CareOptions::default()).unwrap();
        let c = gain_from_care(&m, &sol.p).unwrap().coeffs();
        for v in c {
            assert!((v - sigma * ell / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn symmetric_gain_for_even_profiles() {
        let m = thermal1d_model(6, 3, 1.0, 1.0, Profile::Bump1d, Profile::Bump1d).unwrap();
        let sol = solve_care(&m.care_problem().unwrap(), &CareOptions::default()).unwrap();
        let c = gain_from_care(&m, &sol.p).unwrap().coeffs();
        let n = c.len();
        for i in 0..n {
            assert!((c[i] - c[n - 1 - i]).abs() < 1e-10 * c[n / 2].abs());
        }
    }

    #[test]
    fn steady_terminal_gives_steady_gain() {
        let m = thermal1d_model(4, 2, 1.0, 1.0, Profile::Bump1d, Profile::Bump1d).unwrap();
        let sol = solve_care(&m.care_problem().unwrap(), &CareOptions::default()).unwrap();
        let steady = gain_from_care(&m, &sol.p).unwrap().coeffs();
        let mut cfg = DreConfig::new(0.05, 0.01, sol.p.clone());
        cfg.sample_every = Some(1);
        let tr = gain_trajectory(&m, &cfg).unwrap();
        assert_eq!(tr.samples.len(), 6);
        for (_, g) in &tr.samples {
            for (a, b) in g.coeffs().iter().zip(&steady) {
                assert!((a - b).abs() < 1e-9 * steady[4].abs());
            }
        }
    }
}
