use serde::{Deserialize, Serialize};

use super::modal::{thermal2d_gain_modal, Thermal2dParams};
use super::{
    gain_trajectory, thermal1d_model, wave_gain_balanced, GainFunction, ModelError, Profile, WaveParams,
};
use crate::linalg::Matrix;
use crate::riccati::{CareOptions, DreConfig};

/// Highest single-element order accepted for 1D references.
pub const MAX_REFERENCE_ORDER: usize = 160;
/// Modes entering the Newton solve of the structured 2D solver.
pub const MODAL_MODE_CAP: usize = 1600;

/// Finite-horizon 1D heat model with terminal weight `P(τ) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thermal1dParams {
    pub alpha: f64,
    pub beta: f64,
    pub b: Profile,
    pub q: Profile,
    pub tau: f64,
    pub dt: f64,
}

/// A model family; `(n, k)` picks the discretization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    Thermal1d(Thermal1dParams),
    Thermal2d(Thermal2dParams),
    Wave(WaveParams),
}

impl ModelSpec {
    /// Gain on `n` elements of order `k`: `t = 0` of the DRE for the 1D heat
    /// model, the CARE gain otherwise.
    pub fn gain(&self, n: usize, k: usize) -> Result<GainFunction, ModelError> {
        match self {
            Self::Thermal1d(p) => {
                let model = thermal1d_model(n, k, p.alpha, p.beta, p.b, p.q)?;
                let cfg = DreConfig::new(p.tau, p.dt, Matrix::zeros(model.dim(), model.dim()));
                Ok(gain_trajectory(&model, &cfg)?.initial)
            }
            Self::Thermal2d(p) => Ok(thermal2d_gain_modal(n, k, p, MODAL_MODE_CAP)?.gain),
            Self::Wave(p) => wave_gain_balanced(n, k, p, &CareOptions::default()),
        }
    }

    pub fn is_1d(&self) -> bool {
        !matches!(self, Self::Thermal2d(_))
    }
}

/// Gain on a single element of order `p` with Gauss-Lobatto nodes.
pub fn reference_1d(spec: &ModelSpec, p: usize) -> Result<GainFunction, ModelError> {
    if !spec.is_1d() {
        return Err(ModelError::InvalidParameter("spectral reference is 1D only".into()));
    }
    if p == 0 || p > MAX_REFERENCE_ORDER {
        return Err(ModelError::InvalidParameter(format!(
            "reference order must lie in 1..={MAX_REFERENCE_ORDER}, got {p}"
        )));
    }
    spec.gain(1, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_equals_matching_coarse_model() {
        let spec = ModelSpec::Thermal1d(Thermal1dParams {
            alpha: 1.0,
            beta: 1.0,
            b: Profile::Bump1d,
            q: Profile::Bump1d,
            tau: 0.02,
            dt: 0.01,
        });
        let a = reference_1d(&spec, 3).unwrap().coeffs();
        let b = spec.gain(1, 3).unwrap().coeffs();
        assert_eq!(a, b);
        assert!(reference_1d(&spec, 161).is_err());
    }

    #[test]
    fn serde_tagging() {
        let spec = ModelSpec::Wave(WaveParams {
            c: 1.0,
            gamma: 1e-4,
            b1: Profile::Zero,
            b2: Profile::Bump1d,
            q1: Profile::Bump1d,
            q2: Profile::Zero,
            beta_weight: 1.0,
        });
        let js = serde_json::to_string(&spec).unwrap();
        assert!(js.contains("\"model\":\"wave\""));
        assert_eq!(serde_json::from_str::<ModelSpec>(&js).unwrap(), spec);
    }
}
