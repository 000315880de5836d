use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::StudyError;
use crate::models::{
    default_eps_grid, ModelSpec, Profile, Thermal1dParams, Thermal2dParams, WaveParams, MAX_REFERENCE_ORDER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    Scalar,
    Thermal1d,
    Thermal2d,
    Wave,
    ViolationGaussian2d,
    ViolationDelta1d,
}

impl Case {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Scalar => "scalar",
            Self::Thermal1d => "thermal1d",
            Self::Thermal2d => "thermal2d",
            Self::Wave => "wave",
            Self::ViolationGaussian2d => "violation-gaussian2d",
            Self::ViolationDelta1d => "violation-delta1d",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            Self::Scalar,
            Self::Thermal1d,
            Self::Thermal2d,
            Self::Wave,
            Self::ViolationGaussian2d,
            Self::ViolationDelta1d,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }

    pub fn is_2d(&self) -> bool {
        matches!(self, Self::Thermal2d | Self::ViolationGaussian2d)
    }

    /// Rate the theory predicts for order `k` (used for plot guides).
    pub fn expected_rate(&self, k: usize) -> f64 {
        match self {
            Self::Scalar => 1.0,
            Self::Wave => k as f64,
            Self::ViolationGaussian2d => 0.9,
            _ => (k + 1) as f64,
        }
    }
}

/// How the reference gain is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceSpec {
    /// Single element of this order (1D).
    Spectral(usize),
    /// Same order on a mesh this many times finer than the finest study mesh.
    Refine(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub case: Case,
    pub orders: Vec<usize>,
    pub mesh_sizes: Vec<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub c: f64,
    /// Control weight (`R`).
    pub r: f64,
    pub tau: f64,
    pub dt: f64,
    pub eps_grid: Vec<f64>,
    pub reference: ReferenceSpec,
    /// Errors at or below this level are left out of the rate fit.
    pub floor: f64,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl StudyConfig {
    /// Desk-scale defaults.
    pub fn for_case(case: Case) -> Self {
        let base = Self {
            case,
            orders: vec![1, 2, 3, 4],
            mesh_sizes: vec![4, 8, 16, 32],
            alpha: 1.0,
            beta: 1.0,
            gamma: 1e-4,
            c: 1.0,
            r: 1.0,
            tau: 0.1,
            dt: 1e-3,
            eps_grid: Vec::new(),
            reference: ReferenceSpec::Spectral(128),
            floor: super::DEFAULT_FLOOR,
            out: None,
            plot: None,
        };
        match case {
            Case::Scalar => Self {
                orders: vec![1],
                mesh_sizes: Vec::new(),
                eps_grid: default_eps_grid(),
                ..base
            },
            Case::Thermal1d | Case::ViolationDelta1d => base,
            Case::Wave => Self {
                orders: vec![1, 2, 3],
                ..base
            },
            Case::Thermal2d => Self {
                orders: vec![1, 2],
                mesh_sizes: vec![4, 8, 16],
                alpha: 1e-2,
                r: 1e-4,
                reference: ReferenceSpec::Refine(4),
                ..base
            },
            Case::ViolationGaussian2d => Self {
                orders: vec![2],
                mesh_sizes: vec![4, 8, 16],
                alpha: 1e-2,
                r: 1e-4,
                reference: ReferenceSpec::Refine(4),
                ..base
            },
        }
    }

    /// Parameters as published: `Δt = 1e-4` for the 1D heat model and all
    /// four orders for the wave model.
    pub fn paper(case: Case) -> Self {
        let mut cfg = Self::for_case(case);
        match case {
            Case::Thermal1d | Case::ViolationDelta1d => cfg.dt = 1e-4,
            Case::Wave => {
                cfg.orders = vec![1, 2, 3, 4];
                cfg.c = 1.0;
                cfg.gamma = 1e-4;
                cfg.r = 1.0;
            }
            Case::Thermal2d => {
                cfg.alpha = 1e-2;
                cfg.beta = 1.0;
                cfg.r = 1e-4;
                cfg.orders = vec![1, 2];
            }
            _ => {}
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), StudyError> {
        let bad = |m: String| Err(StudyError::InvalidConfig(m));
        if self.case == Case::Scalar {
            if self.eps_grid.is_empty() {
                return bad("eps grid is empty".into());
            }
            if self.eps_grid.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
                return bad("eps values must be positive".into());
            }
            return Ok(());
        }
        if self.orders.is_empty() || self.orders.contains(&0) {
            return bad("orders must be a nonempty list of positive integers".into());
        }
        if self.mesh_sizes.is_empty() || self.mesh_sizes.contains(&0) {
            return bad("elements must be a nonempty list of positive integers".into());
        }
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("c", self.c),
            ("r", self.r),
            ("tau", self.tau),
            ("dt", self.dt),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if self.dt > self.tau {
            return bad(format!("dt = {} exceeds tau = {}", self.dt, self.tau));
        }
        if !(self.floor >= 0.0) {
            return bad("floor must be nonnegative".into());
        }
        match (self.case.is_2d(), self.reference) {
            (false, ReferenceSpec::Spectral(p)) if p == 0 || p > MAX_REFERENCE_ORDER => {
                bad(format!("reference order must lie in 1..={MAX_REFERENCE_ORDER}"))
            }
            (_, ReferenceSpec::Refine(f)) if f < 2 => bad("refinement factor must be >= 2".into()),
            (true, ReferenceSpec::Spectral(_)) => bad("2D studies need a refined-mesh reference".into()),
            _ => Ok(()),
        }
    }

    /// The model family studied (`None` for the scalar case).
    pub fn model(&self) -> Option<ModelSpec> {
        let thermal1d = |b| {
            ModelSpec::Thermal1d(Thermal1dParams {
                alpha: self.alpha,
                beta: self.beta,
                b,
                q: Profile::Bump1d,
                tau: self.tau,
                dt: self.dt,
            })
        };
        let thermal2d = |p| {
            ModelSpec::Thermal2d(Thermal2dParams {
                alpha: self.alpha,
                beta: self.beta,
                r: self.r,
                b: p,
                q: p,
            })
        };
        match self.case {
            Case::Scalar => None,
            Case::Thermal1d => Some(thermal1d(Profile::Bump1d)),
            Case::ViolationDelta1d => Some(thermal1d(Profile::Delta1d)),
            Case::Thermal2d => Some(thermal2d(Profile::Bump2d)),
            Case::ViolationGaussian2d => Some(thermal2d(Profile::Gaussian2d)),
            Case::Wave => Some(ModelSpec::Wave(WaveParams {
                c: self.c,
                gamma: self.gamma,
                b1: Profile::Zero,
                b2: Profile::Bump1d,
                q1: Profile::Bump1d,
                q2: Profile::Zero,
                beta_weight: self.r,
            })),
        }
    }

    /// Mesh width for `n` elements per direction.
    pub fn h(&self, n: usize) -> f64 {
        if self.case.is_2d() {
            1.0 / n as f64
        } else {
            2.0 / n as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for case in [
            Case::Scalar,
            Case::Thermal1d,
            Case::Thermal2d,
            Case::Wave,
            Case::ViolationGaussian2d,
            Case::ViolationDelta1d,
        ] {
            StudyConfig::for_case(case).validate().unwrap();
            StudyConfig::paper(case).validate().unwrap();
            assert_eq!(Case::from_name(case.name()), Some(case));
        }
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = StudyConfig::for_case(Case::Thermal1d);
        c.dt = 0.0;
        assert!(c.validate().is_err());
        let mut c = StudyConfig::for_case(Case::Thermal2d);
        c.reference = ReferenceSpec::Spectral(8);
        assert!(c.validate().is_err());
        let mut c = StudyConfig::for_case(Case::Wave);
        c.orders.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = StudyConfig::paper(Case::Wave);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<StudyConfig>(&s).unwrap(), c);
    }
}
