use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::fem::{assemble_functional, FemError, FemSpace, Load};

/// Bump profiles are set to zero this close to the edge of their support.
const SUPPORT_EDGE: f64 = 1e-12;

/// Actuator and observation profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Zero,
    /// `exp(−1/(1−x²))` on `(−1, 1)`.
    Bump1d,
    /// `exp(−2/(1−(2x−1)²)) · exp(−2/(1−(2y−1)²))` on `(0, 1)²`.
    Bump2d,
    /// `exp(−x² − y²)`.
    Gaussian2d,
    /// Point mass at `x = 0`.
    Delta1d,
}

pub fn bump1d(x: f64) -> f64 {
    let t = 1.0 - x * x;
    if t <= SUPPORT_EDGE {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn bump_unit(x: f64) -> f64 {
    let u = 2.0 * x - 1.0;
    let t = 1.0 - u * u;
    if t <= SUPPORT_EDGE {
        0.0
    } else {
        (-2.0 / t).exp()
    }
}

pub fn bump2d(x: f64, y: f64) -> f64 {
    bump_unit(x) * bump_unit(y)
}

pub fn gaussian2d(x: f64, y: f64) -> f64 {
    (-x * x - y * y).exp()
}

impl Profile {
    pub fn from_name(name: &str) -> Result<Self, ModelError> {
        match name {
            "zero" => Ok(Self::Zero),
            "bump1d" => Ok(Self::Bump1d),
            "bump2d" => Ok(Self::Bump2d),
            "gaussian2d" => Ok(Self::Gaussian2d),
            "delta1d" => Ok(Self::Delta1d),
            _ => Err(ModelError::UnknownProfile(name.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::Bump1d => "bump1d",
            Self::Bump2d => "bump2d",
            Self::Gaussian2d => "gaussian2d",
            Self::Delta1d => "delta1d",
        }
    }

    /// Location of a point-mass profile.
    pub fn point(&self) -> Option<&'static [f64]> {
        match self {
            Self::Delta1d => Some(&[0.0]),
            _ => None,
        }
    }

    /// Pointwise value. Point masses return zero; use [`Profile::load`].
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Self::Zero | Self::Delta1d => 0.0,
            Self::Bump1d => bump1d(x[0]),
            Self::Bump2d => bump2d(x[0], x[1]),
            Self::Gaussian2d => gaussian2d(x[0], x[1]),
        }
    }

    /// `∫ f φ_i` on the free dofs (`φ_i(x₀)` for a point mass).
    pub fn load(&self, space: &FemSpace) -> Result<Vec<f64>, FemError> {
        match self {
            Self::Zero => Ok(vec![0.0; space.n_free()]),
            Self::Delta1d => assemble_functional(space, &Load::PointMass(&[0.0])),
            _ => {
                let f = |x: &[f64]| self.eval(x);
                assemble_functional(space, &Load::Density(&f))
            }
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_name(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert!((bump1d(0.0) - (-1f64).exp()).abs() < 1e-16);
        assert_eq!(bump1d(1.0), 0.0);
        assert_eq!(bump1d(-1.0), 0.0);
        assert_eq!(bump1d(1.0 - 1e-14), 0.0);
        assert!((bump2d(0.5, 0.5) - (-4f64).exp()).abs() < 1e-17);
        assert_eq!(bump2d(0.0, 0.5), 0.0);
        assert!((gaussian2d(1.0, 0.0) - (-1f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn names() {
        for p in [Profile::Zero, Profile::Bump1d, Profile::Bump2d, Profile::Gaussian2d, Profile::Delta1d] {
            assert_eq!(Profile::from_name(p.name()).unwrap(), p);
        }
        assert!(matches!(Profile::from_name("tophat"), Err(ModelError::UnknownProfile(_))));
    }
}
