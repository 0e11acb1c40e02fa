//! The model `∂̄` problem near a cusp, in polar coordinates on the punctured
//! disk `0 < r < A`, with weights `‖σ‖^2 ~ r^α |log r|^k`.

pub mod adapted;
pub mod form;
pub mod grid;
pub mod obstruction;
pub mod solver;
pub mod sweep;
pub mod theta;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use form::{FormDegree, FourierRadialForm, ProfileForm, ProfileTerm, RadialProfile};
pub use grid::RadialGrid;
pub use solver::{norm_form01, norm_section, residual, solve, Solution};

pub const DEFAULT_A: f64 = 0.5;
pub const DEFAULT_EPSILONS: [f64; 3] = [1e-2, 1e-4, 1e-6];
pub const DEFAULT_GRID_LEVEL: u32 = 12;
pub const DEFAULT_N_MAX: i32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormParams {
    pub alpha: f64,
    pub k: i32,
    #[serde(rename = "A")]
    pub a: f64,
}

impl WeightedNormParams {
    pub fn new(alpha: f64, k: i32, a: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::Domain(format!("alpha = {alpha} must lie in [0, 1)")));
        }
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!("A = {a} must lie in (0, 1)")));
        }
        Ok(Self { alpha, k, a })
    }

    /// `α = 0` with `k ≠ 1`, or `α > 0`.
    pub fn is_admissible(&self) -> bool {
        self.alpha > 0.0 || self.k != 1
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::Inadmissible {
                alpha: self.alpha,
                k: self.k,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        assert!(WeightedNormParams::new(0.0, 0, 0.5).unwrap().is_admissible());
        assert!(!WeightedNormParams::new(0.0, 1, 0.5).unwrap().is_admissible());
        assert!(WeightedNormParams::new(0.25, 1, 0.5).unwrap().is_admissible());
        assert!(WeightedNormParams::new(1.0, 0, 0.5).is_err());
        assert!(WeightedNormParams::new(0.5, 0, 1.0).is_err());
        assert!(matches!(
            WeightedNormParams::new(0.0, 1, 0.5).unwrap().require_admissible(),
            Err(Error::Inadmissible { .. })
        ));
    }
}
