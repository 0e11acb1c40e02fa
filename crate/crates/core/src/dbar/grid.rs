use serde::Serialize;

use crate::error::{Error, Result};

/// Radii `ε = r_0 < ... < r_M = A`, uniform in `x = log(1/r)`, `M = 2^level`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    pub epsilon: f64,
    pub a: f64,
    pub level: u32,
    /// Spacing in `log r`.
    pub h: f64,
    pub r: Vec<f64>,
    /// `x = log(1/r)`, decreasing with the index.
    pub x: Vec<f64>,
    /// Trapezoid weights for integrals in `x` (equivalently in `log r`).
    pub weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(epsilon: f64, a: f64, level: u32) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!("outer radius A = {a} must lie in (0, 1)")));
        }
        if !(epsilon > 0.0 && epsilon < a) {
            return Err(Error::Domain(format!("cutoff ε = {epsilon} must lie in (0, A)")));
        }
        if level > 24 {
            return Err(Error::Domain(format!("grid level {level} is too fine")));
        }
        let m = 1usize << level;
        let (t0, t1) = (epsilon.ln(), a.ln());
        let h = (t1 - t0) / m as f64;
        let t: Vec<f64> = (0..=m).map(|i| if i == m { t1 } else { t0 + i as f64 * h }).collect();
        let mut r: Vec<f64> = t.iter().map(|t| t.exp()).collect();
        r[0] = epsilon;
        r[m] = a;
        let x = t.iter().map(|t| -t).collect();
        let weights = (0..=m).map(|i| if i == 0 || i == m { h / 2.0 } else { h }).collect();
        Ok(Self {
            epsilon,
            a,
            level,
            h,
            r,
            x,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn refine(&self) -> Result<Self> {
        Self::new(self.epsilon, self.a, self.level + 1)
    }

    /// Trapezoid sum of `g(i)` against `d log r` over `[ε, A]`.
    pub fn integrate(&self, g: impl Fn(usize) -> f64) -> f64 {
        self.weights.iter().enumerate().map(|(i, w)| w * g(i)).sum()
    }
}
